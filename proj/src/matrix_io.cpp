#include "subcert/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "subcert/errors.hpp"
#include "subcert/report.hpp"

namespace subcert {

namespace {

FileFormat resolve(const std::string& path, FileFormat fmt) {
  if (fmt != FileFormat::Auto) return fmt;
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json")
    return FileFormat::Json;
  return FileFormat::Csv;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return std::move(buf).str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view raw, const std::string& path, int line) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(path + ":" + std::to_string(line) + ": not a number: '" +
                     std::string(raw) + "'");
  return value;
}

std::vector<Vec2> parse_csv(const std::string& text, const std::string& path) {
  std::vector<Vec2> rows;
  size_t pos = 0;
  int line = 0;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    const std::string_view raw(text.data() + pos,
                               (eol == std::string::npos ? text.size() : eol) - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line;
    if (trim(raw).empty()) continue;
    const size_t comma = raw.find(',');
    if (comma == std::string_view::npos ||
        raw.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(path + ":" + std::to_string(line) +
                       ": expected exactly two comma-separated fields");
    rows.push_back({parse_field(raw.substr(0, comma), path, line),
                    parse_field(raw.substr(comma + 1), path, line)});
  }
  return rows;
}

std::vector<Vec2> parse_pairs(const nlohmann::json& arr, const std::string& path,
                              const char* what) {
  if (!arr.is_array())
    throw ParseError(path + ": '" + what + "' must be an array");
  std::vector<Vec2> rows;
  rows.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError(path + ": each entry of '" + std::string(what) +
                       "' must be a pair of numbers");
    rows.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return rows;
}

nlohmann::json parse_json(const std::string& text, const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError(path + ": invalid JSON");
  if (!doc.is_object()) throw ParseError(path + ": top level must be an object");
  return doc;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace

StiefelMatrix read_matrix(const std::string& path, FileFormat fmt) {
  const std::string text = slurp(path);
  std::vector<Vec2> rows;
  if (resolve(path, fmt) == FileFormat::Csv) {
    rows = parse_csv(text, path);
  } else {
    const nlohmann::json doc = parse_json(text, path);
    if (!doc.contains("n") || !doc["n"].is_number_integer())
      throw ParseError(path + ": missing integer field 'n'");
    if (!doc.contains("rows")) throw ParseError(path + ": missing field 'rows'");
    rows = parse_pairs(doc["rows"], path, "rows");
    if (doc["n"].get<std::int64_t>() != static_cast<std::int64_t>(rows.size()))
      throw ParseError(path + ": 'n' is " + doc["n"].dump() + " but 'rows' has " +
                       std::to_string(rows.size()) + " entries");
  }
  return StiefelMatrix::validate(std::move(rows));
}

void write_matrix(const std::string& path, const StiefelMatrix& a,
                  FileFormat fmt) {
  std::string text;
  if (resolve(path, fmt) == FileFormat::Csv) {
    for (int i = 0; i < a.n(); ++i)
      text += report::format_double17(a.row(i).x) + "," +
              report::format_double17(a.row(i).y) + "\n";
  } else {
    report::Array rows;
    for (int i = 0; i < a.n(); ++i)
      rows.push_back(report::Array{a.row(i).x, a.row(i).y});
    report::Object doc;
    doc["n"] = a.n();
    doc["rows"] = std::move(rows);
    text = report::Json(std::move(doc)).dump();
  }
  write_text(path, text);
}

PolygonInstance read_polygon(const std::string& path, FileFormat fmt) {
  const std::string text = slurp(path);
  std::vector<Vec2> edges;
  if (resolve(path, fmt) == FileFormat::Csv) {
    edges = parse_csv(text, path);
  } else {
    const nlohmann::json doc = parse_json(text, path);
    if (!doc.contains("vectors"))
      throw ParseError(path + ": missing field 'vectors'");
    edges = parse_pairs(doc["vectors"], path, "vectors");
  }
  return PolygonInstance::from_vectors(std::move(edges));
}

}  // namespace subcert
