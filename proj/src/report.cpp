#include "subcert/report.hpp"

#include <cmath>
#include <cstdio>

namespace subcert::report {

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void indent(std::string& out, int depth) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
}

}  // namespace

std::string format_double17(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Json::write(std::string& out, int depth) const {
  switch (v_.index()) {
    case 0:
      out += "null";
      break;
    case 1:
      out += std::get<bool>(v_) ? "true" : "false";
      break;
    case 2:
      out += std::to_string(std::get<std::int64_t>(v_));
      break;
    case 3:
      out += format_double17(std::get<double>(v_));
      break;
    case 4:
      write_escaped(out, std::get<std::string>(v_));
      break;
    case 5: {
      const Array& a = std::get<Array>(v_);
      if (a.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < a.size(); ++i) {
        indent(out, depth + 1);
        a[i].write(out, depth + 1);
        if (i + 1 < a.size()) out += ',';
        out += '\n';
      }
      indent(out, depth);
      out += ']';
      break;
    }
    case 6: {
      const Object& o = std::get<Object>(v_);
      if (o.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      size_t i = 0;
      for (const auto& [k, v] : o) {
        indent(out, depth + 1);
        write_escaped(out, k);
        out += ": ";
        v.write(out, depth + 1);
        if (++i < o.size()) out += ',';
        out += '\n';
      }
      indent(out, depth);
      out += '}';
      break;
    }
  }
}

std::string Json::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

Json make_check(const std::string& name, bool pass, double value,
                double tolerance) {
  Object o;
  o["name"] = name;
  o["pass"] = pass;
  o["value"] = value;
  o["tolerance"] = tolerance;
  return Json(std::move(o));
}

Object exit_code_semantics() {
  Object o;
  o["0"] = "success";
  o["2"] = "validation failure";
  o["3"] = "internal invariant violation";
  o["4"] = "io error";
  o["5"] = "parse error";
  o["6"] = "parameter error";
  return o;
}

}  // namespace subcert::report
