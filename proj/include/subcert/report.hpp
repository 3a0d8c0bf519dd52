#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace subcert::report {

/// Minimal JSON tree with a byte-stable printer: object keys iterate in
/// sorted order (std::map), doubles are rendered with 17 significant digits,
/// nesting is indented by two spaces. Reports serialized through this type
/// compare equal byte-for-byte across runs, platforms, and thread counts.
class Json;
using Array = std::vector<Json>;
using Object = std::map<std::string, Json>;

class Json {
 public:
  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<std::int64_t>(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}
  Json(Object o) : v_(std::move(o)) {}

  /// Serialized with a trailing newline at the top level.
  std::string dump() const;

 private:
  void write(std::string& out, int depth) const;

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array,
               Object>
      v_;
};

/// Shortest-of-17-significant-digits rendering (printf %.17g); round-trips
/// every finite double. Non-finite values render as "null" to keep the
/// output valid JSON.
std::string format_double17(double x);

/// One entry of a report's "checks" list: every numerical claim carries the
/// tolerance it was judged against.
Json make_check(const std::string& name, bool pass, double value,
                double tolerance);

/// The exit-code contract, embedded into every report.
Object exit_code_semantics();

}  // namespace subcert::report
