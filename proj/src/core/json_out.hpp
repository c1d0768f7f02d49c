// Minimal streaming JSON emitter. Output files need every number in fixed
// decimal notation with at least two fractional digits, which general JSON
// libraries do not offer, so the writers in this project go through here.
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace trackenrich::json_out {

/// Shortest fixed-notation text that round-trips `v`, padded to at least
/// `min_fraction` fractional digits. Non-finite values become `null`.
std::string format_number(double v, int min_fraction = 2);

std::string quote(std::string_view s);

class Writer {
 public:
  explicit Writer(std::ostream& os, bool pretty = true) : os_(os), pretty_(pretty) {}

  Writer& begin_object();
  Writer& end_object();
  Writer& begin_array();
  Writer& end_array();
  Writer& key(std::string_view k);
  Writer& value(double v);
  Writer& value(std::optional<double> v);
  Writer& value_int(long long v);
  Writer& value(bool v);
  Writer& value(std::string_view s);
  Writer& value(const char* s) { return value(std::string_view(s)); }
  Writer& null();

 private:
  void before_value();
  void newline();

  struct Level {
    bool array = false;
    bool empty = true;
  };
  std::ostream& os_;
  bool pretty_;
  bool after_key_ = false;
  std::vector<Level> stack_;
};

}  // namespace trackenrich::json_out
