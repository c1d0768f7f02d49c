#include "core/json_out.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace trackenrich::json_out {

std::string format_number(double v, int min_fraction) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  std::string s(buf, res.ptr);
  const auto dot = s.find('.');
  int have = 0;
  if (dot == std::string::npos) {
    if (min_fraction > 0) s.push_back('.');
  } else {
    have = static_cast<int>(s.size() - dot - 1);
  }
  for (; have < min_fraction; ++have) s.push_back('0');
  return s;
}

std::string quote(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char esc[8];
          std::snprintf(esc, sizeof(esc), "\\u%04x", c);
          out += esc;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

void Writer::newline() {
  if (!pretty_) return;
  os_ << '\n';
  for (std::size_t i = 0; i < stack_.size(); ++i) os_ << "  ";
}

void Writer::before_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (stack_.empty()) return;
  if (!stack_.back().array) throw std::logic_error("json writer: value inside object needs a key");
  if (!stack_.back().empty) os_ << ',';
  stack_.back().empty = false;
  newline();
}

Writer& Writer::begin_object() {
  before_value();
  os_ << '{';
  stack_.push_back({false, true});
  return *this;
}

Writer& Writer::end_object() {
  const bool was_empty = stack_.back().empty;
  stack_.pop_back();
  if (!was_empty) newline();
  os_ << '}';
  return *this;
}

Writer& Writer::begin_array() {
  before_value();
  os_ << '[';
  stack_.push_back({true, true});
  return *this;
}

Writer& Writer::end_array() {
  const bool was_empty = stack_.back().empty;
  stack_.pop_back();
  if (!was_empty) newline();
  os_ << ']';
  return *this;
}

Writer& Writer::key(std::string_view k) {
  if (stack_.empty() || stack_.back().array) throw std::logic_error("json writer: key outside object");
  if (!stack_.back().empty) os_ << ',';
  stack_.back().empty = false;
  newline();
  os_ << quote(k) << (pretty_ ? ": " : ":");
  after_key_ = true;
  return *this;
}

Writer& Writer::value(double v) {
  before_value();
  os_ << format_number(v);
  return *this;
}

Writer& Writer::value(std::optional<double> v) {
  if (!v) return null();
  return value(*v);
}

Writer& Writer::value_int(long long v) {
  before_value();
  os_ << v;
  return *this;
}

Writer& Writer::value(bool v) {
  before_value();
  os_ << (v ? "true" : "false");
  return *this;
}

Writer& Writer::value(std::string_view s) {
  before_value();
  os_ << quote(s);
  return *this;
}

Writer& Writer::null() {
  before_value();
  os_ << "null";
  return *this;
}

}  // namespace trackenrich::json_out
