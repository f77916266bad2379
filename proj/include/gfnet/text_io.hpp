#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "gfnet/error.hpp"

namespace gfnet {

/// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::parse_failure, "not a number: '" + std::string(s) + "'");
  return v;
}

inline long parse_long(std::string_view s) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::parse_failure, "not an integer: '" + std::string(s) + "'");
  return v;
}

/// Whitespace-separated token reader that reports what it expected.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word(std::string_view what) {
    std::string tok;
    if (!(in_ >> tok)) throw Error(ErrorKind::parse_failure, "unexpected end of input, expected " + std::string(what));
    return tok;
  }
  void expect(std::string_view literal) {
    const std::string tok = word(literal);
    if (tok != literal)
      throw Error(ErrorKind::parse_failure, "expected '" + std::string(literal) + "', got '" + tok + "'");
  }
  double real(std::string_view what) { return parse_double(word(what)); }
  long integer(std::string_view what) { return parse_long(word(what)); }

 private:
  std::istream& in_;
};

}  // namespace gfnet
