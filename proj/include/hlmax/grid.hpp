#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "hlmax/errors.hpp"

namespace hlmax {

namespace detail {

inline double parse_double(std::string_view s, int line = 0) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ParseError("not a number: '" + std::string(s) + "'", line);
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace detail

// geo:<start>:<ratio>:<count>, values start * ratio^i for i = 0..count-1.
struct GridSpec {
  double start = 0.1;
  double ratio = 0.5;
  int count = 40;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v.push_back(start * std::pow(ratio, i));
    return v;
  }

  std::string str() const;
};

inline GridSpec parse_grid(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 4 || parts[0] != "geo")
    throw ParseError("grid must be geo:<start>:<ratio>:<count>, got '" + std::string(text) + "'");
  GridSpec g;
  g.start = detail::parse_double(parts[1]);
  g.ratio = detail::parse_double(parts[2]);
  const double count = detail::parse_double(parts[3]);
  if (!(g.start > 0) || !std::isfinite(g.start)) throw ParseError("grid start must be > 0");
  if (!(g.ratio > 0) || g.ratio == 1 || !std::isfinite(g.ratio))
    throw ParseError("grid ratio must be > 0 and != 1");
  if (!(count >= 1) || count != std::floor(count) || count > 1e7)
    throw ParseError("grid count must be a positive integer");
  g.count = static_cast<int>(count);
  return g;
}

inline std::string GridSpec::str() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "geo:%.17g:%.17g:%d", start, ratio, count);
  return buf;
}

}  // namespace hlmax
