#pragma once

// Text formats. Measure files:
//   # comment
//   segment <t_start> constant <c>
//   segment <t_start> exp <a> <b>
//   segment <t_start> recip <a> <c>
//   tail periodic <T> [<start>]
//   profile <a> <b> <height>
// nu files: `atom <pos> <mass>` and `step <a> <b> <height>` lines.
// Inline nu: `atom:<pos>:<mass>` and `step:<a>:<b>:<h>` items joined by ';'.

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/grid.hpp"
#include "hlmax/measure.hpp"

namespace hlmax {

namespace detail {

template <class Real>
Real parse_real(std::string_view s, int line = 0) {
  const double d = parse_double(s, line);
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<Real>(d);
  } else {
    // keep every decimal digit the file provides
    return Real(std::string(s[0] == '+' ? s.substr(1) : s));
  }
}

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto p = line.find('#');
  return p == std::string_view::npos ? line : line.substr(0, p);
}

inline void expect_args(const std::vector<std::string_view>& t, std::size_t n, int line) {
  if (t.size() != n)
    throw ParseError("'" + std::string(t[0]) + "' expects " + std::to_string(n - 1) + " fields", line);
}

}  // namespace detail

template <class Real = double>
DistributionMeasure<Real> parse_measure(std::istream& in) {
  std::vector<SegmentSpec<Real>> segs;
  std::optional<PeriodicSpec<Real>> tail;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto t = detail::tokens(detail::strip_comment(raw));
    if (t.empty()) continue;
    auto num = [&](std::size_t i) { return detail::parse_real<Real>(t[i], line); };
    if (t[0] == "segment") {
      if (tail) throw ParseError("segment after periodic tail", line);
      if (t.size() < 3) throw ParseError("segment needs a start and a kind", line);
      const Real start = num(1);
      if (t[2] == "constant") {
        detail::expect_args(t, 4, line);
        segs.push_back({start, Constant<Real>{num(3)}});
      } else if (t[2] == "exp") {
        detail::expect_args(t, 5, line);
        segs.push_back({start, Exponential<Real>{num(3), num(4)}});
      } else if (t[2] == "recip") {
        detail::expect_args(t, 5, line);
        segs.push_back({start, Reciprocal<Real>{num(3), num(4)}});
      } else {
        throw ParseError("unknown density kind '" + std::string(t[2]) + "'", line);
      }
      if (segs.size() > 1 && !(segs.back().t_start > segs[segs.size() - 2].t_start))
        throw ParseError("segments must be in ascending t_start", line);
      if (segs.size() == 1 && segs[0].t_start != 0)
        throw ParseError("first segment must start at 0", line);
    } else if (t[0] == "tail") {
      if (tail) throw ParseError("duplicate tail", line);
      if (t.size() < 3 || t.size() > 4 || t[1] != "periodic")
        throw ParseError("expected 'tail periodic <T> [<start>]'", line);
      PeriodicSpec<Real> p;
      p.period = num(2);
      if (t.size() == 4) {
        p.start = num(3);
      } else if (segs.empty()) {
        p.start = Real(0);
      } else {
        throw ParseError("tail after segments needs an explicit start", line);
      }
      tail = p;
    } else if (t[0] == "profile") {
      if (!tail) throw ParseError("profile line before 'tail periodic'", line);
      detail::expect_args(t, 4, line);
      tail->profile.push_back({num(1), num(2), num(3)});
    } else {
      throw ParseError("unknown directive '" + std::string(t[0]) + "'", line);
    }
  }
  if (segs.empty() && !tail) throw ParseError("measure file has no segments");
  try {
    return DistributionMeasure<Real>(segs, tail);
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
}

template <class Real = double>
DistributionMeasure<Real> parse_measure_text(const std::string& text) {
  std::istringstream in(text);
  return parse_measure<Real>(in);
}

template <class Real = double>
DistributionMeasure<Real> load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measure file '" + path + "'");
  return parse_measure<Real>(in);
}

template <class Real>
std::string write_measure(const DistributionMeasure<Real>& mu) {
  std::ostringstream out;
  for (const auto& s : mu.segments()) {
    out << "segment " << format_real(s.t_start) << ' ';
    if (const auto* k = std::get_if<Constant<Real>>(&s.kind))
      out << "constant " << format_real(k->c);
    else if (const auto* k = std::get_if<Exponential<Real>>(&s.kind))
      out << "exp " << format_real(k->a) << ' ' << format_real(k->b);
    else {
      const auto& r = std::get<Reciprocal<Real>>(s.kind);
      out << "recip " << format_real(r.a) << ' ' << format_real(r.c);
    }
    out << '\n';
  }
  if (const auto& t = mu.periodic()) {
    out << "tail periodic " << format_real(t->period) << ' ' << format_real(t->start) << '\n';
    for (const auto& p : t->profile)
      out << "profile " << format_real(p.a) << ' ' << format_real(p.b) << ' ' << format_real(p.height)
          << '\n';
  }
  return out.str();
}

template <class Real = double>
FiniteTestMeasure<Real> parse_nu(std::istream& in) {
  std::vector<Atom<Real>> atoms;
  std::vector<StepDensity<Real>> steps;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto t = detail::tokens(detail::strip_comment(raw));
    if (t.empty()) continue;
    auto num = [&](std::size_t i) { return detail::parse_real<Real>(t[i], line); };
    if (t[0] == "atom") {
      detail::expect_args(t, 3, line);
      atoms.push_back({num(1), num(2)});
    } else if (t[0] == "step") {
      detail::expect_args(t, 4, line);
      steps.push_back({num(1), num(2), num(3)});
    } else {
      throw ParseError("unknown directive '" + std::string(t[0]) + "'", line);
    }
  }
  try {
    return FiniteTestMeasure<Real>(std::move(atoms), std::move(steps));
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
}

template <class Real = double>
FiniteTestMeasure<Real> parse_nu_inline(std::string_view spec) {
  std::vector<Atom<Real>> atoms;
  std::vector<StepDensity<Real>> steps;
  for (auto item : detail::split(spec, ';')) {
    if (item.empty()) continue;
    const auto f = detail::split(item, ':');
    if (f[0] == "atom" && f.size() == 3) {
      atoms.push_back({detail::parse_real<Real>(f[1]), detail::parse_real<Real>(f[2])});
    } else if (f[0] == "step" && f.size() == 4) {
      steps.push_back({detail::parse_real<Real>(f[1]), detail::parse_real<Real>(f[2]),
                       detail::parse_real<Real>(f[3])});
    } else {
      throw ParseError("bad nu item '" + std::string(item) +
                       "' (expected atom:<pos>:<mass> or step:<a>:<b>:<h>)");
    }
  }
  try {
    return FiniteTestMeasure<Real>(std::move(atoms), std::move(steps));
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
}

template <class Real = double>
FiniteTestMeasure<Real> load_nu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open nu file '" + path + "'");
  return parse_nu<Real>(in);
}

}  // namespace hlmax
