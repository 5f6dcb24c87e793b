#pragma once

// Locally finite, atomless measures on [0, inf) described by a piecewise
// closed-form density, and finite test measures (atoms plus step densities)
// with bounded support.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/real.hpp"

namespace hlmax {

enum class Side { left, right };

// Density kinds, each parameterized relative to the owning segment's t_start.
template <class Real = double>
struct Constant {
  Real c;
};

// a * exp(b * (x - t_start))
template <class Real = double>
struct Exponential {
  Real a;
  Real b;
};

// 1 / (a * x + c), absolute x
template <class Real = double>
struct Reciprocal {
  Real a;
  Real c;
};

template <class Real = double>
using DensityKind = std::variant<Constant<Real>, Exponential<Real>, Reciprocal<Real>>;

template <class Real = double>
struct SegmentSpec {
  Real t_start;
  DensityKind<Real> kind;
};

template <class Real = double>
struct DensitySegment {
  Real t_start;
  DensityKind<Real> kind;
  Real h_base;  // H(t_start)
};

// Constant density `height` on [a, b) inside one period.
template <class Real = double>
struct ProfileStep {
  Real a;
  Real b;
  Real height;
};

template <class Real = double>
struct PeriodicSpec {
  Real start;
  Real period;
  std::vector<ProfileStep<Real>> profile;
};

template <class Real = double>
struct PeriodicTail {
  Real start;
  Real period;
  Real per_period_mass;
  Real h_start;                             // H(start)
  std::vector<ProfileStep<Real>> profile;   // as given
  std::vector<ProfileStep<Real>> pieces;    // contiguous cover of [0, period), gaps at height 0
  std::vector<Real> cumulative;             // mass of [0, pieces[i].a)
  std::vector<std::pair<Real, Real>> support;  // merged positive-height pieces
};

namespace detail {

template <class Real>
bool is_flat(const DensityKind<Real>& kind) {
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) return k->c == 0;
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) return k->a == 0;
  return false;
}

// Mass of [t, t + d] under the kind's density, d in [0, inf].
template <class Real>
Real increment_limit(const DensityKind<Real>& kind) {
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) return k->c > 0 ? math::inf<Real>() : Real(0);
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) {
    if (k->a == 0) return Real(0);
    if (k->b >= 0) return math::inf<Real>();
    return k->a / (-k->b);
  }
  return math::inf<Real>();
}

template <class Real>
Real increment(const DensityKind<Real>& kind, const Real& t, const Real& d) {
  if (!math::isfinite(d)) return increment_limit(kind);
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) return k->c * d;
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) {
    if (k->a == 0) return Real(0);
    if (k->b == 0) return k->a * d;
    return k->a * math::expm1(k->b * d) / k->b;
  }
  const auto& k = std::get<Reciprocal<Real>>(kind);
  return math::log1p(k.a * d / (k.a * t + k.c)) / k.a;
}

// Offset d with increment(d) = u on a non-flat kind; +inf when u is beyond
// the kind's total mass.
template <class Real>
Real solve_increment(const DensityKind<Real>& kind, const Real& t, const Real& u) {
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) return u / k->c;
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) {
    if (k->b == 0) return u / k->a;
    const Real z = u * k->b / k->a;
    if (z <= -1) return math::inf<Real>();
    return math::log1p(z) / k->b;
  }
  const auto& k = std::get<Reciprocal<Real>>(kind);
  return (k.a * t + k.c) / k.a * math::expm1(k.a * u);
}

template <class Real>
Real density_at(const DensityKind<Real>& kind, const Real& t, const Real& x) {
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) return k->c;
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) return k->a * math::exp(k->b * (x - t));
  const auto& k = std::get<Reciprocal<Real>>(kind);
  return Real(1) / (k.a * x + k.c);
}

// Mass of [lo, hi] inside one segment, without cancellation for short intervals.
template <class Real>
Real segment_mass(const DensityKind<Real>& kind, const Real& t, const Real& lo, const Real& hi) {
  const Real w = hi - lo;
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) return k->c * w;
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) {
    if (k->a == 0) return Real(0);
    if (k->b == 0) return k->a * w;
    return k->a * math::exp(k->b * (lo - t)) * (math::expm1(k->b * w) / k->b);
  }
  const auto& k = std::get<Reciprocal<Real>>(kind);
  return math::log1p(k.a * w / (k.a * lo + k.c)) / k.a;
}

template <class Real>
void validate_kind(const DensityKind<Real>& kind, const Real& t) {
  if (const auto* k = std::get_if<Constant<Real>>(&kind)) {
    if (!(k->c >= 0) || !math::isfinite(k->c))
      throw ConstructionError("constant density must be finite and >= 0");
    return;
  }
  if (const auto* k = std::get_if<Exponential<Real>>(&kind)) {
    if (!(k->a >= 0) || !math::isfinite(k->a) || !math::isfinite(k->b))
      throw ConstructionError("exponential density needs finite a >= 0 and finite b");
    return;
  }
  const auto& k = std::get<Reciprocal<Real>>(kind);
  if (!(k.a > 0) || !math::isfinite(k.a) || !math::isfinite(k.c))
    throw ConstructionError("reciprocal density needs finite a > 0");
  if (!(k.a * t + k.c > 0))
    throw ConstructionError("reciprocal density must be positive on its segment (t_start + c/a > 0)");
}

// Smallest s in [lo, hi] with pred(s), given pred monotone false -> true and
// pred(hi) true; `guess` is a closed-form estimate.
template <class Real, class Pred>
Real smallest_true(Real guess, const Real& lo, const Real& hi, Pred pred) {
  using T = ScalarTraits<Real>;
  Real s = std::clamp(guess, lo, hi);
  if (pred(lo)) return lo;
  int steps = 0;
  while (!pred(s) && steps < 64) {
    s = std::min(T::next_up(s), hi);
    ++steps;
  }
  Real f = lo;  // known false
  Real t = s;   // known true?
  if (!pred(t)) {
    f = t;
    t = hi;
  } else {
    steps = 0;
    while (steps < 64) {
      const Real p = T::next_down(t);
      if (p <= lo || !pred(p)) {
        if (p <= lo) return t;
        return t;
      }
      t = p;
      ++steps;
    }
  }
  while (true) {
    const Real mid = f + (t - f) / 2;
    if (!(mid > f) || !(mid < t)) return t;
    if (pred(mid))
      t = mid;
    else
      f = mid;
  }
}

// Largest s in [lo, hi] with pred(s), given pred monotone true -> false and
// pred(lo) true.
template <class Real, class Pred>
Real largest_true(Real guess, const Real& lo, const Real& hi, Pred pred) {
  using T = ScalarTraits<Real>;
  Real s = std::clamp(guess, lo, hi);
  if (pred(hi)) return hi;
  int steps = 0;
  while (!pred(s) && steps < 64) {
    s = std::max(T::next_down(s), lo);
    ++steps;
  }
  Real t = s;   // known true?
  Real f = hi;  // known false
  if (!pred(t)) {
    f = t;
    t = lo;
  } else {
    steps = 0;
    while (steps < 64) {
      const Real n = T::next_up(t);
      if (n >= hi || !pred(n)) return t;
      t = n;
      ++steps;
    }
  }
  while (true) {
    const Real mid = t + (f - t) / 2;
    if (!(mid > t) || !(mid < f)) return t;
    if (pred(mid))
      t = mid;
    else
      f = mid;
  }
}

}  // namespace detail

// mu on [0, inf) through H(x) = mu([0, x]). Immutable after construction.
template <class Real = double>
class DistributionMeasure {
 public:
  using Segment = DensitySegment<Real>;

  explicit DistributionMeasure(const std::vector<SegmentSpec<Real>>& specs,
                               std::optional<PeriodicSpec<Real>> tail = std::nullopt) {
    if (specs.empty() && !tail) throw ConstructionError("measure needs at least one segment");
    Real prev_t = Real(0);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto& s = specs[i];
      if (!math::isfinite(s.t_start)) throw ConstructionError("segment start must be finite");
      if (i == 0 && s.t_start != 0) throw ConstructionError("first segment must start at 0");
      if (i > 0 && !(s.t_start > prev_t))
        throw ConstructionError("segment starts must be strictly increasing");
      detail::validate_kind(s.kind, s.t_start);
      Real base = Real(0);
      if (i > 0) {
        const auto& p = segments_.back();
        base = p.h_base + detail::increment(p.kind, p.t_start, s.t_start - p.t_start);
      }
      segments_.push_back(Segment{s.t_start, s.kind, base});
      prev_t = s.t_start;
    }
    if (tail) build_tail(*tail);
    unbounded_ = derive_unbounded();
    build_support();
    if (support_.empty() && !tail_) throw ConstructionError("measure has no mass");
  }

  const std::vector<Segment>& segments() const { return segments_; }
  const std::optional<PeriodicTail<Real>>& periodic() const { return tail_; }

  // H(x) -> inf as x -> inf, derived from the tail kind.
  bool unbounded() const { return unbounded_; }

  Real total_mass() const {
    if (unbounded_) return math::inf<Real>();
    return segment_end_value(segments_.size() - 1);
  }

  Real h(const Real& x) const {
    check_nonneg(x, "h_eval");
    if (tail_ && x >= tail_->start) return periodic_h(x);
    const std::size_t i = segment_index(x);
    const auto& s = segments_[i];
    return s.h_base + detail::increment(s.kind, s.t_start, x - s.t_start);
  }

  // Right-continuous density, for quadrature cross-checks.
  Real density(const Real& x) const {
    check_nonneg(x, "density");
    if (tail_ && x >= tail_->start) {
      const Real u = wrap(x);
      for (const auto& p : tail_->pieces)
        if (u >= p.a && u < p.b) return p.height;
      return Real(0);
    }
    const auto& s = segments_[segment_index(x)];
    return detail::density_at(s.kind, s.t_start, x);
  }

  // Essential infimum of the density over [lo, hi].
  Real density_min(const Real& lo, const Real& hi) const {
    check_nonneg(lo, "density_min");
    Real m = math::inf<Real>();
    if (!tail_ || lo < tail_->start) {
      for (std::size_t i = segment_index(lo); i < segments_.size() && segments_[i].t_start <= hi; ++i) {
        const auto& s = segments_[i];
        const Real a = std::max(lo, s.t_start);
        const Real b = std::min(hi, segment_end(i));
        if (b < a) continue;
        m = std::min({m, detail::density_at(s.kind, s.t_start, a), detail::density_at(s.kind, s.t_start, b)});
        if (!(m > 0)) return Real(0);
      }
    }
    if (tail_ && hi >= tail_->start) {
      const Real from = std::max(lo, tail_->start);
      Real q = math::floor((from - tail_->start) / tail_->period);
      for (;;) {
        const Real origin = tail_->start + q * tail_->period;
        if (origin > hi) break;
        for (const auto& p : tail_->pieces)
          if (origin + p.a <= hi && origin + p.b >= from) m = std::min(m, p.height);
        if (!(m > 0)) return Real(0);
        q += 1;
      }
    }
    return m;
  }

  // LEFT: inf{s >= 0 : H(s) >= t}. RIGHT: sup{s >= 0 : H(s) <= t}.
  // +inf when the set is unbounded (or empty for LEFT) in bounded measures.
  Real inverse(const Real& t, Side side) const {
    check_nonneg(t, "h_inverse");
    if (side == Side::left && t == 0) return Real(0);
    const std::size_t n = segments_.size();
    if (n > 0) {
      // first segment whose end value reaches t (LEFT) or exceeds it (RIGHT)
      std::size_t lo = 0, hi = n - 1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (passes(segment_end_value(mid), t, side))
          hi = mid;
        else
          lo = mid + 1;
      }
      if (passes(segment_end_value(lo), t, side)) return solve_in_segment(lo, t, side);
    }
    if (tail_) return periodic_inverse(t, side);
    return math::inf<Real>();
  }

  // mu(B(x, r)) for the closed ball [x - r, x + r] clipped at 0.
  Real ball_mass(const Real& x, const Real& r) const {
    check_nonneg(x, "ball_mass");
    check_nonneg(r, "ball_mass radius");
    const Real lo = x - r;
    return mass_between(lo > 0 ? lo : Real(0), x + r);
  }

  // mu([a, b]) for 0 <= a <= b.
  Real interval_mass(const Real& a, const Real& b) const {
    const Real lo = a > 0 ? a : Real(0);
    if (!(b > lo)) return Real(0);
    return mass_between(lo, b);
  }

  // inf{r > 0 : mu(B(x, r)) > 0}: the distance from x to the support of mu.
  Real r_zero(const Real& x) const {
    check_nonneg(x, "r_zero");
    Real best = math::inf<Real>();
    auto consider = [&](const Real& a, const Real& b) {
      if (x < a)
        best = std::min(best, a - x);
      else if (x > b)
        best = std::min(best, x - b);
      else
        best = Real(0);
    };
    if (!support_.empty()) {
      auto it = std::upper_bound(support_.begin(), support_.end(), x,
                                 [](const Real& v, const auto& iv) { return v < iv.first; });
      if (it != support_.end()) consider(it->first, it->second);
      if (it != support_.begin()) {
        --it;
        consider(it->first, it->second);
      }
    }
    if (tail_) {
      const Real rel = x - tail_->start;
      const Real q = rel > 0 ? math::floor(rel / tail_->period) : Real(0);
      for (int dq = -1; dq <= 1; ++dq) {
        const Real p = q + dq;
        if (p < 0) continue;
        const Real origin = tail_->start + p * tail_->period;
        for (const auto& iv : tail_->support) consider(origin + iv.first, origin + iv.second);
      }
    }
    return best;
  }

  // Points in [lo, hi] where the density formula changes (at most `cap`).
  std::vector<Real> breakpoints(const Real& lo, const Real& hi, std::size_t cap) const {
    std::vector<Real> out;
    for (const auto& s : segments_) {
      if (out.size() >= cap) return out;
      if (s.t_start >= lo && s.t_start <= hi) out.push_back(s.t_start);
    }
    if (!tail_) return out;
    const Real from = lo > tail_->start ? lo : tail_->start;
    if (!(hi >= from)) return out;
    Real q = math::floor((from - tail_->start) / tail_->period);
    while (out.size() < cap) {
      const Real origin = tail_->start + q * tail_->period;
      if (origin > hi) break;
      for (const auto& p : tail_->pieces) {
        const Real b = origin + p.a;
        if (b >= lo && b <= hi && out.size() < cap) out.push_back(b);
      }
      q += 1;
    }
    return out;
  }

 private:
  std::vector<Segment> segments_;
  std::optional<PeriodicTail<Real>> tail_;
  std::vector<std::pair<Real, Real>> support_;  // segment region, merged closed intervals
  bool unbounded_ = false;

  static void check_nonneg(const Real& x, const char* what) {
    if (math::isnan(x) || x < 0) throw DomainError(std::string(what) + ": argument must be >= 0");
  }

  // mu([lo, hi]) for 0 <= lo < hi. Short intervals inside one or two pieces
  // use the pieces' closed forms; longer ones difference H.
  Real mass_between(const Real& lo, const Real& hi) const {
    if (!(hi > lo)) return Real(0);
    if (math::isfinite(hi)) {
      if (tail_ && lo >= tail_->start) {
        const Real rel = lo - tail_->start;
        const Real q = math::floor(rel / tail_->period);
        const Real origin = tail_->start + q * tail_->period;
        for (const auto& p : tail_->pieces)
          if (lo >= origin + p.a && hi <= origin + p.b) return p.height * (hi - lo);
      } else if (!tail_ || hi < tail_->start) {
        const std::size_t i = segment_index(lo), j = segment_index(hi);
        const auto& s = segments_[i];
        if (i == j) return detail::segment_mass(s.kind, s.t_start, lo, hi);
        if (j == i + 1) {
          const auto& n = segments_[j];
          return detail::segment_mass(s.kind, s.t_start, lo, n.t_start) +
                 detail::segment_mass(n.kind, n.t_start, n.t_start, hi);
        }
      }
    }
    const Real m = h(hi) - h(lo);
    return m > 0 ? m : Real(0);
  }

  static bool passes(const Real& end_value, const Real& t, Side side) {
    return side == Side::left ? end_value >= t : end_value > t;
  }

  std::size_t segment_index(const Real& x) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                               [](const Real& v, const Segment& s) { return v < s.t_start; });
    return static_cast<std::size_t>(it - segments_.begin()) - 1;
  }

  Real segment_end(std::size_t i) const {
    if (i + 1 < segments_.size()) return segments_[i + 1].t_start;
    if (tail_) return tail_->start;
    return math::inf<Real>();
  }

  Real segment_end_value(std::size_t i) const {
    if (i + 1 < segments_.size()) return segments_[i + 1].h_base;
    if (tail_) return tail_->h_start;
    return segments_[i].h_base + detail::increment_limit(segments_[i].kind);
  }

  Real solve_in_segment(std::size_t i, const Real& t, Side side) const {
    const auto& s = segments_[i];
    const Real lo = s.t_start;
    Real hi = segment_end(i);
    const Real guess = lo + detail::solve_increment(s.kind, s.t_start, t - s.h_base);
    if (!math::isfinite(hi)) {
      // unbounded last segment: find a finite bracket
      hi = math::isfinite(guess) ? guess : lo + 1;
      if (!math::isfinite(hi)) hi = lo + 1;
      Real step = std::max(Real(1), math::abs(hi));
      while (passes_point(hi, t, side) == false) {
        hi += step;
        step *= 2;
        if (!math::isfinite(hi)) return math::inf<Real>();
      }
      if (side == Side::right) {
        // need a point with H > t
        while (!(h(hi) > t)) {
          hi += step;
          step *= 2;
          if (!math::isfinite(hi)) return math::inf<Real>();
        }
      }
    }
    if (side == Side::left)
      return detail::smallest_true(guess, lo, hi, [&](const Real& v) { return h(v) >= t; });
    return detail::largest_true(guess, lo, hi, [&](const Real& v) { return h(v) <= t; });
  }

  bool passes_point(const Real& x, const Real& t, Side side) const {
    return side == Side::left ? h(x) >= t : h(x) > t;
  }

  void build_tail(const PeriodicSpec<Real>& spec) {
    if (!(spec.period > 0) || !math::isfinite(spec.period))
      throw ConstructionError("period must be finite and > 0");
    if (!math::isfinite(spec.start) || spec.start < 0)
      throw ConstructionError("periodic tail start must be finite and >= 0");
    if (segments_.empty() && spec.start != 0)
      throw ConstructionError("periodic tail without segments must start at 0");
    if (!segments_.empty() && !(spec.start > segments_.back().t_start))
      throw ConstructionError("periodic tail must start after the last segment start");
    PeriodicTail<Real> t;
    t.start = spec.start;
    t.period = spec.period;
    t.profile = spec.profile;
    std::sort(t.profile.begin(), t.profile.end(),
              [](const auto& a, const auto& b) { return a.a < b.a; });
    Real cursor = Real(0);
    Real mass = Real(0);
    for (const auto& p : t.profile) {
      if (!(p.a >= 0) || !(p.b > p.a) || !(p.b <= spec.period))
        throw ConstructionError("profile steps need 0 <= a < b <= period");
      if (!(p.height >= 0) || !math::isfinite(p.height))
        throw ConstructionError("profile heights must be finite and >= 0");
      if (p.a < cursor) throw ConstructionError("profile steps overlap");
      if (p.a > cursor) {
        t.cumulative.push_back(mass);
        t.pieces.push_back({cursor, p.a, Real(0)});
      }
      t.cumulative.push_back(mass);
      t.pieces.push_back(p);
      mass += p.height * (p.b - p.a);
      cursor = p.b;
    }
    if (cursor < spec.period) {
      t.cumulative.push_back(mass);
      t.pieces.push_back({cursor, spec.period, Real(0)});
    }
    if (!(mass > 0)) throw ConstructionError("periodic profile must have positive mass");
    t.per_period_mass = mass;
    t.h_start = segments_.empty()
                    ? Real(0)
                    : segments_.back().h_base +
                          detail::increment(segments_.back().kind, segments_.back().t_start,
                                            spec.start - segments_.back().t_start);
    for (const auto& p : t.pieces) {
      if (!(p.height > 0)) continue;
      if (!t.support.empty() && t.support.back().second >= p.a)
        t.support.back().second = p.b;
      else
        t.support.emplace_back(p.a, p.b);
    }
    tail_ = std::move(t);
  }

  bool derive_unbounded() const {
    if (tail_) return true;
    const auto& kind = segments_.back().kind;
    return !math::isfinite(detail::increment_limit(kind));
  }

  void build_support() {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (detail::is_flat(segments_[i].kind)) continue;
      const Real a = segments_[i].t_start;
      const Real b = segment_end(i);
      if (!support_.empty() && support_.back().second >= a)
        support_.back().second = b;
      else
        support_.emplace_back(a, b);
    }
  }

  // position within the period, in [0, period)
  Real wrap(const Real& x) const {
    const Real rel = x - tail_->start;
    Real q = math::floor(rel / tail_->period);
    Real u = rel - q * tail_->period;
    if (u < 0) u = Real(0);
    if (u >= tail_->period) u = tail_->period;
    return u;
  }

  Real partial(const Real& u) const {
    const auto& t = *tail_;
    for (std::size_t j = 0; j < t.pieces.size(); ++j) {
      const auto& p = t.pieces[j];
      if (u < p.b || j + 1 == t.pieces.size()) {
        const Real w = std::min(std::max(u - p.a, Real(0)), p.b - p.a);
        return t.cumulative[j] + p.height * w;
      }
    }
    return t.per_period_mass;
  }

  Real periodic_h(const Real& x) const {
    const auto& t = *tail_;
    if (!math::isfinite(x)) return math::inf<Real>();
    const Real rel = x - t.start;
    Real q = math::floor(rel / t.period);
    Real u = rel - q * t.period;
    if (u < 0) {
      q -= 1;
      u += t.period;
    } else if (u >= t.period) {
      q += 1;
      u -= t.period;
    }
    if (q < 0) {
      q = Real(0);
      u = Real(0);
    }
    return t.h_start + q * t.per_period_mass + partial(u);
  }

  Real periodic_inverse(const Real& target, Side side) const {
    const auto& t = *tail_;
    const Real tau = target - t.h_start;
    const Real P = t.per_period_mass;
    Real q = math::floor(tau / P);
    Real rem;
    if (side == Side::left) {
      // q*P < tau <= (q+1)*P
      while (q > 0 && q * P >= tau) q -= 1;
      while ((q + 1) * P < tau) q += 1;
      rem = tau - q * P;
    } else {
      // q*P <= tau < (q+1)*P
      while (q > 0 && q * P > tau) q -= 1;
      while ((q + 1) * P <= tau) q += 1;
      rem = tau - q * P;
    }
    if (rem < 0) rem = Real(0);
    Real u = t.period;
    for (std::size_t j = 0; j < t.pieces.size(); ++j) {
      const auto& p = t.pieces[j];
      if (!(p.height > 0)) continue;
      const Real end_mass = t.cumulative[j] + p.height * (p.b - p.a);
      if (side == Side::left ? end_mass >= rem : end_mass > rem) {
        u = p.a + (rem - t.cumulative[j]) / p.height;
        break;
      }
    }
    const Real origin = t.start + q * t.period;
    const Real guess = origin + u;
    const Real lo = origin > t.start ? origin - t.period : t.start;
    const Real hi = origin + 2 * t.period;
    if (side == Side::left)
      return detail::smallest_true(guess, lo, hi, [&](const Real& v) { return h(v) >= target; });
    return detail::largest_true(guess, lo, hi, [&](const Real& v) { return h(v) <= target; });
  }
};

template <class Real = double>
struct Atom {
  Real position;
  Real mass;
};

// Density `height` (w.r.t. Lebesgue) on [a, b].
template <class Real = double>
struct StepDensity {
  Real a;
  Real b;
  Real height;
};

// Finite measure nu with bounded support: atoms plus step densities.
template <class Real = double>
class FiniteTestMeasure {
 public:
  FiniteTestMeasure(std::vector<Atom<Real>> atoms, std::vector<StepDensity<Real>> steps = {})
      : atoms_(std::move(atoms)), steps_(std::move(steps)) {
    Real total = Real(0);
    for (const auto& a : atoms_) {
      if (!math::isfinite(a.position) || a.position < 0)
        throw ConstructionError("atom position must be finite and >= 0");
      if (!math::isfinite(a.mass) || !(a.mass > 0))
        throw ConstructionError("atom mass must be finite and > 0");
      total += a.mass;
    }
    for (const auto& s : steps_) {
      if (!math::isfinite(s.a) || !math::isfinite(s.b) || s.a < 0 || !(s.b > s.a))
        throw ConstructionError("step needs finite 0 <= a < b");
      if (!math::isfinite(s.height) || s.height < 0)
        throw ConstructionError("step height must be finite and >= 0");
      total += s.height * (s.b - s.a);
    }
    if (!(total > 0) || !math::isfinite(total))
      throw ConstructionError("test measure must have finite positive total mass");
    total_ = total;
    Real radius = Real(0);
    Real low = math::inf<Real>();
    for (const auto& a : atoms_) {
      radius = std::max(radius, a.position);
      low = std::min(low, a.position);
    }
    for (const auto& s : steps_) {
      radius = std::max(radius, s.b);
      if (s.height > 0) low = std::min(low, s.a);
    }
    radius_ = radius;
    support_min_ = low;
  }

  const std::vector<Atom<Real>>& atoms() const { return atoms_; }
  const std::vector<StepDensity<Real>>& steps() const { return steps_; }
  Real total_mass() const { return total_; }
  Real support_radius() const { return radius_; }
  // leftmost point carrying mass
  Real support_min() const { return support_min_; }

  std::optional<Atom<Real>> single_atom() const {
    bool steps_massless = std::all_of(steps_.begin(), steps_.end(),
                                      [](const auto& s) { return s.height == 0; });
    if (atoms_.size() == 1 && steps_massless) return atoms_.front();
    return std::nullopt;
  }

  // Atom positions and step endpoints.
  std::vector<Real> points() const {
    std::vector<Real> out;
    out.reserve(atoms_.size() + 2 * steps_.size());
    for (const auto& a : atoms_) out.push_back(a.position);
    for (const auto& s : steps_) {
      out.push_back(s.a);
      out.push_back(s.b);
    }
    return out;
  }

  // nu(B(x, r)), closed ball.
  Real ball_mass(const Real& x, const Real& r) const {
    if (math::isnan(x) || math::isnan(r) || x < 0 || r < 0)
      throw DomainError("nu_ball_mass: arguments must be >= 0");
    Real m = Real(0);
    for (const auto& a : atoms_)
      if (math::abs(a.position - x) <= r) m += a.mass;
    return m + steps_mass(x - r, x + r);
  }

  // nu([lo, hi]), closed interval.
  Real interval_mass(const Real& lo, const Real& hi) const {
    Real m = Real(0);
    for (const auto& a : atoms_)
      if (a.position >= lo && a.position <= hi) m += a.mass;
    return m + steps_mass(lo, hi);
  }

  FiniteTestMeasure scaled(const Real& c) const {
    if (!(c > 0)) throw DomainError("scale factor must be > 0");
    auto atoms = atoms_;
    auto steps = steps_;
    for (auto& a : atoms) a.mass *= c;
    for (auto& s : steps) s.height *= c;
    return FiniteTestMeasure(std::move(atoms), std::move(steps));
  }

  friend FiniteTestMeasure operator+(const FiniteTestMeasure& x, const FiniteTestMeasure& y) {
    auto atoms = x.atoms_;
    auto steps = x.steps_;
    atoms.insert(atoms.end(), y.atoms_.begin(), y.atoms_.end());
    steps.insert(steps.end(), y.steps_.begin(), y.steps_.end());
    return FiniteTestMeasure(std::move(atoms), std::move(steps));
  }

 private:
  std::vector<Atom<Real>> atoms_;
  std::vector<StepDensity<Real>> steps_;
  Real total_ = Real(0);
  Real radius_ = Real(0);
  Real support_min_ = Real(0);

  Real steps_mass(const Real& lo, const Real& hi) const {
    Real m = Real(0);
    for (const auto& s : steps_) {
      const Real a = std::max(s.a, lo);
      const Real b = std::min(s.b, hi);
      if (b > a) m += s.height * (b - a);
    }
    return m;
  }
};

}  // namespace hlmax
