#pragma once

// Centered maximal operator M_mu nu(x) = sup_{r > r0(x)} nu(B(x,r)) / mu(B(x,r)),
// with the closure r = r0(x) admitted, and Stempak's variant with the
// denominator mu(B(x, k r)).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/measure.hpp"

namespace hlmax {

template <class Real = double>
struct MaximalValue {
  Real value;                          // may be +inf
  std::optional<Real> attained_radius;
  bool certified;
};

template <class Real>
MaximalValue<Real> maximal_delta(const DistributionMeasure<Real>& mu, const Real& y, const Real& x) {
  if (math::isnan(y) || y < 0) throw DomainError("maximal_delta: y must be >= 0");
  const Real r = std::max(math::abs(x - y), mu.r_zero(x));
  const Real den = mu.ball_mass(x, r);
  if (!(den > 0)) return {math::inf<Real>(), r, true};
  return {Real(1) / den, r, true};
}

namespace detail {

// Base-2 radical inverse: 0, 1/2, 1/4, 3/4, ... Nested in its prefix length.
inline double van_der_corput(unsigned i) {
  double v = 0, f = 0.5;
  while (i) {
    if (i & 1u) v += f;
    i >>= 1;
    f *= 0.5;
  }
  return v;
}

// Cap on mu breakpoints used as candidate radii (periodic tails have infinitely many).
inline constexpr std::size_t kBreakpointCap = 4096;
inline constexpr int kGoldenIterations = 30;

template <class Real>
class RadiusSearch {
 public:
  RadiusSearch(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu, const Real& x,
               const Real& k)
      : mu_(mu), nu_(nu), x_(x), k_(k) {}

  MaximalValue<Real> run(int refine) {
    const Real r0 = mu_.r_zero(x_);
    Real top = r0;
    std::vector<Real> cand{r0};
    for (const auto& p : nu_.points()) {
      const Real d = math::abs(x_ - p);
      cand.push_back(d);
      top = std::max(top, d);
    }
    const Real lo = x_ > top ? x_ - top : Real(0);
    for (const auto& b : mu_.breakpoints(lo, x_ + top, kBreakpointCap)) cand.push_back(math::abs(x_ - b));
    for (const auto& c : cand)
      if (c >= r0 && c <= top) grid_.push_back(c);
    std::sort(grid_.begin(), grid_.end());
    grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());
    const std::size_t intervals = grid_.size() - 1;
    local_.assign(intervals, Local{});

    for (std::size_t j = 0; j < grid_.size(); ++j) eval(grid_[j], j);
    unsigned next_level = 1;
    for (int i = 0; i < refine; ++i) {
      if (i > 0) {
        const Real phi(van_der_corput(static_cast<unsigned>(i)));
        for (std::size_t j = 0; j < intervals; ++j) eval(grid_[j] + phi * (grid_[j + 1] - grid_[j]), j);
      }
      if (static_cast<unsigned>(i + 1) == next_level) {
        polish(next_level);
        next_level *= 2;
      }
    }
    if (!found_) return {Real(0), std::nullopt, false};
    return {best_, best_r_, false};
  }

 private:
  struct Local {
    bool found = false;
    Real value = Real(0);
    Real r = Real(0);
  };

  const DistributionMeasure<Real>& mu_;
  const FiniteTestMeasure<Real>& nu_;
  Real x_;
  Real k_;
  std::vector<Real> grid_;    // sorted candidate radii
  std::vector<Local> local_;  // incumbent per gap [grid_[j], grid_[j+1])
  bool found_ = false;
  Real best_ = Real(0);
  Real best_r_ = Real(0);

  // ratio at r, or -1 for a 0/0 ball
  Real eval(const Real& r, std::size_t j) {
    const Real num = nu_.ball_mass(x_, r);
    const Real den = mu_.ball_mass(x_, k_ * r);
    Real v;
    if (den > 0)
      v = num / den;
    else if (num > 0)
      v = math::inf<Real>();
    else
      return Real(-1);
    if (!found_ || v > best_) {
      found_ = true;
      best_ = v;
      best_r_ = r;
    }
    if (j < local_.size() && (!local_[j].found || v > local_[j].value)) local_[j] = {true, v, r};
    return v;
  }

  // Golden-section maximization on both sides of the incumbent of the first
  // gap (the r -> r0 limit) and of the three best gaps, within 1/level of
  // the gap width.
  void polish(unsigned level) {
    if (local_.empty()) return;
    std::vector<std::size_t> order(local_.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& la = local_[a];
      const auto& lb = local_[b];
      if (la.found != lb.found) return la.found;
      return la.found && la.value > lb.value;
    });
    std::vector<std::size_t> chosen{0};
    for (std::size_t i = 0; i < order.size() && chosen.size() < 4; ++i)
      if (order[i] != 0 && local_[order[i]].found) chosen.push_back(order[i]);
    const Real scale = Real(1) / Real(level);
    for (std::size_t j : chosen) {
      const Real gap = grid_[j + 1] - grid_[j];
      const Real r = local_[j].found ? local_[j].r : grid_[j];
      if (local_[j].found && !math::isfinite(local_[j].value)) continue;
      const Real a = std::max(grid_[j], r - gap * scale);
      const Real b = std::min(grid_[j + 1], r + gap * scale);
      if (r > a) golden(a, r, j);
      if (b > r) golden(r, b, j);
    }
  }

  void golden(Real a, Real b, std::size_t j) {
    const Real g = (math::sqrt(Real(5)) - 1) / 2;
    Real c = b - g * (b - a), d = a + g * (b - a);
    Real fc = eval(c, j), fd = eval(d, j);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = eval(c, j);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = eval(d, j);
      }
    }
  }
};

template <class Real>
MaximalValue<Real> maximal_search(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu,
                                  const Real& x, const Real& k, int refine) {
  if (refine < 1) throw DomainError("refine must be >= 1");
  if (math::isnan(x) || x < 0) throw DomainError("x must be >= 0");
  if (auto atom = nu.single_atom()) {
    const Real r = std::max(math::abs(x - atom->position), mu.r_zero(x));
    const Real den = mu.ball_mass(x, k * r);
    if (!(den > 0)) return {math::inf<Real>(), r, true};
    return {atom->mass / den, r, true};
  }
  return RadiusSearch<Real>(mu, nu, x, k).run(refine);
}

}  // namespace detail

// Lower bound for M_mu nu(x), nondecreasing in `refine`. Exact when nu is a
// single atom.
template <class Real>
MaximalValue<Real> maximal_nu(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu,
                              const Real& x, int refine = 8) {
  return detail::maximal_search(mu, nu, x, Real(1), refine);
}

template <class Real>
MaximalValue<Real> maximal_modified(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu,
                                    const Real& k, const Real& x, int refine = 8) {
  if (!(k >= 1)) throw DomainError("maximal_modified: k must be >= 1");
  return detail::maximal_search(mu, nu, x, k, refine);
}

}  // namespace hlmax
