#pragma once

// Superlevel-set masses mu{x >= 0 : M_mu nu(x) > lambda}: exact for Dirac nu,
// certified brackets for general nu, a brute-force oracle, and the criterion
// quantities whose lambda -> 0 limits the weak-type constants are read from.

#include <algorithm>
#include <cstddef>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/grid.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/measure.hpp"

namespace hlmax {

template <class Real = double>
struct CertifiedInterval {
  Real lo;
  Real hi;
  bool certified;

  Real mid() const { return (lo + hi) / 2; }
  Real radius() const { return (hi - lo) / 2; }
  bool contains(const Real& v) const { return lo <= v && v <= hi; }
};

template <class Real = double>
struct SweepRow {
  Real lambda;
  CertifiedInterval<Real> mass;
  CertifiedInterval<Real> lambda_mass;
};

template <class Real = double>
struct SweepResult {
  std::vector<SweepRow<Real>> rows;
  GridSpec grid;

  bool all_certified() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.mass.certified; });
  }
};

struct LimitEstimate {
  double liminf_est = 0;
  double limsup_est = 0;
  int window = 0;
  bool converged = false;
};

namespace detail {

template <class Real>
void require_lambda(const Real& lambda) {
  if (!(lambda > 0) || !math::isfinite(lambda)) throw DomainError("lambda must be finite and > 0");
}

template <class Real>
void require_unbounded(const DistributionMeasure<Real>& mu) {
  if (!mu.unbounded()) throw DomainError("level sets need an unbounded measure (H(inf) = inf)");
}

template <class Real>
Real finite_or_throw(const Real& v, const char* what) {
  if (!math::isfinite(v)) throw RangeError(std::string(what) + " is outside the representable range");
  return v;
}

// mu{x > y : H(2x - y) - H(y) < 1/lambda}
template <class Real>
Real right_branch(const DistributionMeasure<Real>& mu, const Real& y, const Real& lambda) {
  const Real hy = mu.h(y);
  const Real s = finite_or_throw(mu.inverse(hy + Real(1) / lambda, Side::left), "level-set boundary");
  const Real xr = (y + s) / 2;
  const Real m = mu.h(xr) - hy;
  return m > 0 ? m : Real(0);
}

// mu{0 <= x < y : H(y) - H(max(2x - y, 0)) < 1/lambda}
template <class Real>
Real left_branch(const DistributionMeasure<Real>& mu, const Real& y, const Real& lambda) {
  const Real hy = mu.h(y);
  const Real inv = Real(1) / lambda;
  if (hy < inv) return hy;
  const Real s = mu.inverse(hy - inv, Side::right);
  const Real xl = (y + s) / 2;
  const Real m = hy - mu.h(xl);
  return m > 0 ? m : Real(0);
}

}  // namespace detail

// Exact mu{x >= 0 : M_mu delta_y(x) > lambda}.
template <class Real>
Real level_set_delta(const DistributionMeasure<Real>& mu, const Real& y, const Real& lambda) {
  detail::require_lambda(lambda);
  detail::require_unbounded(mu);
  if (math::isnan(y) || y < 0) throw DomainError("y must be >= 0");
  return detail::right_branch(mu, y, lambda) + detail::left_branch(mu, y, lambda);
}

template <class Real>
SweepResult<Real> sweep_delta(const DistributionMeasure<Real>& mu, const Real& y, const GridSpec& grid) {
  if (!(grid.ratio < 1)) throw DomainError("lambda grid must be decreasing (ratio < 1)");
  SweepResult<Real> out;
  out.grid = grid;
  for (double l : grid.values()) {
    const Real lambda(l);
    const Real m = level_set_delta(mu, y, lambda);
    out.rows.push_back({lambda, {m, m, true}, {lambda * m, lambda * m, true}});
  }
  return out;
}

struct CertifyOptions {
  int refine = 8;
  int max_depth = 48;
  std::size_t max_cells = 200000;
  int envelope_depth = 24;
};

namespace detail {

template <class Real>
class LevelSetCertifier {
 public:
  LevelSetCertifier(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu, const Real& lambda,
                    const CertifyOptions& opt)
      : mu_(mu), nu_(nu), lambda_(lambda), opt_(opt) {
    total_ = nu.total_mass();
    radius_ = nu.support_radius();
    low_ = nu.support_min();
    for (const auto& a : nu.atoms()) items_.push_back({a.position, a.position});
    for (const auto& s : nu.steps())
      if (s.height > 0) items_.push_back({s.a, s.b});
    points_ = nu.points();
    full_lo_ = low_;
    full_hi_ = Real(0);
    for (const auto& it : items_) full_hi_ = std::max(full_hi_, it.second);
  }

  enum class Verdict { inside, outside, unknown };

  // Closed-form boundaries beyond the support of nu: (R, x_in) is inside,
  // [x_out, inf) outside.
  std::pair<Real, Real> thresholds() const {
    const Real v = total_ / lambda_;
    const Real a_in = finite_or_throw(mu_.inverse(mu_.h(low_) + v, Side::left), "level-set boundary");
    const Real a_out = finite_or_throw(mu_.inverse(mu_.h(radius_) + v, Side::left), "level-set boundary");
    const Real x_out = std::max(radius_, (radius_ + a_out) / 2);
    const Real x_in = std::min(std::max(radius_, (low_ + a_in) / 2), x_out);
    return {x_in, x_out};
  }

  Verdict classify(const Real& a, const Real& b) const {
    if (a > radius_) {
      const Real up = mu_.h(2 * a - radius_) - mu_.h(radius_);
      if (up > 0 && total_ / up <= lambda_) return Verdict::outside;
      const Real low = mu_.h(2 * b - low_) - mu_.h(low_);
      if (!(low > 0) || total_ / low > lambda_) return Verdict::inside;
    }
    const Real c = a + (b - a) / 2;
    const auto mv = maximal_nu(mu_, nu_, c, opt_.refine);
    if (mv.value > lambda_) {
      if (mv.attained_radius && inside_by_ball(a, b, c, *mv.attained_radius)) return Verdict::inside;
      return Verdict::unknown;
    }
    return outside_by_envelope(a, b) ? Verdict::outside : Verdict::unknown;
  }

 private:
  const DistributionMeasure<Real>& mu_;
  const FiniteTestMeasure<Real>& nu_;
  Real lambda_;
  CertifyOptions opt_;
  Real total_, radius_, low_, full_lo_, full_hi_;
  std::vector<std::pair<Real, Real>> items_;  // closed hulls of positive-mass pieces
  std::vector<Real> points_;

  // Every x in [a, b] sees the ball J = B(c, r) inside its ball of radius
  // max(x - p, q - x), whose mu-mass is at most mu(K).
  bool inside_by_ball(const Real& a, const Real& b, const Real& c, const Real& r) const {
    const Real p = c - r, q = c + r;
    const Real num = nu_.ball_mass(c, r);
    const Real k_lo = std::min(p, 2 * a - q);
    const Real k_hi = std::max(q, 2 * b - p);
    const Real den = mu_.interval_mass(k_lo, k_hi);
    if (!(den > 0)) return num > 0;
    return num / den > lambda_;
  }

  Real dist(const Real& lo, const Real& hi, const Real& a, const Real& b) const {
    if (hi < a) return a - hi;
    if (lo > b) return lo - b;
    return Real(0);
  }

  // For x in [a, b] and radius rho > 0 with nu(B(x, rho)) > 0: rho >= d_nu,
  // nu(B(x, rho)) <= nu([a - rho, b + rho]) and mu(B(x, rho)) >= mu([b - rho, a + rho]).
  bool outside_by_envelope(const Real& a, const Real& b) const {
    Real d = math::inf<Real>();
    for (const auto& it : items_) d = std::min(d, dist(it.first, it.second, a, b));
    // near the support the small radii are left to the density bound
    const Real start = d > (b - a) / 2 ? d : Real(0);
    const Real r_full = std::max({a - full_lo_, full_hi_ - b, d});
    std::vector<Real> events{start, r_full};
    for (const auto& p : points_) {
      const Real e = p < a ? a - p : (p > b ? p - b : Real(0));
      if (e > start && e < r_full) events.push_back(e);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    for (std::size_t i = 0; i + 1 < events.size(); ++i)
      if (!envelope_cell(a, b, events[i], events[i + 1], 0)) return false;
    const Real den = inner_mass(a, b, r_full);
    return den > 0 && total_ / den <= lambda_;
  }

  // Balls inside [lo, hi] that miss every atom have nu/mu at most
  // (sum of step heights) / (least mu density) there.
  Real density_ratio_bound(Real lo, const Real& hi) const {
    if (lo < 0) lo = Real(0);
    for (const auto& at : nu_.atoms())
      if (at.position >= lo && at.position <= hi) return math::inf<Real>();
    Real f = Real(0);
    for (const auto& s : nu_.steps())
      if (s.b > lo && s.a < hi) f += s.height;
    if (!(f > 0)) return Real(0);
    const Real g = mu_.density_min(lo, hi);
    return g > 0 ? f / g : math::inf<Real>();
  }

  Real inner_mass(const Real& a, const Real& b, const Real& r) const {
    return mu_.interval_mass(b - r, a + r);
  }

  bool envelope_cell(const Real& a, const Real& b, const Real& r1, const Real& r2, int depth) const {
    const Real num = nu_.interval_mass(a - r2, b + r2);
    if (!(num > 0)) return true;
    const Real den = inner_mass(a, b, r1);
    if (den > 0 && num / den <= lambda_) return true;
    if (density_ratio_bound(a - r2, b + r2) <= lambda_) return true;
    if (depth >= opt_.envelope_depth) return false;
    const Real m = r1 + (r2 - r1) / 2;
    if (!(m > r1) || !(m < r2)) return false;
    return envelope_cell(a, b, r1, m, depth + 1) && envelope_cell(a, b, m, r2, depth + 1);
  }
};

}  // namespace detail

namespace detail {

// Max-heap of cells by mu-mass with a running total of the pending mass. The
// running total is resynchronised from the heap periodically: removing cells of
// very different sizes leaves rounding drift of the order of the largest cell.
template <class Real>
class CellQueue {
 public:
  struct Cell {
    Real a, b, mass;
    int depth;
  };

  void push(const Real& a, const Real& b, const Real& mass, int depth) {
    heap_.push_back({a, b, mass, depth});
    std::push_heap(heap_.begin(), heap_.end(), less);
    pending_ += mass;
  }
  Cell pop() {
    std::pop_heap(heap_.begin(), heap_.end(), less);
    Cell c = heap_.back();
    heap_.pop_back();
    pending_ -= c.mass;
    if (++pops_ % 1024 == 0) resync();
    return c;
  }
  bool empty() const { return heap_.empty(); }
  Real pending() const { return pending_ > 0 ? pending_ : Real(0); }
  // exact remaining mass
  Real resync() {
    pending_ = Real(0);
    for (const auto& c : heap_) pending_ += c.mass;
    return pending_;
  }

 private:
  static bool less(const Cell& x, const Cell& y) { return x.mass < y.mass; }
  std::vector<Cell> heap_;
  Real pending_ = Real(0);
  std::size_t pops_ = 0;
};

}  // namespace detail

// Bracket for mu{x >= 0 : M_mu nu(x) > lambda}. certified means the true
// mass lies in [lo, hi] and lambda * (hi - lo) <= tol.
template <class Real>
CertifiedInterval<Real> level_set_nu_certified(const DistributionMeasure<Real>& mu,
                                               const FiniteTestMeasure<Real>& nu, const Real& lambda,
                                               const Real& tol, const CertifyOptions& opt = {}) {
  detail::require_lambda(lambda);
  detail::require_unbounded(mu);
  if (!(tol > 0)) throw DomainError("tol must be > 0");
  if (auto atom = nu.single_atom()) {
    const Real m = level_set_delta(mu, atom->position, lambda / atom->mass);
    return {m, m, true};
  }
  detail::LevelSetCertifier<Real> cert(mu, nu, lambda, opt);
  const auto [x_in, x_out] = cert.thresholds();
  const Real radius = nu.support_radius();
  Real lo = mu.interval_mass(radius, x_in);

  detail::CellQueue<Real> queue;
  auto push = [&](const Real& a, const Real& b, int depth) {
    const Real m = mu.interval_mass(a, b);
    if (!(m > 0)) return;  // null cells cannot change the mass
    queue.push(a, b, m, depth);
  };
  if (radius > 0) push(Real(0), radius, 0);
  if (x_out > x_in) push(x_in, x_out, 0);

  Real stuck = Real(0);
  Real inside = Real(0);
  std::size_t evaluated = 0;
  while (!queue.empty()) {
    if (lambda * (queue.pending() + stuck) <= tol && lambda * (queue.resync() + stuck) <= tol) break;
    if (evaluated >= opt.max_cells) break;
    const auto cell = queue.pop();
    ++evaluated;
    using V = typename detail::LevelSetCertifier<Real>::Verdict;
    const V v = cert.classify(cell.a, cell.b);
    if (v == V::inside) {
      inside += cell.mass;
    } else if (v == V::unknown) {
      const Real m = cell.a + (cell.b - cell.a) / 2;
      if (cell.depth >= opt.max_depth || !(m > cell.a) || !(m < cell.b)) {
        stuck += cell.mass;
      } else {
        push(cell.a, m, cell.depth + 1);
        push(m, cell.b, cell.depth + 1);
      }
    }
  }
  const Real residual = queue.resync();
  lo += inside;
  const Real hi = lo + residual + stuck;
  return {lo, hi, lambda * (hi - lo) <= tol};
}

// Superlevel sets sit inside [0, extent]; for x beyond it
// mu(B(x, k (x - R))) >= H((1 + k) x - k R) - H(R) >= nu(X) / lambda.
template <class Real>
Real level_set_extent(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu, const Real& lambda,
                      const Real& k = Real(1)) {
  detail::require_lambda(lambda);
  const Real radius = nu.support_radius();
  const Real s = detail::finite_or_throw(mu.inverse(mu.h(radius) + nu.total_mass() / lambda, Side::left),
                                         "level-set boundary");
  return std::max(radius, (s + k * radius) / (1 + k));
}

template <class Real>
SweepResult<Real> sweep_nu(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu,
                           const GridSpec& grid, const Real& tol, const CertifyOptions& opt = {}) {
  if (!(grid.ratio < 1)) throw DomainError("lambda grid must be decreasing (ratio < 1)");
  SweepResult<Real> out;
  out.grid = grid;
  for (double l : grid.values()) {
    const Real lambda(l);
    // tol bounds lambda * (hi - lo)
    const auto m = level_set_nu_certified(mu, nu, lambda, tol, opt);
    out.rows.push_back({lambda, m, {lambda * m.lo, lambda * m.hi, m.certified}});
  }
  return out;
}

enum class ScanMode { linear, mass };

struct OracleOptions {
  double k = 1.0;                // denominator radius factor (Stempak operator when k > 1)
  ScanMode mode = ScanMode::linear;
  int boundary_depth = 0;        // bisection steps locating each class change
};

// Grid-scan estimate of mu{x in [0, x_max] : M nu(x) > lambda}. Each of the nx
// cells is classified at its midpoint with maximal_nu(refine = nr); with
// boundary_depth > 0 class changes are located by bisection between
// neighbouring midpoints. A consistent estimator, not a bound.
template <class Real>
Real oracle_level_set(const DistributionMeasure<Real>& mu, const FiniteTestMeasure<Real>& nu, const Real& lambda,
                      const Real& x_max, int nx, int nr, const OracleOptions& opt = {}) {
  detail::require_lambda(lambda);
  if (nx < 2 || nr < 2) throw DomainError("oracle needs nx, nr >= 2");
  if (!(x_max > 0)) throw DomainError("x_max must be > 0");
  const Real k(opt.k);
  const bool by_mass = opt.mode == ScanMode::mass;
  const Real span = by_mass ? mu.h(x_max) : x_max;
  // scan coordinate u: x itself, or the H-value
  auto to_x = [&](const Real& u) { return by_mass ? mu.inverse(u, Side::left) : u; };
  auto mass_to = [&](const Real& u) { return by_mass ? u : mu.h(u); };
  auto inside = [&](const Real& u) {
    const Real x = to_x(u);
    const auto v = opt.k == 1.0 ? maximal_nu(mu, nu, x, nr) : maximal_modified(mu, nu, k, x, nr);
    return v.value > lambda;
  };
  const Real n(nx);
  std::vector<char> cls(static_cast<std::size_t>(nx));
  std::vector<Real> mid(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    mid[i] = span * (Real(2 * i + 1) / (2 * n));
    cls[i] = inside(mid[i]) ? 1 : 0;
  }
  // transition between cells i and i + 1
  auto transition = [&](int i) {
    if (opt.boundary_depth <= 0) return span * (Real(i + 1) / n);
    Real a = mid[i], b = mid[i + 1];
    const bool left_class = cls[i];
    for (int d = 0; d < opt.boundary_depth; ++d) {
      const Real m = a + (b - a) / 2;
      if (inside(m) == left_class)
        a = m;
      else
        b = m;
    }
    return a + (b - a) / 2;
  };
  Real total = Real(0);
  int i = 0;
  while (i < nx) {
    if (!cls[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < nx && cls[j + 1]) ++j;
    const Real left = i == 0 ? Real(0) : transition(i - 1);
    const Real right = j == nx - 1 ? span : transition(j);
    total += mass_to(right) - mass_to(left);
    i = j + 1;
  }
  return total;
}

// H(r) / H(2r - y)
template <class Real>
Real criterion_ratio(const DistributionMeasure<Real>& mu, const Real& y, const Real& r) {
  if (math::isnan(y) || y < 0) throw DomainError("y must be >= 0");
  if (!(r > y)) throw DomainError("criterion_ratio needs r > y");
  const Real den = mu.h(2 * r - y);
  if (!(den > 0)) return math::inf<Real>();
  return mu.h(r) / den;
}

// H(r - y) / H(r)
template <class Real>
Real shift_ratio(const DistributionMeasure<Real>& mu, const Real& y, const Real& r) {
  if (math::isnan(y) || y < 0) throw DomainError("y must be >= 0");
  if (!(r > y)) throw DomainError("shift_ratio needs r > y");
  const Real den = mu.h(r);
  if (!(den > 0)) return math::inf<Real>();
  return mu.h(r - y) / den;
}

struct DeltaKOptions {
  double tol = 1e-10;
  int max_depth = 60;
  std::size_t max_cells = 400000;
  int initial_cells = 64;
};

// lambda * mu{x in [0, x_cap] : mu(B(x, k x)) < 1/lambda}
template <class Real>
CertifiedInterval<Real> delta_k(const DistributionMeasure<Real>& mu, const Real& k, const Real& lambda,
                                const Real& x_cap, const DeltaKOptions& opt = {}) {
  detail::require_lambda(lambda);
  if (!(k > 0) || !math::isfinite(k)) throw DomainError("k must be finite and > 0");
  if (!(x_cap > 0)) throw DomainError("x_cap must be > 0");
  const Real inv = Real(1) / lambda;
  if (k >= 1) {
    // mu(B(x, kx)) = H((1 + k) x): the set is [0, LEFT(1/lambda) / (1 + k))
    const Real s = mu.inverse(inv, Side::left);
    const Real xs = std::min(s / (1 + k), x_cap);
    const Real v = lambda * mu.h(xs);
    return {v, v, true};
  }
  // g(x) = H((1+k)x) - H((1-k)x) is not monotone in general; bracket it on
  // cells using monotonicity of H in each term.
  const Real up = 1 + k, down = 1 - k;
  std::vector<Real> edges;
  for (int i = 0; i <= opt.initial_cells; ++i) edges.push_back(x_cap * (Real(i) / Real(opt.initial_cells)));
  for (const auto& t : mu.breakpoints(Real(0), up * x_cap, 4096)) {
    if (t / up < x_cap) edges.push_back(t / up);
    if (t / down < x_cap) edges.push_back(t / down);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  detail::CellQueue<Real> queue;
  auto push = [&](const Real& a, const Real& b, int depth) {
    const Real m = mu.interval_mass(a, b);
    if (!(m > 0)) return;
    queue.push(a, b, m, depth);
  };
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) push(edges[i], edges[i + 1], 0);
  Real lo = Real(0), stuck = Real(0);
  std::size_t evaluated = 0;
  const Real tol(opt.tol);
  while (!queue.empty() && evaluated < opt.max_cells) {
    if (lambda * (queue.pending() + stuck) <= tol && lambda * (queue.resync() + stuck) <= tol) break;
    const auto c = queue.pop();
    ++evaluated;
    const Real g_hi = mu.h(up * c.b) - mu.h(down * c.a);
    const Real g_lo = mu.h(up * c.a) - mu.h(down * c.b);
    if (g_hi < inv) {
      lo += c.mass;
    } else if (!(g_lo < inv)) {
      // outside
    } else {
      const Real m = c.a + (c.b - c.a) / 2;
      if (c.depth >= opt.max_depth || !(m > c.a) || !(m < c.b))
        stuck += c.mass;
      else {
        push(c.a, m, c.depth + 1);
        push(m, c.b, c.depth + 1);
      }
    }
  }
  const Real residual = queue.resync();
  const Real hi = lo + residual + stuck;
  return {lambda * lo, lambda * hi, lambda * (hi - lo) <= tol};
}

// lambda * mu{x > r : 1 / mu(B(x, x - r)) > lambda}
template <class Real>
Real thm22_minus(const DistributionMeasure<Real>& mu, const Real& r, const Real& lambda) {
  detail::require_lambda(lambda);
  detail::require_unbounded(mu);
  return lambda * detail::right_branch(mu, r, lambda);
}

// lambda * mu{x >= 0 : 1 / mu(B(x, x + r)) > lambda}; mu(B(x, x + r)) = H(2x + r)
template <class Real>
Real thm22_plus(const DistributionMeasure<Real>& mu, const Real& r, const Real& lambda) {
  detail::require_lambda(lambda);
  detail::require_unbounded(mu);
  if (math::isnan(r) || r < 0) throw DomainError("r must be >= 0");
  const Real s = detail::finite_or_throw(mu.inverse(Real(1) / lambda, Side::left), "level-set boundary");
  const Real xp = s > r ? (s - r) / 2 : Real(0);
  return lambda * mu.h(xp);
}

// Trailing-window min/max of mid -/+ radius.
inline LimitEstimate weak_limit_estimate(std::span<const double> mids, std::span<const double> radii, int window,
                                         double tol) {
  if (window < 1) throw DomainError("window must be >= 1");
  if (!(tol > 0)) throw DomainError("tolerance must be > 0");
  if (mids.size() < static_cast<std::size_t>(window)) throw DomainError("fewer rows than the window");
  LimitEstimate e;
  e.window = window;
  e.liminf_est = std::numeric_limits<double>::infinity();
  e.limsup_est = -std::numeric_limits<double>::infinity();
  for (std::size_t i = mids.size() - window; i < mids.size(); ++i) {
    const double r = radii.empty() ? 0.0 : radii[i];
    e.liminf_est = std::min(e.liminf_est, mids[i] - r);
    e.limsup_est = std::max(e.limsup_est, mids[i] + r);
  }
  e.converged = e.limsup_est - e.liminf_est <= tol;
  return e;
}

inline LimitEstimate weak_limit_estimate(std::span<const double> values, int window, double tol) {
  return weak_limit_estimate(values, {}, window, tol);
}

template <class Real>
LimitEstimate weak_limit_estimate(const SweepResult<Real>& sweep, int window, double tol) {
  std::vector<double> mids, radii;
  for (const auto& row : sweep.rows) {
    mids.push_back(to_double(row.lambda_mass.mid()));
    radii.push_back(to_double(row.lambda_mass.radius()));
  }
  return weak_limit_estimate(mids, radii, window, tol);
}

struct DoublingDiagnostic {
  double c_est = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  // 0/0 cells
};

template <class Real>
DoublingDiagnostic doubling_diagnostic(const DistributionMeasure<Real>& mu, std::span<const double> x_grid,
                                       std::span<const double> r_grid) {
  if (x_grid.empty() || r_grid.empty()) throw DomainError("grids must be nonempty");
  for (double r : r_grid)
    if (!(r > 0)) throw DomainError("radii must be > 0");
  DoublingDiagnostic d;
  for (double x : x_grid) {
    for (double r : r_grid) {
      const Real num = mu.ball_mass(Real(x), Real(2 * r));
      const Real den = mu.ball_mass(Real(x), Real(r));
      if (!(den > 0)) {
        if (num > 0)
          d.c_est = std::numeric_limits<double>::infinity();
        else
          ++d.skipped;
        continue;
      }
      d.c_est = std::max(d.c_est, to_double(num / den));
    }
  }
  if (!std::isfinite(d.c_est)) return d;
  const double expo = std::log2(d.c_est);
  for (double x : x_grid) {
    for (double r : r_grid) {
      const Real small = mu.ball_mass(Real(x), Real(r));
      if (!(small > 0)) continue;
      for (double big : r_grid) {
        if (big < r) continue;
        const double lhs = to_double(mu.ball_mass(Real(x), Real(big)) / small);
        const double rhs = d.c_est * std::pow(big / r, expo);
        if (lhs > rhs * (1 + 1e-12)) ++d.violations;
      }
    }
  }
  return d;
}

template <class Real>
std::string sweep_csv(const SweepResult<Real>& s) {
  std::string out = "lambda,mass_lo,mass_hi,lambda_mass_lo,lambda_mass_hi,certified\n";
  for (const auto& r : s.rows) {
    out += format_real(r.lambda) + ',' + format_real(r.mass.lo) + ',' + format_real(r.mass.hi) + ',' +
           format_real(r.lambda_mass.lo) + ',' + format_real(r.lambda_mass.hi) + ',' +
           (r.mass.certified ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace hlmax
