#pragma once

// The block-constructed piecewise-linear G (unit increments oscillating
// between 0 and 1 while G(2x) - G(x) -> 1) and the measure H = e^G - 1 whose
// limiting weak-type behaviour at delta_2 oscillates while delta_0 converges.
//
// Block l ends at x_{l+1} = 2^{k_l} (x_l + 1) with k_l ~ 1.72 n_l, so the x
// range grows doubly exponentially; vertices need about log2(x_end) bits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "hlmax/errors.hpp"
#include "hlmax/measure.hpp"
#include "hlmax/multiprecision.hpp"
#include "hlmax/real.hpp"
#include "hlmax/weaklimit.hpp"

namespace hlmax {

struct CounterexampleParams {
  double x0 = 2.0;
  int n1 = 2;
  int blocks = 7;
};

inline constexpr long kGuardBits = 16;
inline constexpr long kMaxPrecisionBits = 8192;
inline constexpr long kMaxVertices = 2000000;

// Smallest k >= 0 with sum_{i=0..k} 1/(n+i) > 1.
inline long k_of_n(long n) {
  if (n < 2) throw DomainError("k_of_n needs n >= 2");
  double sum = 0;
  for (long i = 0;; ++i) {
    sum += 1.0 / static_cast<double>(n + i);
    const double slack = 4e-16 * static_cast<double>(i + 2);
    if (sum > 1 + slack) return i;
    if (sum > 1 - slack) {
      // too close to call in double
      using boost::multiprecision::cpp_rational;
      cpp_rational exact = 0;
      for (long j = 0; j <= i; ++j) exact += cpp_rational(1, n + j);
      if (exact > 1) return i;
    }
  }
}

struct Feasibility {
  int blocks = 0;
  long bits = 0;       // working precision the construction needs
  long vertices = 0;
};

// Precision and size needed for `p`. Throws ConstructionError naming the
// first block that exceeds the caps.
inline Feasibility feasibility(const CounterexampleParams& p, long max_bits = kMaxPrecisionBits) {
  if (!(p.x0 > 0) || !std::isfinite(p.x0)) throw ConstructionError("x0 must be finite and > 0");
  if (p.n1 < 2) throw ConstructionError("n1 must be >= 2");
  if (p.blocks < 1) throw ConstructionError("blocks must be >= 1");
  Feasibility f;
  double lx = std::log2(p.x0);
  long n = p.n1;
  for (int l = 1; l <= p.blocks; ++l) {
    if (n > 100000000L) throw ConstructionError("block " + std::to_string(l) + ": n exceeds 1e8");
    const long k = k_of_n(n);
    lx = static_cast<double>(k) + lx + std::log1p(std::exp2(-lx)) / std::log(2.0);
    const long bits = static_cast<long>(std::ceil(lx)) + 2 + kGuardBits;
    f.vertices += 3 * k + 2;
    if (bits > max_bits)
      throw ConstructionError("block " + std::to_string(l) + " needs " + std::to_string(bits) +
                              " bits of working precision (x reaches 2^" + std::to_string(static_cast<long>(lx)) +
                              "); the limit is " + std::to_string(max_bits));
    if (f.vertices > kMaxVertices)
      throw ConstructionError("block " + std::to_string(l) + " exceeds " + std::to_string(kMaxVertices) +
                              " vertices");
    f.bits = std::max(f.bits, bits);
    f.blocks = l;
    n += k;
  }
  return f;
}

template <class Real = double>
struct BlockMeta {
  long n;
  long k;
  Real x_start;
  Real v_start;
  Real x_end;
  Real v_end;
  Real s_k;  // S(l, k_l) = sum_{j=1..k} 1/(n+j)
  std::size_t first_vertex;
  std::size_t last_vertex;
};

template <class Real = double>
class PiecewiseLinearG {
 public:
  struct Vertex {
    Real x;
    Real g;
  };

  PiecewiseLinearG(CounterexampleParams params, std::vector<Vertex> vertices, std::vector<BlockMeta<Real>> blocks)
      : params_(params), vertices_(std::move(vertices)), blocks_(std::move(blocks)) {}

  const CounterexampleParams& params() const { return params_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<BlockMeta<Real>>& blocks() const { return blocks_; }
  const Real& x_min() const { return vertices_.front().x; }
  const Real& x_max() const { return vertices_.back().x; }

  Real eval(const Real& x) const {
    if (!(x >= x_min()) || !(x <= x_max()))
      throw RangeError("eval_G: x outside [" + format_real(x_min()) + ", " + format_real(x_max()) + "]");
    auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x,
                               [](const Real& v, const Vertex& p) { return v < p.x; });
    if (it == vertices_.end()) return vertices_.back().g;
    const auto& b = *it;
    const auto& a = *std::prev(it);
    if (x == a.x) return a.g;
    return a.g + (x - a.x) * ((b.g - a.g) / (b.x - a.x));
  }

  // index of the block containing x (by block start)
  std::size_t block_of(const Real& x) const {
    std::size_t i = 0;
    while (i + 1 < blocks_.size() && x >= blocks_[i + 1].x_start) ++i;
    return i;
  }

 private:
  CounterexampleParams params_;
  std::vector<Vertex> vertices_;
  std::vector<BlockMeta<Real>> blocks_;
};

// Sets up the vertices A_m, B_m, C_m of every block. For BigReal, call inside
// a PrecisionScope of at least feasibility(p).bits.
template <class Real = double>
PiecewiseLinearG<Real> build_G(const CounterexampleParams& p) {
  const Feasibility f = feasibility(p, ScalarTraits<Real>::precision_bits());
  (void)f;
  using Vertex = typename PiecewiseLinearG<Real>::Vertex;
  // Block baselines are rounded to a dyadic grid so that v + m is exact and
  // the first leg rises by exactly 1.
  const int quantum = ScalarTraits<Real>::precision_bits() - 16;
  auto snap = [&](const Real& v) {
    return math::ldexp(math::floor(math::ldexp(v, quantum) + Real(0.5)), -quantum);
  };
  std::vector<Vertex> verts;
  std::vector<BlockMeta<Real>> metas;
  Real x = Real(p.x0);
  Real v = Real(0);
  long n = p.n1;
  for (int l = 1; l <= p.blocks; ++l) {
    const long k = k_of_n(n);
    std::vector<Real> s(static_cast<std::size_t>(k + 1));
    s[0] = Real(0);
    for (long m = 1; m <= k; ++m) s[m] = s[m - 1] + Real(1) / Real(n + m);
    const std::size_t first = verts.empty() ? 0 : verts.size() - 1;
    auto push = [&](const Real& vx, const Real& vg) {
      if (!verts.empty()) {
        const auto& last = verts.back();
        if (vx == last.x && vg == last.g) return;
        if (!(vx > last.x))
          throw ConstructionError("block " + std::to_string(l) + ": vertex x-coordinates are not increasing (" +
                                  format_real(vx) + " after " + format_real(last.x) + ")");
        if (vg < last.g) throw ConstructionError("block " + std::to_string(l) + ": G decreases");
      }
      verts.push_back({vx, vg});
    };
    for (long m = 0; m < k; ++m) {
      const Real pm = math::ldexp(Real(1), static_cast<int>(m));
      const Real ax = pm * x;
      const Real bx = ax + pm;
      push(ax, v + Real(m));
      push(bx, v + Real(m) + 1 - s[m]);
      push(bx + math::ldexp(Real(1), -static_cast<int>(k - m)), v + Real(m + 1));
    }
    const Real pk = math::ldexp(Real(1), static_cast<int>(k));
    const Real x_end = pk * x + pk;
    const Real v_end = snap(v + Real(k) + 1 - s[k]);
    push(pk * x, v + Real(k));
    push(x_end, v_end);
    metas.push_back({n, k, x, v, x_end, v_end, s[k], first, verts.size() - 1});
    x = x_end;
    v = v_end;
    n += k;
  }
  return PiecewiseLinearG<Real>(p, std::move(verts), std::move(metas));
}

// H = e^{G~} - 1 with G~ = 0 on [0, x0]; exponential density on each leg.
template <class Real>
DistributionMeasure<Real> counterexample_measure(const PiecewiseLinearG<Real>& G) {
  std::vector<SegmentSpec<Real>> segs;
  const auto& v = G.vertices();
  if (v.front().x > 0) segs.push_back({Real(0), Constant<Real>{Real(0)}});
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const Real s = (v[i + 1].g - v[i].g) / (v[i + 1].x - v[i].x);
    segs.push_back({v[i].x, Exponential<Real>{s * math::exp(v[i].g), s}});
  }
  return DistributionMeasure<Real>(segs);
}

// Smallest lambda whose y <= 2 level sets stay inside the constructed range.
template <class Real>
Real lambda_floor(const DistributionMeasure<Real>& mu, const PiecewiseLinearG<Real>& G) {
  const Real two = std::min(Real(2), G.x_max());
  return Real(1) / (mu.h(G.x_max()) - mu.h(two));
}

struct BlockStats {
  int block = 0;
  long n = 0;
  long k = 0;
  double unit_min = 0;
  double unit_max = 0;
  bool unit_max_is_one = false;
  double doubling_min = 0;  // of G(2x) - G(x)
  double doubling_max = 0;
  double gap_max = 0;       // max |G(2x) - G(x) - 1|
  double gap_bound = 0;     // 2 / n_l
  double s_k = 0;
  std::size_t probes = 0;
};

struct PropertyReport {
  std::vector<BlockStats> blocks;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

// Unit increments G(x+1) - G(x) and doubling increments G(2x) - G(x) over
// vertex-aligned, equispaced and seeded random probes in each block.
template <class Real>
PropertyReport check_properties(const PiecewiseLinearG<Real>& G, int probe_count = 4, std::uint64_t seed = 0) {
  const auto& metas = G.blocks();
  if (metas.size() < 3) throw DomainError("check_properties needs at least 3 blocks");
  if (probe_count < 1) throw DomainError("probe_count must be >= 1");
  PropertyReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& verts = G.vertices();
  for (std::size_t l = 0; l < metas.size(); ++l) {
    const auto& b = metas[l];
    BlockStats st;
    st.block = static_cast<int>(l + 1);
    st.n = b.n;
    st.k = b.k;
    st.gap_bound = 2.0 / static_cast<double>(b.n);
    st.s_k = to_double(b.s_k);
    const double nd = static_cast<double>(b.n);
    if (!(st.s_k > 1 - 1 / nd) || !(st.s_k <= 1))
      rep.failures.push_back("block " + std::to_string(st.block) + ": S(l,k) outside (1 - 1/n, 1]");

    // probe positions over the whole block
    std::vector<Real> xs;
    for (std::size_t i = b.first_vertex; i <= b.last_vertex; ++i) {
      xs.push_back(verts[i].x);
      xs.push_back(verts[i].x - 1);
      if (i < b.last_vertex)
        for (int j = 1; j <= probe_count; ++j)
          xs.push_back(verts[i].x + (verts[i + 1].x - verts[i].x) * (Real(j) / Real(probe_count + 1)));
    }
    for (int j = 0; j < probe_count; ++j) xs.push_back(b.x_start + (b.x_end - b.x_start) * Real(unit(rng)));

    double umin = 1e300, umax = -1e300, dmin = 1e300, dmax = -1e300, gap = 0;
    bool one = false;
    const Real half_end = b.x_end / 2;
    for (const auto& x : xs) {
      if (x >= b.x_start && x + 1 <= b.x_end) {
        const Real d = G.eval(x + 1) - G.eval(x);
        const double dd = to_double(d);
        umin = std::min(umin, dd);
        umax = std::max(umax, dd);
        if (d == 1) one = true;
        if (d > 1)
          rep.failures.push_back("block " + std::to_string(st.block) + ": unit increment above 1 at x=" +
                                 format_real(x));
        ++st.probes;
      }
      if (x >= b.x_start && x <= half_end) {
        const double d = to_double(G.eval(2 * x) - G.eval(x));
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
        gap = std::max(gap, std::abs(d - 1));
        ++st.probes;
      }
    }
    st.unit_min = umin;
    st.unit_max = umax;
    st.unit_max_is_one = one && umax == 1;
    st.doubling_min = dmin;
    st.doubling_max = dmax;
    st.gap_max = gap;
    if (!st.unit_max_is_one)
      rep.failures.push_back("block " + std::to_string(st.block) + ": unit-increment max is not exactly 1");
    if (l > 0 && !(umin <= 1 / nd))
      rep.failures.push_back("block " + std::to_string(st.block) + ": unit-increment min above 1/n");
    if (!(gap <= st.gap_bound))
      rep.failures.push_back("block " + std::to_string(st.block) + ": |G(2x)-G(x)-1| exceeds 2/n");
    rep.blocks.push_back(st);
  }
  return rep;
}

struct RatioSample {
  double log2_r = 0;
  double ratio = 0;
  int block = 0;
};

struct SweepSample {
  double log_lambda = 0;  // natural log; lambda itself underflows double
  double lambda_mass_y0 = 0;
  double lambda_mass_y2 = 0;
  bool engineered = false;
  int block = 0;
};

struct Prop36Options {
  int y0_blocks = 5;
  int y2_blocks = 3;
  int samples_per_segment = 2;
  int sweep_per_block = 8;
  double limit_tol = 0.05;
};

struct Prop36Report {
  int blocks_y0 = 0;
  int blocks_y2 = 0;
  std::vector<RatioSample> ratios_y0, ratios_y2_generic, ratios_y2_subseq;
  double y0_min = 0, y0_max = 0, y2_generic_min = 0, y2_subseq_min = 0;
  LimitEstimate est_y0, est_y2;
  std::vector<SweepSample> sweeps;
  LimitEstimate sweep_est_y0, sweep_est_y2;
  double log_lambda_floor = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

namespace detail {

template <class Real>
double log2_of(const Real& x) {
  return to_double(math::log2(x));
}

inline LimitEstimate estimate_all(const std::vector<double>& v, double tol) {
  return weak_limit_estimate(std::span<const double>(v), static_cast<int>(v.size()), tol);
}

}  // namespace detail

// criterion_ratio at y = 0 and y = 2 across the trailing blocks, the
// engineered subsequence r_l = (x_l + 2)/2, and lambda-sweeps of
// level_set_delta restricted above the lambda floor.
template <class Real>
Prop36Report prop36_check(const DistributionMeasure<Real>& mu, const PiecewiseLinearG<Real>& G,
                          const Prop36Options& opt = {}) {
  const auto& metas = G.blocks();
  const auto& verts = G.vertices();
  const int nb = static_cast<int>(metas.size());
  if (nb < 2) throw DomainError("prop36_check needs at least 2 blocks");
  Prop36Report rep;
  rep.blocks_y0 = std::min(opt.y0_blocks, nb);
  rep.blocks_y2 = std::min(opt.y2_blocks, nb - 1);
  const Real x_last = G.x_max();
  const Real two(2);
  const double inv_e = std::exp(-1.0);

  // candidate r values per block: vertices and interior samples
  auto block_points = [&](const BlockMeta<Real>& b) {
    std::vector<Real> r;
    for (std::size_t i = b.first_vertex; i <= b.last_vertex; ++i) {
      r.push_back(verts[i].x);
      if (i < b.last_vertex)
        for (int j = 1; j <= opt.samples_per_segment; ++j)
          r.push_back(verts[i].x + (verts[i + 1].x - verts[i].x) * (Real(j) / Real(opt.samples_per_segment + 1)));
    }
    return r;
  };

  std::vector<double> y0_vals, y0_trail, y2_vals;
  std::vector<std::pair<double, double>> y2_trail;  // (log2 r, ratio)
  for (int l = nb - rep.blocks_y0; l < nb; ++l) {
    const bool trailing = l >= nb - rep.blocks_y2;
    for (const auto& r : block_points(metas[l])) {
      if (2 * r <= x_last) {
        const double v = to_double(criterion_ratio(mu, Real(0), r));
        rep.ratios_y0.push_back({detail::log2_of(r), v, l + 1});
        y0_vals.push_back(v);
        if (trailing) y0_trail.push_back(v);
      }
    }
  }
  for (int l = nb - rep.blocks_y2; l < nb; ++l) {
    for (const auto& r : block_points(metas[l])) {
      if (r > two && 2 * r - two <= x_last) {
        const double v = to_double(criterion_ratio(mu, two, r));
        rep.ratios_y2_generic.push_back({detail::log2_of(r), v, l + 1});
        y2_trail.emplace_back(detail::log2_of(r), v);
      }
    }
    // r_l = (x_l + 2)/2 for block start x_l, located in the block before
    const Real r = (metas[l].x_start + two) / 2;
    const double v = to_double(criterion_ratio(mu, two, r));
    rep.ratios_y2_subseq.push_back({detail::log2_of(r), v, l + 1});
    y2_trail.emplace_back(detail::log2_of(r), v);
  }
  std::sort(y2_trail.begin(), y2_trail.end());
  for (const auto& p : y2_trail) y2_vals.push_back(p.second);

  auto mm = [](const std::vector<RatioSample>& v, bool want_min) {
    double out = want_min ? 1e300 : -1e300;
    for (const auto& s : v) out = want_min ? std::min(out, s.ratio) : std::max(out, s.ratio);
    return out;
  };
  rep.y0_min = mm(rep.ratios_y0, true);
  rep.y0_max = mm(rep.ratios_y0, false);
  rep.y2_generic_min = mm(rep.ratios_y2_generic, true);
  rep.y2_subseq_min = mm(rep.ratios_y2_subseq, true);
  if (!y0_trail.empty()) rep.est_y0 = detail::estimate_all(y0_trail, opt.limit_tol);
  if (!y2_vals.empty()) rep.est_y2 = detail::estimate_all(y2_vals, opt.limit_tol);

  // lambda-sweeps: lambda = 1 / (H(x) - H(2)) for x in the trailing blocks;
  // x = x_l is the engineered choice that puts the y = 2 boundary at r_l.
  const Real h2 = mu.h(two);
  const Real floor_l = lambda_floor(mu, G);
  rep.log_lambda_floor = to_double(math::log(floor_l));
  std::vector<double> s0, s2;
  for (int l = nb - rep.blocks_y2; l < nb; ++l) {
    const auto& b = metas[l];
    std::vector<std::pair<Real, bool>> xs{{b.x_start, true}};
    const std::size_t span = b.last_vertex - b.first_vertex;
    for (int j = 1; j <= opt.sweep_per_block; ++j) {
      const std::size_t i = b.first_vertex + span * static_cast<std::size_t>(j) / (opt.sweep_per_block + 1);
      const Real x = (verts[i].x + verts[i + 1].x) / 2;
      xs.push_back({x, false});
    }
    for (const auto& [x, eng] : xs) {
      const Real lambda = Real(1) / (mu.h(x) - h2);
      const double m0 = to_double(lambda * level_set_delta(mu, Real(0), lambda));
      const double m2 = to_double(lambda * level_set_delta(mu, two, lambda));
      rep.sweeps.push_back({to_double(math::log(lambda)), m0, m2, eng, l + 1});
      s0.push_back(m0);
      s2.push_back(m2);
    }
  }
  rep.sweep_est_y0 = detail::estimate_all(s0, opt.limit_tol);
  rep.sweep_est_y2 = detail::estimate_all(s2, opt.limit_tol);

  for (const auto& s : rep.ratios_y0)
    if (!(std::abs(s.ratio / inv_e - 1) <= 0.15)) {
      rep.failures.push_back("y=0 ratio outside e^-1 (1 +- 0.15) at log2 r=" + std::to_string(s.log2_r));
      break;
    }
  if (!(rep.y2_generic_min >= 0.30 && rep.y2_generic_min <= 0.45))
    rep.failures.push_back("y=2 generic minimum outside [0.30, 0.45]");
  if (!(rep.y2_subseq_min >= 0.7)) rep.failures.push_back("y=2 subsequence value below 0.7");
  if (!rep.est_y0.converged) rep.failures.push_back("y=0 estimate did not converge");
  if (rep.est_y2.converged || !(rep.est_y2.limsup_est >= 1.8 * rep.est_y2.liminf_est))
    rep.failures.push_back("y=2 estimate does not oscillate by a factor 1.8");
  return rep;
}

template <class Real>
nlohmann::ordered_json counterexample_json(const PiecewiseLinearG<Real>& G, const PropertyReport& props,
                                           const Prop36Report& p36, long precision_bits) {
  using nlohmann::ordered_json;
  ordered_json j;
  const auto& pr = G.params();
  j["params"] = {{"x0", pr.x0}, {"n1", pr.n1}, {"blocks", pr.blocks}, {"precision_bits", precision_bits}};
  ordered_json blocks = ordered_json::array();
  for (std::size_t l = 0; l < G.blocks().size(); ++l) {
    const auto& b = G.blocks()[l];
    blocks.push_back({{"block", l + 1},
                      {"n", b.n},
                      {"k", b.k},
                      {"log2_x_start", detail::log2_of(b.x_start)},
                      {"x_start", format_real(b.x_start)},
                      {"v_start", to_double(b.v_start)},
                      {"log2_x_end", detail::log2_of(b.x_end)},
                      {"v_end", to_double(b.v_end)},
                      {"s_k", to_double(b.s_k)},
                      {"vertices", b.last_vertex - b.first_vertex + 1}});
  }
  j["blocks"] = blocks;
  auto ratios = [](const std::vector<RatioSample>& v, double lo, double hi) {
    ordered_json rows = ordered_json::array();
    for (const auto& s : v) rows.push_back({s.block, s.log2_r, s.ratio});
    return ordered_json{{"columns", {"block", "log2_r", "ratio"}}, {"min", lo}, {"max", hi}, {"rows", rows}};
  };
  auto mm = [](const std::vector<RatioSample>& v) {
    double a = 1e300, b = -1e300;
    for (const auto& s : v) {
      a = std::min(a, s.ratio);
      b = std::max(b, s.ratio);
    }
    return std::pair{a, b};
  };
  auto est = [](const LimitEstimate& e) {
    return ordered_json{{"liminf", e.liminf_est}, {"limsup", e.limsup_est}, {"window", e.window},
                        {"converged", e.converged}};
  };
  {
    auto [a, b] = mm(p36.ratios_y0);
    j["ratios_y0"] = ratios(p36.ratios_y0, a, b);
    j["ratios_y0"]["blocks_used"] = p36.blocks_y0;
    j["ratios_y0"]["estimate"] = est(p36.est_y0);
  }
  {
    auto [a, b] = mm(p36.ratios_y2_generic);
    j["ratios_y2_generic"] = ratios(p36.ratios_y2_generic, a, b);
    j["ratios_y2_generic"]["blocks_used"] = p36.blocks_y2;
    j["ratios_y2_generic"]["estimate"] = est(p36.est_y2);
  }
  {
    auto [a, b] = mm(p36.ratios_y2_subseq);
    j["ratios_y2_subseq"] = ratios(p36.ratios_y2_subseq, a, b);
  }
  ordered_json unit = ordered_json::array(), gap = ordered_json::array();
  for (const auto& s : props.blocks) {
    unit.push_back({{"block", s.block}, {"n", s.n}, {"min", s.unit_min}, {"max", s.unit_max},
                    {"max_is_one", s.unit_max_is_one}, {"s_k", s.s_k}});
    gap.push_back({{"block", s.block}, {"n", s.n}, {"min", s.doubling_min}, {"max", s.doubling_max},
                   {"max_abs_gap", s.gap_max}, {"bound", s.gap_bound}});
  }
  j["unit_increment_stats"] = unit;
  j["doubling_gap"] = gap;
  ordered_json sw = ordered_json::array();
  for (const auto& s : p36.sweeps)
    sw.push_back({{"block", s.block}, {"log_lambda", s.log_lambda}, {"engineered", s.engineered},
                  {"lambda_mass_y0", s.lambda_mass_y0}, {"lambda_mass_y2", s.lambda_mass_y2}});
  j["sweeps"] = {{"log_lambda_floor", p36.log_lambda_floor},
                 {"rows", sw},
                 {"estimate_y0", est(p36.sweep_est_y0)},
                 {"estimate_y2", est(p36.sweep_est_y2)}};
  std::vector<std::string> failures = props.failures;
  failures.insert(failures.end(), p36.failures.begin(), p36.failures.end());
  j["failures"] = failures;
  j["passed"] = failures.empty();
  return j;
}

struct CounterexampleRun {
  nlohmann::ordered_json report;
  bool passed = false;
};

// Builds G at the precision the parameters need (BigReal), then runs the
// property checks and the weak-type comparison.
inline CounterexampleRun run_counterexample(const CounterexampleParams& p, int probes = 4, std::uint64_t seed = 0,
                                            const Prop36Options& opt = {}) {
  const Feasibility f = feasibility(p);
  const long bits = std::max<long>(f.bits + 64, 128);
  PrecisionScope scope(bits);
  const auto G = build_G<BigReal>(p);
  const auto mu = counterexample_measure(G);
  const auto props = check_properties(G, probes, seed);
  const auto p36 = prop36_check(mu, G, opt);
  CounterexampleRun run;
  run.report = counterexample_json(G, props, p36, bits);
  run.passed = props.passed() && p36.passed();
  return run;
}

}  // namespace hlmax
