#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "hlmax/counterexample.hpp"

using namespace hlmax;
using boost::multiprecision::cpp_rational;

namespace {

long k_by_summation(long n) {
  cpp_rational sum = 0;
  for (long i = 0;; ++i) {
    sum += cpp_rational(1, n + i);
    if (sum > 1) return i;
  }
}

struct Built {
  PrecisionScope scope;
  PiecewiseLinearG<BigReal> G;
  DistributionMeasure<BigReal> mu;
  explicit Built(const CounterexampleParams& p)
      : scope(feasibility(p).bits + 64), G(build_G<BigReal>(p)), mu(counterexample_measure(G)) {}
};

}  // namespace

TEST(KOfN, Examples) {
  EXPECT_EQ(k_of_n(2), 2);
  EXPECT_EQ(k_of_n(3), 4);
  EXPECT_EQ(k_of_n(4), 6);
  EXPECT_THROW(k_of_n(1), DomainError);
  EXPECT_THROW(k_of_n(0), DomainError);
}

TEST(KOfN, MatchesExactSummation) {
  for (long n = 2; n <= 300; ++n) EXPECT_EQ(k_of_n(n), k_by_summation(n)) << n;
}

TEST(BuildG, FirstBlockVertices) {
  const auto G = build_G<double>({2.0, 2, 1});
  const std::vector<std::pair<double, double>> want = {{2, 0},   {3, 1}, {3.25, 1}, {4, 1},
                                                       {6, 5.0 / 3}, {6.5, 2}, {8, 2}, {12, 29.0 / 12}};
  ASSERT_EQ(G.vertices().size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(G.vertices()[i].x, want[i].first) << i;
    EXPECT_NEAR(G.vertices()[i].g, want[i].second, 1e-10) << i;
  }
  const auto& b = G.blocks()[0];
  EXPECT_EQ(b.n, 2);
  EXPECT_EQ(b.k, 2);
  EXPECT_EQ(b.x_end, 12.0);
  EXPECT_NEAR(b.v_end, 29.0 / 12, 1e-10);
}

TEST(BuildG, BlockRecursion) {
  const auto G = build_G<double>({2.0, 2, 3});
  ASSERT_EQ(G.blocks().size(), 3u);
  EXPECT_EQ(G.blocks()[1].n, 4);
  EXPECT_EQ(G.blocks()[1].x_start, 12.0);
  EXPECT_EQ(G.blocks()[1].x_end, 832.0);
  for (const auto& b : G.blocks()) EXPECT_EQ(G.eval(b.x_start + 1) - G.eval(b.x_start), 1.0);
}

TEST(BuildG, Eval) {
  const auto G = build_G<double>({2.0, 2, 2});
  EXPECT_NEAR(G.eval(5.0), 4.0 / 3, 1e-15);
  EXPECT_EQ(G.eval(7.0), 2.0);
  EXPECT_EQ(G.eval(2.0), 0.0);
  EXPECT_THROW(G.eval(1.5), RangeError);
  EXPECT_THROW(G.eval(G.x_max() * 2), RangeError);
}

TEST(BuildG, RejectsInfeasibleParams) {
  // x0 = 1: C_0 = 2 + 2^-k lies past A_1 = 2
  EXPECT_THROW(build_G<double>({1.0, 2, 1}), ConstructionError);
  EXPECT_THROW(build_G<double>({2.0, 1, 1}), ConstructionError);
  EXPECT_THROW(build_G<double>({2.0, 2, 0}), ConstructionError);
  // the fourth block needs more than 53 bits
  EXPECT_THROW(build_G<double>({2.0, 2, 4}), ConstructionError);
  try {
    feasibility({2.0, 2, 40});
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("block "), std::string::npos);
  }
}

TEST(BuildG, MonotoneAndBookkeeping) {
  const Built b({2.0, 2, 5});
  const auto& v = b.G.vertices();
  for (std::size_t i = 1; i < v.size(); ++i) {
    EXPECT_GT(v[i].x, v[i - 1].x);
    EXPECT_GE(v[i].g, v[i - 1].g);
  }
  const auto& m = b.G.blocks();
  for (std::size_t l = 0; l + 1 < m.size(); ++l) {
    EXPECT_EQ(m[l + 1].n, m[l].n + k_of_n(m[l].n));
    EXPECT_EQ(m[l + 1].x_start, math::ldexp(m[l].x_start + 1, static_cast<int>(m[l].k)));
    EXPECT_EQ(m[l + 1].v_start, m[l].v_end);
  }
  for (const auto& blk : m) {
    // S(l, k) against an independent exact sum
    cpp_rational s = 0;
    for (long j = 1; j <= blk.k; ++j) s += cpp_rational(1, blk.n + j);
    EXPECT_NEAR(to_double(blk.s_k), static_cast<double>(s), 1e-15);
    EXPECT_GT(s, 1 - cpp_rational(1, blk.n));
    EXPECT_LE(s, 1);
  }
}

TEST(BuildG, DoublingOnRisingLegs) {
  // on the A_m B_m leg interior, G(2x) - G(x) = 1 - t / (2^m (n + m + 1))
  const Built b({2.0, 2, 4});
  const auto& v = b.G.vertices();
  for (const auto& blk : b.G.blocks()) {
    for (long m = 0; m < blk.k; ++m) {
      const BigReal a = math::ldexp(blk.x_start, static_cast<int>(m));
      for (double t : {0.1, 0.5, 0.9}) {
        const BigReal x = a + math::ldexp(BigReal(t), static_cast<int>(m));
        if (2 * x > v.back().x) continue;
        const double d = to_double(b.G.eval(2 * x) - b.G.eval(x));
        const double lo = 1 - 1.0 / static_cast<double>(blk.n + m + 1);
        EXPECT_GE(d, lo - 1e-12);
        EXPECT_LE(d, 1 + 1e-12);
        EXPECT_NEAR(d, 1 - t / static_cast<double>(blk.n + m + 1), 1e-9);
      }
    }
  }
}

TEST(Properties, UnitIncrementsAndGaps) {
  const Built b({2.0, 2, 5});
  const auto rep = check_properties(b.G, 4, 42);
  for (const auto& f : rep.failures) ADD_FAILURE() << f;
  EXPECT_TRUE(rep.passed());
  ASSERT_EQ(rep.blocks.size(), 5u);
  for (const auto& s : rep.blocks) {
    EXPECT_EQ(s.unit_max, 1.0);
    EXPECT_TRUE(s.unit_max_is_one);
    EXPECT_LE(s.gap_max, s.gap_bound);
  }
  // flat stretch C_1 A_2 in block 1
  EXPECT_EQ(b.G.eval(BigReal(7.5)) - b.G.eval(BigReal(6.5)), 0);
  EXPECT_THROW(check_properties(build_G<double>({2.0, 2, 2})), DomainError);
}

TEST(Measure, RoundTripAtVertices) {
  const Built b({2.0, 2, 5});
  for (const auto& v : b.G.vertices()) {
    const BigReal want = math::expm1(v.g);
    const BigReal got = b.mu.h(v.x);
    if (want == 0)
      EXPECT_EQ(got, 0);
    else
      EXPECT_NEAR(to_double(got / want), 1.0, 1e-10);
  }
}

TEST(Measure, Examples) {
  const auto G = build_G<double>({2.0, 2, 2});
  const auto mu = counterexample_measure(G);
  EXPECT_EQ(mu.h(2.0), 0.0);
  EXPECT_EQ(mu.h(1.0), 0.0);
  EXPECT_NEAR(mu.h(3.0), std::exp(1.0) - 1, 1e-12);
  EXPECT_NEAR(mu.h(8.0), std::exp(2.0) - 1, 1e-12);
}

TEST(Measure, ShiftRatioAnomaly) {
  // H(r - 2)/H(r) swings by more than e^{0.5} within the last blocks
  const Built b({2.0, 2, 5});
  const auto& m = b.G.blocks();
  const auto& v = b.G.vertices();
  double lo = 1e300, hi = -1e300;
  for (std::size_t l = m.size() - 3; l < m.size(); ++l) {
    for (std::size_t i = m[l].first_vertex; i <= m[l].last_vertex; ++i) {
      const BigReal r = v[i].x;
      if (!(r > 2)) continue;
      const double s = to_double(shift_ratio(b.mu, BigReal(2), r));
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    const double s = to_double(shift_ratio(b.mu, BigReal(2), m[l].x_start + 2));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  EXPECT_GE(hi / lo, std::exp(0.5));
}

TEST(Oscillation, TrailingBlocks) {
  // the e^-1 band needs late blocks: with fewer than 7 the y = 0 window
  // reaches back to n_l = 4
  const Built b({2.0, 2, 7});
  const auto rep = prop36_check(b.mu, b.G);
  for (const auto& f : rep.failures) ADD_FAILURE() << f;
  EXPECT_NEAR(rep.y0_min, std::exp(-1.0), 0.15 * std::exp(-1.0));
  EXPECT_NEAR(rep.y0_max, std::exp(-1.0), 0.15 * std::exp(-1.0));
  EXPECT_GE(rep.y2_generic_min, 0.30);
  EXPECT_LE(rep.y2_generic_min, 0.45);
  EXPECT_GE(rep.y2_subseq_min, 0.7);
  EXPECT_TRUE(rep.est_y0.converged);
  EXPECT_FALSE(rep.est_y2.converged);
  EXPECT_GE(rep.est_y2.limsup_est / rep.est_y2.liminf_est, 1.8);
  // sweeps stay above the floor
  for (const auto& s : rep.sweeps) EXPECT_GE(s.log_lambda, rep.log_lambda_floor);
}

TEST(Run, JsonReport) {
  const auto run = run_counterexample({2.0, 2, 5}, 2, 1);
  const auto& j = run.report;
  for (const char* key : {"params", "blocks", "ratios_y0", "ratios_y2_generic", "ratios_y2_subseq",
                          "unit_increment_stats", "doubling_gap", "sweeps", "failures", "passed"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["blocks"].size(), 5u);
  EXPECT_EQ(j["passed"].get<bool>(), run.passed);
  EXPECT_EQ(j["blocks"][0]["k"], 2);
  EXPECT_EQ(j["blocks"][1]["x_start"], "12");
}
