#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "hlmax/cli.hpp"

using namespace hlmax;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// data rows of a CSV (header and # lines dropped), split on ','
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    out.push_back(f);
  }
  return out;
}

// strtod underflows to 0 where stod throws
double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::string temp_path(const std::string& name) { return testing::TempDir() + name; }

}  // namespace

TEST(Criterion, Lebesgue) {
  const auto r = run({"criterion", "--measure", "lebesgue", "--y", "0,2", "--r-grid", "geo:10:2:20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "y,r,h_r,h_2r_minus_y,ratio");
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 40u);
  double prev = INFINITY;
  for (const auto& row : t) {
    const double y = num(row[0]), rr = num(row[1]), ratio = num(row[4]);
    EXPECT_NEAR(ratio, rr / (2 * rr - y), 1e-15);
    if (y == 0) {
      EXPECT_EQ(ratio, 0.5);
    }
    if (y == 2) {
      // r / (2r - 2) falls to 1/2 from above
      EXPECT_GT(ratio, 0.5);
      EXPECT_LT(ratio, prev);
      prev = ratio;
    }
  }
  EXPECT_NE(r.out.find("# y=0 liminf=0.5 limsup=0.5 window=8 converged=true"), std::string::npos);
}

TEST(Criterion, Logweight) {
  const auto r = run({"criterion", "--measure", "logweight", "--y", "0", "--r-grid", "geo:10:4:20"});
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  for (const auto& row : t) {
    const double rr = num(row[1]);
    EXPECT_NEAR(num(row[4]), std::log1p(rr) / std::log1p(2 * rr), 1e-14);
  }
  EXPECT_GE(num(t.back()[4]), 0.95);
}

TEST(Criterion, ExpweightPromotesPastDoubleRange) {
  const auto r = run({"criterion", "--measure", "expweight", "--y", "0", "--r-grid", "geo:1:2:12"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("256 bits"), std::string::npos);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 12u);
  for (std::size_t i = 1; i < 9; ++i) EXPECT_LT(num(t[i][4]), num(t[i - 1][4]));
  EXPECT_EQ(t.back()[4].substr(0, 18), "3.6719863840377913");  // 1/(e^2048 + 1)
  EXPECT_LT(num(t.back()[4]), 1e-3);
  // (e^r - 1)/(e^{2r} - 1) = 1/(e^r + 1)
  EXPECT_NEAR(num(t[3][4]), 1 / (std::exp(8.0) + 1), 1e-18);
}

TEST(Criterion, JsonAndBoundedMeasure) {
  const auto j = run({"criterion", "--measure", "lebesgue", "--format", "json", "--r-grid", "geo:10:2:10"});
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["rows"].size(), 10u);
  EXPECT_EQ(doc["estimates"][0]["converged"], true);
  const std::string path = temp_path("hlmax_cli_bounded.txt");
  {
    std::ofstream f(path);
    f << "segment 0 exp 1 -1\n";
  }
  const auto b = run({"criterion", "--measure", path, "--r-grid", "geo:1:2:10"});
  EXPECT_EQ(b.code, 2);
  EXPECT_NE(b.out.find("bounded"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Sweep, LebesgueDirac) {
  const auto r = run({"sweep", "--measure", "lebesgue", "--nu", "atom:0:1", "--lambda-grid", "geo:1e-1:0.5:20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "lambda,mass_lo,mass_hi,lambda_mass_lo,lambda_mass_hi,certified");
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 20u);
  for (const auto& row : t) {
    EXPECT_NEAR(num(row[3]), 0.5, 1e-12);
    EXPECT_EQ(row[5], "true");
  }
  EXPECT_NE(r.out.find("# liminf="), std::string::npos);
  EXPECT_NE(r.out.find("# limsup="), std::string::npos);
  EXPECT_NE(r.out.find("# converged=true"), std::string::npos);
}

TEST(Sweep, ExpweightDirac) {
  const auto r = run({"sweep", "--measure", "expweight", "--nu", "atom:0:1", "--lambda-grid", "geo:1e-1:0.5:30"});
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  const double lambda = num(t.back()[0]);
  EXPECT_NEAR(num(t.back()[3]), lambda * (std::sqrt(1 + 1 / lambda) - 1), 1e-12);
  EXPECT_LE(num(t.back()[3]), 2e-3);
}

TEST(Sweep, Mixture) {
  const auto r = run({"sweep", "--measure", "lebesgue", "--nu", "atom:0:0.3;atom:5:0.2;step:1:4:0.166667",
                      "--lambda-grid", "geo:1e-2:0.5:20", "--tol", "1e-4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = rows(r.out);
  const double nu_mass = 0.5 + 3 * 0.166667;
  EXPECT_NEAR(num(t.back()[3]), 0.5 * nu_mass, 2e-2);
  EXPECT_NEAR(num(t.back()[4]), 0.5 * nu_mass, 2e-2);
  EXPECT_LE(num(t.back()[4]) - num(t.back()[3]), 1e-4 * (1 + 1e-9));
}

TEST(Sweep, NuFileAndJson) {
  const std::string path = temp_path("hlmax_cli_nu.txt");
  {
    std::ofstream f(path);
    f << "step 0 1 1\n";
  }
  const auto r = run({"sweep", "--measure", "lebesgue", "--nu", path, "--lambda-grid", "geo:1e-2:0.5:8",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rows"].size(), 8u);
  EXPECT_EQ(doc["nu_mass"], 1.0);
  EXPECT_TRUE(doc["estimate"]["converged"].get<bool>());
  std::remove(path.c_str());
}

TEST(Sweep, UncertifiedRowsExitTwo) {
  // a tolerance nothing can meet: rows are still emitted, marked false
  const auto r = run({"sweep", "--measure", "lebesgue", "--nu", "step:0:1:1", "--lambda-grid", "geo:1e-2:0.5:1",
                      "--tol", "1e-300"});
  EXPECT_EQ(r.code, 2);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0][5], "false");
}

TEST(DeltaK, Lebesgue) {
  const auto r = run({"delta-k", "--measure", "lebesgue", "--k", "0.5,1,2", "--lambda-grid", "geo:1e-2:0.1:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "k,lambda,delta_lo,delta_hi,certified");
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 9u);
  for (const auto& row : t) {
    const double k = num(row[0]);
    const double want = k <= 1 ? 1 / (2 * k) : 1 / (1 + k);
    EXPECT_LE(num(row[2]), want + 1e-12);
    EXPECT_GE(num(row[3]), want - 1e-12);
    EXPECT_NEAR(num(row[2]), want, 1e-9);
    EXPECT_EQ(row[4], "true");
  }
}

TEST(DeltaK, ApproachFromBothSides) {
  const auto r = run({"delta-k", "--measure", "lebesgue", "--k", "0.9,0.99,0.999,1.001,1.01,1.1", "--lambda-grid",
                      "geo:1e-3:0.1:1"});
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  for (const auto& row : t) EXPECT_NEAR(num(row[2]), 0.5, 0.06);
  EXPECT_NEAR(num(t[2][2]), 0.5, 1e-3);
  EXPECT_NEAR(num(t[3][2]), 0.5, 1e-3);
}

TEST(DeltaK, Expweight) {
  // k = 1: lambda * H(log(1 + 1/lambda)/2) = lambda (sqrt(1 + 1/lambda) - 1)
  const auto r = run({"delta-k", "--measure", "expweight", "--k", "1", "--lambda-grid", "geo:1e-3:0.1:3"});
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double l = num(t[i][1]);
    EXPECT_NEAR(num(t[i][2]), l * (std::sqrt(1 + 1 / l) - 1), 1e-12);
    if (i > 0) {
      EXPECT_LT(num(t[i][2]), num(t[i - 1][2]));
    }
  }
  EXPECT_LE(num(t.back()[2]), 1e-2);
}

TEST(Counterexample, DegenerateX0) {
  const auto r = run({"counterexample", "--x0", "1", "--n1", "2", "--blocks", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("block 1"), std::string::npos);
}

TEST(Counterexample, InfeasibleDepthIsReported) {
  // x_l grows doubly exponentially; 40 blocks would need ~10^17 bits
  const auto r = run({"counterexample", "--x0", "2", "--n1", "2", "--blocks", "40"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bits"), std::string::npos);
}

TEST(Counterexample, SevenBlocksPass) {
  const auto r = run({"counterexample", "--x0", "2", "--n1", "2", "--blocks", "7", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_GE(doc["ratios_y2_subseq"]["min"].get<double>(), 0.7);
  EXPECT_NEAR(doc["ratios_y0"]["min"].get<double>(), std::exp(-1.0), 0.15 * std::exp(-1.0));
  EXPECT_NEAR(doc["ratios_y0"]["max"].get<double>(), std::exp(-1.0), 0.15 * std::exp(-1.0));
}

TEST(Counterexample, AsMeasureSource) {
  const auto r = run({"criterion", "--measure", "counterexample:2:2:4", "--y", "0", "--r-grid", "geo:4:2:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(rows(r.out).size(), 10u);
}

TEST(Determinism, RepeatedRunsAreIdentical) {
  const std::vector<std::string> sweep = {"sweep", "--measure", "periodic", "--nu", "atom:0.3:1;step:1:2:0.5",
                                          "--lambda-grid", "geo:1e-1:0.5:6"};
  EXPECT_EQ(run(sweep).out, run(sweep).out);
  const std::vector<std::string> ce = {"counterexample", "--blocks", "4", "--seed", "9"};
  EXPECT_EQ(run(ce).out, run(ce).out);
  // the seed moves the random probes, not the construction
  const auto a = nlohmann::json::parse(run({"counterexample", "--blocks", "4", "--seed", "1"}).out);
  const auto b = nlohmann::json::parse(run({"counterexample", "--blocks", "4", "--seed", "2"}).out);
  EXPECT_EQ(a["blocks"], b["blocks"]);
  EXPECT_EQ(a["ratios_y0"], b["ratios_y0"]);
}

TEST(Output, OutFlagWritesFile) {
  const std::string path = temp_path("hlmax_cli_out.csv");
  const auto r = run({"criterion", "--measure", "lebesgue", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  EXPECT_EQ(s.str(), run({"criterion", "--measure", "lebesgue"}).out);
  std::remove(path.c_str());
}

TEST(MeasureShow, RoundTrip) {
  for (const char* name : {"lebesgue", "logweight", "expweight", "periodic", "flatgap"}) {
    const auto r = run({"measure", "show", "--measure", name});
    ASSERT_EQ(r.code, 0);
    const auto back = parse_measure_text(r.out);
    const auto ref = preset(name);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      EXPECT_EQ(back.h(x), ref.h(x)) << name << ' ' << x;
    }
  }
  const auto j = run({"measure", "show", "--measure", "flatgap", "--format", "json"});
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["segments"].size(), 3u);
}

TEST(Errors, InvalidInputExitsOne) {
  EXPECT_EQ(run({"criterion", "--measure", "nosuch"}).code, 1);
  EXPECT_EQ(run({"criterion", "--measure", "lebesgue", "--r-grid", "geo:1:2"}).code, 1);
  EXPECT_EQ(run({"criterion", "--measure", "lebesgue", "--r-grid", "geo:10:0.5:4"}).code, 1);
  EXPECT_EQ(run({"criterion", "--measure", "lebesgue", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"sweep", "--measure", "lebesgue", "--nu", "atom:1"}).code, 1);
  EXPECT_EQ(run({"sweep", "--measure", "lebesgue"}).code, 1);
  EXPECT_EQ(run({"sweep", "--measure", "lebesgue", "--nu", "atom:0:1", "--lambda-grid", "geo:1e-3:2:3"}).code, 1);
  EXPECT_EQ(run({"delta-k", "--measure", "lebesgue", "--k", "-1"}).code, 1);
  EXPECT_EQ(run({"counterexample", "--format", "csv"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Binary, RunsAsProcess) {
  const std::string cmd = std::string(HLMAX_CLI_PATH) + " criterion --measure lebesgue --r-grid geo:10:2:3 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::string text;
  char buf[256];
  while (std::fgets(buf, sizeof buf, p)) text += buf;
  const int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(text.substr(0, text.find('\n')), "y,r,h_r,h_2r_minus_y,ratio");
  FILE* q = popen((std::string(HLMAX_CLI_PATH) + " criterion --measure nosuch 2>/dev/null").c_str(), "r");
  ASSERT_NE(q, nullptr);
  while (std::fgets(buf, sizeof buf, q)) {
  }
  EXPECT_EQ(WEXITSTATUS(pclose(q)), 1);
}
