#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input,
// 2 the computation ran but could not certify or an assertion failed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlmax/counterexample.hpp"
#include "hlmax/grid.hpp"
#include "hlmax/io.hpp"
#include "hlmax/multiprecision.hpp"
#include "hlmax/presets.hpp"
#include "hlmax/weaklimit.hpp"

namespace hlmax::cli {

enum ExitCode { kOk = 0, kInvalid = 1, kUncertified = 2 };

struct Common {
  std::string measure;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  long precision = 0;  // bits; 0 selects double
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class Real>
nlohmann::ordered_json num(const Real& v) {
  const double d = to_double(v);
  if (std::isfinite(d)) return d;
  return format_real(v);
}

inline const char* boolstr(bool b) { return b ? "true" : "false"; }

inline CounterexampleParams parse_counterexample_spec(const std::string& spec) {
  const auto f = hlmax::detail::split(spec, ':');
  if (f.size() != 4) throw ParseError("expected counterexample:<x0>:<n1>:<blocks>");
  CounterexampleParams p;
  p.x0 = hlmax::detail::parse_double(f[1]);
  const double n1 = hlmax::detail::parse_double(f[2]);
  const double blocks = hlmax::detail::parse_double(f[3]);
  if (n1 != std::floor(n1) || blocks != std::floor(blocks)) throw ParseError("n1 and blocks must be integers");
  p.n1 = static_cast<int>(n1);
  p.blocks = static_cast<int>(blocks);
  return p;
}

template <class Real>
DistributionMeasure<Real> resolve_measure(const std::string& spec) {
  for (const auto& name : preset_names())
    if (spec == name) return preset<Real>(spec);
  if (std::filesystem::is_regular_file(spec)) return load_measure<Real>(spec);
  throw ParseError("unknown measure '" + spec + "' (not a preset, counterexample:<x0>:<n1>:<blocks>, or a file)");
}

template <class Real>
FiniteTestMeasure<Real> resolve_nu(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) return load_nu<Real>(spec);
  return parse_nu_inline<Real>(spec);
}

// Runs f(mu) with mu resolved at the scalar type the source needs.
template <class F>
int with_measure(const Common& c, F&& f) {
  if (c.measure.rfind("counterexample:", 0) == 0) {
    const auto p = parse_counterexample_spec(c.measure);
    const Feasibility fe = feasibility(p);
    PrecisionScope scope(std::max(fe.bits + 64, c.precision));
    const auto G = build_G<BigReal>(p);
    const auto mu = counterexample_measure(G);
    return f(mu);
  }
  if (c.precision > 0) {
    if (c.precision < 16 || c.precision > 1 << 20) throw ParseError("--precision must be in [16, 1048576] bits");
    PrecisionScope scope(c.precision);
    const auto mu = resolve_measure<BigReal>(c.measure);
    return f(mu);
  }
  const auto mu = resolve_measure<double>(c.measure);
  return f(mu);
}

inline void check_format(const Common& c, bool csv_allowed, bool file_allowed = false) {
  if (c.format == "json") return;
  if (c.format == "csv" && csv_allowed) return;
  if (c.format == "file" && file_allowed) return;
  throw ParseError("unsupported --format '" + c.format + "'");
}

struct CriterionArgs {
  std::vector<double> ys{0.0};
  std::string r_grid = "geo:10:2:20";
  int window = 8;
  double limit_tol = 2e-2;
};

template <class Real>
int criterion(const DistributionMeasure<Real>& mu, const Common& c, const CriterionArgs& a, std::ostream& os) {
  const GridSpec grid = parse_grid(a.r_grid);
  if (!(grid.ratio > 1)) throw ParseError("r grid must be increasing (ratio > 1)");
  nlohmann::ordered_json rows = nlohmann::ordered_json::array(), ests = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "y,r,h_r,h_2r_minus_y,ratio\n";
  std::vector<std::string> notes;
  for (double yd : a.ys) {
    if (!(yd >= 0)) throw ParseError("--y values must be >= 0");
    const Real y(yd);
    std::vector<double> vals;
    for (double rd : grid.values()) {
      const Real r(rd);
      if (!(r > y)) {
        notes.push_back("# skipped y=" + fmt(yd) + " r=" + fmt(rd) + " (needs r > y)");
        continue;
      }
      const Real hr = mu.h(r);
      const Real hd = mu.h(2 * r - y);
      if (!math::isfinite(hd)) throw RangeError("H(2r - y) overflows at r=" + fmt(rd));
      const Real ratio = criterion_ratio(mu, y, r);
      vals.push_back(to_double(ratio));
      csv << fmt(yd) << ',' << fmt(rd) << ',' << format_real(hr) << ',' << format_real(hd) << ','
          << format_real(ratio) << '\n';
      rows.push_back({{"y", yd}, {"r", rd}, {"h_r", num(hr)}, {"h_2r_minus_y", num(hd)}, {"ratio", num(ratio)}});
    }
    if (static_cast<int>(vals.size()) >= a.window) {
      const auto e = weak_limit_estimate(std::span<const double>(vals), a.window, a.limit_tol);
      notes.push_back("# y=" + fmt(yd) + " liminf=" + fmt(e.liminf_est) + " limsup=" + fmt(e.limsup_est) +
                      " window=" + std::to_string(e.window) + " converged=" + boolstr(e.converged));
      ests.push_back({{"y", yd}, {"liminf", e.liminf_est}, {"limsup", e.limsup_est}, {"window", e.window},
                      {"converged", e.converged}});
    } else {
      notes.push_back("# y=" + fmt(yd) + " fewer rows than the window; no estimate");
    }
  }
  if (c.format == "json") {
    os << nlohmann::ordered_json{{"unbounded", mu.unbounded()}, {"rows", rows}, {"estimates", ests}}.dump(2)
       << '\n';
  } else {
    os << csv.str();
    for (const auto& n : notes) os << n << '\n';
    if (!mu.unbounded()) os << "# measure is bounded: H(inf) < inf\n";
  }
  return mu.unbounded() ? kOk : kUncertified;
}

struct SweepArgs {
  std::string nu;
  std::string lambda_grid = "geo:0.1:0.5:40";
  double tol = 1e-4;
  int window = 8;
  double limit_tol = 2e-2;
  int refine = 8;
};

template <class Real>
int sweep(const DistributionMeasure<Real>& mu, const Common& c, const SweepArgs& a, std::ostream& os) {
  const GridSpec grid = parse_grid(a.lambda_grid);
  if (!(grid.ratio < 1)) throw ParseError("lambda grid must be decreasing (ratio < 1)");
  if (!(a.tol > 0)) throw ParseError("--tol must be > 0");
  const auto nu = resolve_nu<Real>(a.nu);
  if (!mu.unbounded()) {
    os << "# measure is bounded: H(inf) < inf; level sets are not finite-mass limits\n";
    return kUncertified;
  }
  CertifyOptions opt;
  opt.refine = a.refine;
  const auto s = sweep_nu(mu, nu, grid, Real(a.tol), opt);
  std::optional<LimitEstimate> e;
  if (static_cast<int>(s.rows.size()) >= a.window) e = weak_limit_estimate(s, a.window, a.limit_tol);
  if (c.format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : s.rows)
      rows.push_back({{"lambda", num(r.lambda)},
                      {"mass_lo", num(r.mass.lo)},
                      {"mass_hi", num(r.mass.hi)},
                      {"lambda_mass_lo", num(r.lambda_mass.lo)},
                      {"lambda_mass_hi", num(r.lambda_mass.hi)},
                      {"certified", r.mass.certified}});
    nlohmann::ordered_json j{{"grid", grid.str()}, {"nu_mass", num(nu.total_mass())}, {"rows", rows}};
    if (e)
      j["estimate"] = {{"liminf", e->liminf_est}, {"limsup", e->limsup_est}, {"window", e->window},
                       {"converged", e->converged}};
    os << j.dump(2) << '\n';
  } else {
    os << sweep_csv(s);
    os << "# nu_mass=" << format_real(nu.total_mass()) << '\n';
    if (e) {
      os << "# liminf=" << fmt(e->liminf_est) << '\n';
      os << "# limsup=" << fmt(e->limsup_est) << '\n';
      os << "# converged=" << boolstr(e->converged) << '\n';
    } else {
      os << "# fewer rows than the window; no estimate\n";
    }
  }
  return s.all_certified() ? kOk : kUncertified;
}

struct DeltaKArgs {
  std::vector<double> ks;
  std::string lambda_grid = "geo:0.01:0.1:3";
  double x_cap = 0;  // 0: automatic
  double tol = 1e-10;
};

template <class Real>
int delta_k_cmd(const DistributionMeasure<Real>& mu, const Common& c, const DeltaKArgs& a, std::ostream& os) {
  const GridSpec grid = parse_grid(a.lambda_grid);
  if (a.ks.empty()) throw ParseError("--k needs at least one value");
  std::ostringstream csv;
  csv << "k,lambda,delta_lo,delta_hi,certified\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  bool all = true;
  DeltaKOptions opt;
  opt.tol = a.tol;
  for (double k : a.ks) {
    if (!(k > 0)) throw ParseError("--k values must be > 0");
    for (double l : grid.values()) {
      const Real lambda(l);
      Real cap(a.x_cap);
      if (!(a.x_cap > 0)) {
        // beyond 100 LEFT(1/lambda) the ball B(x, kx) is not small unless mu is very sparse
        const Real s = mu.inverse(Real(1) / lambda, Side::left);
        cap = math::isfinite(s) ? 100 * s + 100 : Real(1e300);
      }
      const auto d = delta_k(mu, Real(k), lambda, cap, opt);
      all = all && d.certified;
      csv << fmt(k) << ',' << fmt(l) << ',' << format_real(d.lo) << ',' << format_real(d.hi) << ','
          << boolstr(d.certified) << '\n';
      rows.push_back({{"k", k}, {"lambda", l}, {"delta_lo", num(d.lo)}, {"delta_hi", num(d.hi)},
                      {"certified", d.certified}});
    }
  }
  if (c.format == "json")
    os << nlohmann::ordered_json{{"rows", rows}}.dump(2) << '\n';
  else
    os << csv.str();
  return all ? kOk : kUncertified;
}

inline int emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + c.out + "'");
  f << text;
  return kOk;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Centered maximal functions on weighted [0, inf): level sets and weak-type limits", "hlmax"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hlmax 1.0.0");

  Common common;
  auto add_common = [&](CLI::App* sub, bool need_measure) {
    auto* m = sub->add_option("--measure", common.measure,
                              "preset name, measure file, or counterexample:<x0>:<n1>:<blocks>");
    if (need_measure) m->required();
    sub->add_option("--format", common.format, "csv | json");
    sub->add_option("--out", common.out, "output path (default: stdout)");
    sub->add_option("--seed", common.seed, "seed for randomized probe grids");
    sub->add_option("--precision", common.precision, "working precision in bits (0 = double)");
  };

  detail::CriterionArgs crit;
  auto* c_crit = app.add_subcommand("criterion", "H(r)/H(2r-y) over an r grid");
  add_common(c_crit, true);
  c_crit->add_option("--y", crit.ys, "comma-separated centres")->delimiter(',');
  c_crit->add_option("--r-grid", crit.r_grid, "geo:<start>:<ratio>:<count>");
  c_crit->add_option("--window", crit.window, "trailing window of the limit estimate");
  c_crit->add_option("--tol", crit.limit_tol, "convergence tolerance of the limit estimate");

  detail::SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "certified lambda * mu{M nu > lambda} over a lambda grid");
  add_common(c_sweep, true);
  c_sweep->add_option("--nu", sw.nu, "inline atom:<p>:<m>;step:<a>:<b>:<h> or a nu file")->required();
  c_sweep->add_option("--lambda-grid", sw.lambda_grid, "geo:<start>:<ratio>:<count>");
  c_sweep->add_option("--tol", sw.tol, "certification tolerance on lambda * (hi - lo)");
  c_sweep->add_option("--window", sw.window, "trailing window of the limit estimate");
  c_sweep->add_option("--limit-tol", sw.limit_tol, "convergence tolerance of the limit estimate");
  c_sweep->add_option("--refine", sw.refine, "radius refinement of the maximal search");

  detail::DeltaKArgs dk;
  auto* c_dk = app.add_subcommand("delta-k", "lambda * mu{x : mu(B(x, kx)) < 1/lambda}");
  add_common(c_dk, true);
  c_dk->add_option("--k", dk.ks, "comma-separated k values")->delimiter(',')->required();
  c_dk->add_option("--lambda-grid", dk.lambda_grid, "geo:<start>:<ratio>:<count>");
  c_dk->add_option("--x-cap", dk.x_cap, "scan bound (default: 100 H^-1(1/lambda) + 100)");
  c_dk->add_option("--tol", dk.tol, "certification tolerance for k < 1");

  CounterexampleParams cp;
  int probes = 4;
  auto* c_ce = app.add_subcommand("counterexample", "build G, H = e^G - 1 and check the weak-type oscillation");
  common.format = "json";
  add_common(c_ce, false);
  c_ce->add_option("--x0", cp.x0, "first block scale");
  c_ce->add_option("--n1", cp.n1, "first block harmonic offset");
  c_ce->add_option("--blocks", cp.blocks, "number of blocks");
  c_ce->add_option("--probes", probes, "probes per segment in the property checks");

  auto* c_measure = app.add_subcommand("measure", "inspect a measure");
  c_measure->require_subcommand(1);
  auto* c_show = c_measure->add_subcommand("show", "print a measure in the file format or as JSON");
  add_common(c_show, true);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "hlmax 1.0.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  // counterexample defaults to json; the others to csv unless given
  if (!c_ce->parsed() && c_crit->count("--format") + c_sweep->count("--format") + c_dk->count("--format") +
                                 c_show->count("--format") ==
                             0)
    common.format = c_show->parsed() ? "file" : "csv";

  std::ostringstream buf;
  auto dispatch = [&]() -> int {
    int code = kOk;
    if (c_crit->parsed()) {
      detail::check_format(common, true);
      code = detail::with_measure(common, [&](const auto& mu) { return detail::criterion(mu, common, crit, buf); });
    } else if (c_sweep->parsed()) {
      detail::check_format(common, true);
      code = detail::with_measure(common, [&](const auto& mu) { return detail::sweep(mu, common, sw, buf); });
    } else if (c_dk->parsed()) {
      detail::check_format(common, true);
      code = detail::with_measure(common, [&](const auto& mu) { return detail::delta_k_cmd(mu, common, dk, buf); });
    } else if (c_ce->parsed()) {
      detail::check_format(common, false);
      const auto run = run_counterexample(cp, probes, common.seed);
      buf << run.report.dump(1) << '\n';
      code = run.passed ? kOk : kUncertified;
    } else if (c_show->parsed()) {
      detail::check_format(common, false, true);
      code = detail::with_measure(common, [&](const auto& mu) {
        if (common.format == "file") {
          buf << write_measure(mu);
        } else {
          nlohmann::ordered_json segs = nlohmann::ordered_json::array();
          for (const auto& s : mu.segments())
            segs.push_back({{"t_start", detail::num(s.t_start)}, {"h_base", detail::num(s.h_base)}});
          buf << nlohmann::ordered_json{{"segments", segs},
                                        {"periodic", mu.periodic().has_value()},
                                        {"unbounded", mu.unbounded()}}
                     .dump(2)
              << '\n';
        }
        return kOk;
      });
    }
    return code;
  };
  try {
    int code = kOk;
    try {
      code = dispatch();
    } catch (const RangeError& e) {
      // double overflowed: redo once in 256-bit BigReal, whose exponent range is practically unbounded
      if (common.precision > 0 || c_ce->parsed() || common.measure.rfind("counterexample:", 0) == 0) throw;
      err << "note: " << e.what() << "; recomputing at 256 bits\n";
      buf.str("");
      common.precision = 256;
      code = dispatch();
    }
    detail::emit(common, buf.str(), out);
    return code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const RangeError& e) {
    err << "error: " << e.what() << " (try --precision)\n";
  }
  return kInvalid;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace hlmax::cli
