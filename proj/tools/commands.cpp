#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "corrgame/arbiter.hpp"

namespace corrgame::cli {

namespace fs = std::filesystem;

namespace {

CorrelationModel regime_model(const std::string& regime) {
  if (regime == "classical") return CorrelationModel::classical();
  if (regime == "mixture") return CorrelationModel::mixture();
  return CorrelationModel::singlet();
}

// Distinct verified probability profiles sharing e's classical source.
std::size_t bifurcation_count(const EquilibriumReport& r, const Equilibrium& e) {
  if (!e.source_classical) return 1;
  std::vector<Profile> seen;
  for (const auto& other : r.equilibria) {
    if (!other.verified || other.source_classical != e.source_classical) continue;
    const bool dup = std::any_of(seen.begin(), seen.end(), [&](const Profile& p) {
      return std::abs(p.p_a - other.profile.p_a) <= 1e-9 &&
             std::abs(p.p_b - other.profile.p_b) <= 1e-9;
    });
    if (!dup) seen.push_back(other.profile);
  }
  return std::max<std::size_t>(1, seen.size());
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw ConfigError("--out", fmt::format("cannot write '{}'", path.string()));
  }
  f << text;
}

std::string num(double v) { return fmt::format("{}", v); }

void print_report(std::ostream& out, const EquilibriumReport& r) {
  out << fmt::format("[{}] {}  g={}  model={}{}{}\n", to_string(r.regime),
                     r.game, r.g_name.empty() ? "-" : r.g_name, r.model,
                     r.bifurcated ? "  BIFURCATED" : "",
                     r.degenerate ? "  DEGENERATE" : "");
  out << fmt::format("  {:<5} {:<9} {:>12} {:>12} {:>10} {:>10} {:>9} {:>9} "
                     "{:<24} {:>8}\n",
                     "kind", "source", "p_A", "p_B", "P_A", "P_B", "verified",
                     "limit", "classical source", "shift");
  for (const auto& e : r.equilibria) {
    const std::string src =
        e.source_classical ? fmt::format("({:.6g}, {:.6g})", e.source_classical->p_a,
                                         e.source_classical->p_b)
                           : "-";
    out << fmt::format("  {:<5} {:<9} {:>12.8f} {:>12.8f} {:>10.5f} {:>10.5f} "
                       "{:>9} {:>9} {:<24} {:>8.5f}\n",
                       to_string(e.kind), to_string(e.provenance), e.profile.p_a,
                       e.profile.p_b, e.payoffs.a, e.payoffs.b,
                       e.verified ? "yes" : "NO", e.limit_only ? "yes" : "no",
                       src, e.shift);
  }
  for (const auto& n : r.notes) out << "  note: " << n << '\n';
  for (const auto& d : r.discrepancies) out << "  DISCREPANCY: " << d << '\n';
  for (const auto& f : r.formula_checks) {
    out << fmt::format(
        "  formula check ({}): classical {:.6f} -> general transform {:.6f}, "
        "text formula {:.6f}, oracle {}; agrees with {}\n",
        f.player, f.classical, f.general_transform, f.text_formula,
        f.oracle ? fmt::format("{:.6f}", *f.oracle) : "n/a", f.agrees_with);
  }
}

Config apply_overrides(Config c, const std::optional<std::uint64_t>& seed,
                       const std::optional<std::string>& out_dir,
                       const std::optional<double>& tol,
                       const std::optional<double>& grid) {
  if (seed) c.simulation.seed = *seed;
  if (out_dir) c.out_dir = *out_dir;
  if (tol) {
    if (!(*tol >= 0.0)) throw ConfigError("--tol", "must be >= 0");
    c.analysis.tol = *tol;
  }
  if (grid) {
    if (!(*grid > 0.0 && *grid <= 0.05)) {
      throw ConfigError("--grid", "must lie in (0, 0.05]");
    }
    c.analysis.grid_step = *grid;
  }
  return c;
}

void print_error(std::ostream& err, const std::string& code,
                 const std::string& message, const std::string& field = {},
                 const Json& details = nullptr) {
  Json e = Json::object();
  e["code"] = code;
  if (!field.empty()) e["field"] = field;
  e["message"] = message;
  if (!details.is_null()) e["details"] = details;
  err << Json{{"error", e}}.dump() << '\n';
}

int cmd_analyze(const Config& c, std::ostream& out, std::ostream& err) {
  const auto reports = analyze_reports(c);
  Json doc = Json::object();
  doc["reports"] = reports;
  write_file(fs::path(c.out_dir) / "report.json", doc.dump(2) + "\n");
  Json discrepancies = Json::array();
  for (const auto& r : reports) {
    print_report(out, r);
    for (const auto& d : r.discrepancies) {
      discrepancies.push_back({{"regime", to_string(r.regime)}, {"detail", d}});
    }
  }
  if (!discrepancies.empty()) {
    print_error(err, "internal_discrepancy",
                "analytic and oracle equilibria disagree", {}, discrepancies);
    return kExitDiscrepancy;
  }
  return kExitOk;
}

int cmd_simulate(const Config& c, std::ostream& out, std::ostream& err) {
  const auto spec = build_spec(c);
  const Angle ta(c.simulation.theta_a), tb(c.simulation.theta_b);
  const auto log =
      play_runs(spec, ta, tb, c.simulation.n, c.simulation.seed, c.simulation.threads);
  {
    std::ostringstream s;
    write_jsonl(s, log);
    write_file(fs::path(c.out_dir) / "runs.jsonl", s.str());
  }

  const double p_a = spec.g.eval(ta).value(), p_b = spec.g.eval(tb).value();
  const double k_a = spec.model.kernel(ta), k_b = spec.model.kernel(tb);
  const auto analytic = kernel_payoff(spec.matrix, spec.g, spec.model, ta, tb);

  SimulationResult res;
  try {
    res = settle(log, spec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedCorrelation) throw;
    print_error(err, "undefined_correlation", e.what(), "simulation");
    return kExitUndefinedCorrelation;
  }

  Json doc = Json::object();
  doc["meta"] = {{"spec_hash", log.meta.spec_hash},
                 {"game", spec.describe()},
                 {"g", spec.g.name()},
                 {"model", log.meta.model},
                 {"theta_a", log.meta.theta_a},
                 {"theta_b", log.meta.theta_b},
                 {"seed", log.meta.seed},
                 {"n", log.meta.n}};
  doc["result"] = res;
  doc["analytic"] = {{"p_a", p_a},
                     {"p_b", p_b},
                     {"kernel_ac", k_a},
                     {"kernel_cb", k_b},
                     {"payoffs", analytic}};
  write_file(fs::path(c.out_dir) / "result.json", doc.dump(2) + "\n");

  auto row = [&](const char* name, double est, double se, double exact) {
    out << fmt::format("  {:<6} {:>12.6f} {:>10.6f} {:>12.6f} {:>8.2f}\n", name,
                       est, se, exact, se > 0 ? (est - exact) / se : 0.0);
  };
  out << fmt::format("{}  g={}  model={}  N={}  seed={}\n", spec.describe(),
                     spec.g.name(), spec.model.name(), c.simulation.n,
                     c.simulation.seed);
  out << fmt::format("  {:<6} {:>12} {:>10} {:>12} {:>8}\n", "", "estimate",
                     "std.err", "analytic", "z");
  const double n = static_cast<double>(c.simulation.n);
  row("p_A", res.p_a, std::sqrt(p_a * (1 - p_a) / n), p_a);
  row("p_B", res.p_b, std::sqrt(p_b * (1 - p_b) / n), p_b);
  row("<ac>", *res.correlations.ac.value, res.correlations.ac.std_error, k_a);
  row("<cb>", *res.correlations.cb.value, res.correlations.cb.std_error, k_b);
  row("P_A", res.payoffs.a, res.payoff_std_error.a, analytic.a);
  row("P_B", res.payoffs.b, res.payoff_std_error.b, analytic.b);
  return kExitOk;
}

int cmd_sweep(const Config& c, std::ostream& out, std::ostream& err) {
  if (!c.sweep) throw ConfigError("sweep", "missing sweep block");
  bool discrepancy = false;
  const auto csv = sweep_csv(c, &discrepancy);
  write_file(fs::path(c.out_dir) / "sweep.csv", csv);
  out << csv;
  if (discrepancy) {
    print_error(err, "internal_discrepancy",
                "analytic and oracle equilibria disagree at some sweep point");
    return kExitDiscrepancy;
  }
  return kExitOk;
}

int cmd_gfn(const Config& c, std::ostream& out) {
  const auto spec = build_spec(c);
  const auto csv = gfn_csv(spec.g, c.gfn_resolution);
  write_file(fs::path(c.out_dir) / "gfn.csv", csv);
  out << csv;
  return kExitOk;
}

int cmd_catalog(std::ostream& out) {
  Json doc = Json::object();
  doc["presets"] = Json::array(
      {{{"name", "PD"},
        {"params", {"r", "s", "t", "u"}},
        {"constraint", "s < u < r < t"},
        {"matrix", "(r,r) (s,t) / (t,s) (u,u)"}},
       {{"name", "BoS"},
        {"params", {"alpha", "beta", "gamma"}},
        {"constraint", "alpha > beta > gamma"},
        {"matrix", "(alpha,beta) (gamma,gamma) / (gamma,gamma) (beta,alpha)"}}});
  doc["gfunctions"] = Json::array();
  for (const auto& e : catalog_entries()) {
    doc["gfunctions"].push_back(
        {{"name", e.name}, {"params", e.params}, {"formula", e.formula}});
  }
  doc["models"] = {"classical", "singlet", "mixture"};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<std::string> default_regimes(const Config& c) {
  std::vector<std::string> r = {"classical", "quantum"};
  if (c.model == "mixture") r.push_back("mixture");
  return r;
}

EquilibriumReport analyze_regime(const GameSpec& spec, const std::string& regime,
                                 const AnalysisOptions& opts, bool oracle) {
  const auto model = regime_model(regime);
  if (oracle) return analyze_correlation(spec.matrix, spec.g, model, opts);
  return quantum_equilibria(spec.matrix, spec.g, model, opts);
}

std::vector<EquilibriumReport> analyze_reports(const Config& c) {
  const auto spec = build_spec(c);
  std::vector<EquilibriumReport> out;
  for (const auto& regime : c.regimes.empty() ? default_regimes(c) : c.regimes) {
    auto r = analyze_regime(spec, regime, c.analysis);
    r.game = spec.describe();
    out.push_back(std::move(r));
  }
  return out;
}

std::string gfn_csv(const GFunction& g, std::size_t resolution) {
  if (resolution < 2) throw ConfigError("gfn.resolution", "must be >= 2");
  std::vector<double> thetas;
  for (std::size_t k = 0; k < resolution; ++k) {
    thetas.push_back(k + 1 == resolution ? kPi : kPi * k / (resolution - 1));
  }
  // Jumps of g itself and of q(theta) = g(pi (1 - cos theta) / 2).
  std::vector<double> jumps = g.traits().discontinuities;
  for (double b : g.traits().discontinuities) {
    jumps.push_back(std::acos(1.0 - 2.0 * b / kPi));
  }
  for (double b : g.breakpoints()) thetas.push_back(b);
  thetas.insert(thetas.end(), jumps.begin(), jumps.end());
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

  std::string csv = "theta,g,q_angle\n";
  for (double t : thetas) {
    const bool jump = std::find(jumps.begin(), jumps.end(), t) != jumps.end();
    if (!jump) {
      csv += fmt::format("{},{},{}\n", t, g.eval(t),
                         g.q_transform_angle(Angle(t)).value());
      continue;
    }
    for (Side side : {-1, +1}) {
      double v = 0.0;
      if (!g.limit(t, side, v)) v = g.eval(t);
      csv += fmt::format("{},{},{}\n", t, v, g.q_transform_angle_limit(t, side));
    }
  }
  return csv;
}

std::string sweep_csv(const Config& c, bool* discrepancy) {
  const auto& sw = *c.sweep;
  std::string csv = std::string(kSweepHeader) + "\n";
  if (discrepancy) *discrepancy = false;
  for (std::size_t k = 0; k < sw.steps; ++k) {
    const double value =
        sw.steps == 1 ? sw.from
                      : (k + 1 == sw.steps ? sw.to
                                           : sw.from + (sw.to - sw.from) * k /
                                                           (sw.steps - 1));
    const Config point = with_parameter(c, sw.parameter, value);
    GameSpec spec = [&] {
      try {
        return build_spec(point);
      } catch (const ConfigError& e) {
        throw ConfigError("sweep", fmt::format("invalid range: at {} = {}: {}",
                                               sw.parameter, value, e.what()));
      }
    }();
    const auto r = analyze_regime(spec, sw.regime, c.analysis, sw.oracle);
    if (discrepancy && !r.discrepancies.empty()) *discrepancy = true;
    if (r.equilibria.empty()) {
      csv += fmt::format("{},{},{},,none,,,,,,,,,0\n", sw.parameter, value,
                         sw.regime);
    }
    for (std::size_t i = 0; i < r.equilibria.size(); ++i) {
      const auto& e = r.equilibria[i];
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                         sw.parameter, value, sw.regime, i, to_string(e.kind),
                         num(e.profile.p_a), num(e.profile.p_b), num(e.payoffs.a),
                         num(e.payoffs.b), to_string(e.provenance), e.verified,
                         e.limit_only, e.weak, bifurcation_count(r, e));
    }
  }
  return csv;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Nash equilibria, simulation and sweeps for 2x2 correlation games"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol, grid;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed for simulate");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tol, "equilibrium verification tolerance");
  app.add_option("--grid", grid, "oracle grid step");

  auto* analyze = app.add_subcommand("analyze", "classical and correlation-game equilibria");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo play and settlement");
  auto* sweep = app.add_subcommand("sweep", "equilibria across a parameter range");
  auto* gfn = app.add_subcommand("gfn", "sample g and its singlet transform");
  std::string gfn_action = "sample";
  std::optional<std::size_t> resolution;
  gfn->add_option("action", gfn_action, "only 'sample'")
      ->check(CLI::IsMember({"sample"}));
  gfn->add_option("--resolution", resolution, "uniform samples over [0, pi]");
  auto* catalog = app.add_subcommand("catalog", "list presets and g-functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage_error", e.what());
    return kExitConfig;
  }

  try {
    if (catalog->parsed()) return cmd_catalog(out);
    Config c = config_path.empty() ? parse_config(Json::object())
                                   : load_config(config_path);
    c = apply_overrides(std::move(c), seed, out_dir, tol, grid);
    if (resolution) {
      if (*resolution < 2) throw ConfigError("--resolution", "must be >= 2");
      c.gfn_resolution = *resolution;
    }
    if (analyze->parsed()) return cmd_analyze(c, out, err);
    if (simulate->parsed()) return cmd_simulate(c, out, err);
    if (sweep->parsed()) return cmd_sweep(c, out, err);
    if (gfn->parsed()) return cmd_gfn(c, out);
  } catch (const ConfigError& e) {
    print_error(err, "config_error", e.what(), e.field());
    return kExitConfig;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUndefinedCorrelation) {
      print_error(err, "undefined_correlation", e.what());
      return kExitUndefinedCorrelation;
    }
    print_error(err, std::string(error_code_name(e.code())), e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    print_error(err, "internal_error", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace corrgame::cli
