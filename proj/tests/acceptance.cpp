// Acceptance harness: one PASS/FAIL line per criterion, exit 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "commands.hpp"
#include "corrgame/arbiter.hpp"
#include "corrgame/equilibrium.hpp"
#include "corrgame/game.hpp"

using namespace corrgame;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const Bimatrix2x2 kPD = Bimatrix2x2::symmetric(3, 0, 5, 1);
const Bimatrix2x2 kBoS = Bimatrix2x2::battle_of_sexes(2, 1, 0);

GFunction g3(double delta, double epsilon) {
  return make_catalog("g3", {{"delta", delta}, {"epsilon", epsilon}});
}

GameSpec spec_for(const Bimatrix2x2& m, GFunction g, CorrelationModel model) {
  GameSpec s{m, std::move(g), std::move(model)};
  return s;
}

Profile oracle_point(const Equilibrium& e, double approach) {
  if (!e.angles) return e.profile;
  auto coord = [&](double theta, Side side) {
    return std::clamp((theta + side * approach) / kPi, 0.0, 1.0);
  };
  return {coord(e.angles->theta_a, e.angles->side_a),
          coord(e.angles->theta_b, e.angles->side_b)};
}

bool oracle_confirms(const EquilibriumReport& r, const Equilibrium& e, double approach) {
  const auto x = oracle_point(e, approach);
  return std::any_of(r.oracle_clusters.begin(), r.oracle_clusters.end(), [&](const auto& c) {
    return std::abs(c.centroid.p_a - x.p_a) <= r.grid_step + 1e-9 &&
           std::abs(c.centroid.p_b - x.p_b) <= r.grid_step + 1e-9;
  });
}

const Equilibrium* find_profile(const EquilibriumReport& r, double a, double b, double tol) {
  for (const auto& e : r.equilibria) {
    if (std::abs(e.profile.p_a - a) <= tol && std::abs(e.profile.p_b - b) <= tol) return &e;
  }
  return nullptr;
}

Outcome five_ninths() {
  const AnalysisOptions opts;
  const auto r = analyze_correlation(kPD, g3(0.5, kPi / 4), CorrelationModel::singlet(), opts);
  const auto* e = find_profile(r, 5.0 / 9, 5.0 / 9, 1e-12);
  if (!e) return {false, "no equilibrium within 1e-12 of (5/9, 5/9)"};
  const bool ok = e->kind == EquilibriumKind::kMixed && e->verified &&
                  e->max_gain <= 1e-9 && oracle_confirms(r, *e, opts.approach);
  return {ok, fmt::format("p = ({:.15f}, {:.15f}), max gain {:.3e}, oracle cluster {}",
                          e->profile.p_a, e->profile.p_b, e->max_gain,
                          oracle_confirms(r, *e, opts.approach) ? "found" : "missing")};
}

Outcome g1_invariance() {
  const auto c = classical_equilibria(kPD);
  const auto q = quantum_equilibria(kPD, make_catalog("g1"));
  if (q.equilibria.size() != 1 || c.equilibria.size() != 1) {
    return {false, fmt::format("{} quantum vs {} classical equilibria", q.equilibria.size(),
                               c.equilibria.size())};
  }
  const auto& p = q.equilibria[0].profile;
  const bool ok = std::abs(p.p_a) <= 1e-12 && std::abs(p.p_b) <= 1e-12 &&
                  std::abs(p.p_a - c.equilibria[0].profile.p_a) <= 1e-12 &&
                  std::abs(p.p_b - c.equilibria[0].profile.p_b) <= 1e-12 &&
                  q.equilibria[0].verified;
  return {ok, fmt::format("unique equilibrium ({}, {})", p.p_a, p.p_b)};
}

Outcome g4_cooperation() {
  const AnalysisOptions opts;
  const auto r = analyze_correlation(kPD, make_catalog("g4", {{"delta", 0.3}}),
                                     CorrelationModel::singlet(), opts);
  const auto* e = find_profile(r, 1, 1, 1e-12);
  if (!e) return {false, "no (1,1) candidate in the report"};
  const bool payoff = std::abs(e->payoffs.a - 3) <= 1e-9 && std::abs(e->payoffs.b - 3) <= 1e-9;
  const bool oracle = oracle_confirms(r, *e, opts.approach);
  const bool ok = payoff && e->verified && oracle && e->payoffs.a > 1.0;
  return {ok, fmt::format("(1,1) payoff ({:.6f}, {:.6f}), limit_only {}, verified {}, "
                          "max gain {:.6f}, oracle cluster at these angles {}",
                          e->payoffs.a, e->payoffs.b, e->limit_only, e->verified,
                          e->max_gain, oracle ? "found" : "missing")};
}

double branch_formula(double delta, double eps) {
  const double a = std::acos(1 - 2 * eps / kPi);
  if (eps <= kPi / 2) return delta + (1 - delta) / (kPi - eps) * (a - eps);
  return delta * (1 - a / eps);
}

Outcome branch_formula_check() {
  const AnalysisOptions opts;
  double worst_formula = 0.0;
  int bad = 0;
  for (int k = 1; k <= 20; ++k) {
    const double eps = k * kPi / 21;
    const auto r = analyze_correlation(kPD, g3(0.5, eps), CorrelationModel::singlet(), opts);
    const double expect = branch_formula(0.5, eps);
    const Equilibrium* hit = nullptr;
    for (const auto& e : r.equilibria) {
      if (e.verified && e.provenance == Provenance::kAnalytic) hit = &e;
    }
    if (!hit) {
      ++bad;
      continue;
    }
    const double err = std::max(std::abs(hit->profile.p_a - expect),
                                std::abs(hit->profile.p_b - expect));
    worst_formula = std::max(worst_formula, err);
    if (err > 1e-9 || !oracle_confirms(r, *hit, opts.approach) || !r.discrepancies.empty()) {
      ++bad;
    }
  }
  return {bad == 0, fmt::format("20 values of epsilon, worst formula error {:.2e}, "
                                "{} failing", worst_formula, bad)};
}

Outcome bifurcation() {
  const auto g8 = make_catalog("g8");
  const auto q = analyze_correlation(kBoS, g8, CorrelationModel::singlet());
  const auto c = analyze_correlation(kBoS, g8, CorrelationModel::classical());
  auto mixed_images = [](const EquilibriumReport& r) {
    std::vector<Profile> out;
    for (const auto& e : r.equilibria) {
      if (!e.verified || !e.source_classical) continue;
      const auto& s = *e.source_classical;
      if (s.p_a <= 0 || s.p_a >= 1) continue;
      const bool seen = std::any_of(out.begin(), out.end(), [&](const Profile& p) {
        return std::abs(p.p_a - e.profile.p_a) <= 1e-9 &&
               std::abs(p.p_b - e.profile.p_b) <= 1e-9;
      });
      if (!seen) out.push_back(e.profile);
    }
    return out;
  };
  const auto qi = mixed_images(q);
  const auto ci = mixed_images(c);
  const bool quantum_ok = q.bifurcated && qi.size() >= 2;
  const bool classical_ok = !c.bifurcated;
  std::string where;
  for (const auto& p : qi) where += fmt::format(" ({:.5f}, {:.5f})", p.p_a, p.p_b);
  std::size_t angles = 0;
  for (auto k : q.angle_multiplicity) angles = std::max(angles, k);
  return {quantum_ok && classical_ok,
          fmt::format("singlet: {} distinct image(s){} from {} angle profile(s), "
                      "bifurcated {} [{}]; classical: {} image(s), bifurcated {} [{}]",
                      qi.size(), where, angles, q.bifurcated, quantum_ok ? "ok" : "FAIL",
                      ci.size(), c.bifurcated, classical_ok ? "ok" : "FAIL")};
}

Outcome classical_reduction() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<std::string> names = {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& name = names[trial % names.size()];
    GParams p;
    if (name >= "g3" && name <= "g7") p["delta"] = 0.05 + 0.9 * unit(rng);
    if (name == "g3" || name == "g6" || name == "g7") p["epsilon"] = 0.1 + (kPi - 0.2) * unit(rng);
    const auto g = make_catalog(name, p);
    const auto& m = trial % 2 ? kBoS : kPD;
    const Angle ta(kPi * unit(rng)), tb(kPi * unit(rng));
    const auto got = classical_payoff(spec_for(m, g, CorrelationModel::classical()), ta, tb);
    const auto want = expected_payoff_classical(m, g.eval(ta), g.eval(tb));
    worst = std::max({worst, std::abs(got.a - want.a), std::abs(got.b - want.b)});
  }
  return {worst <= 1e-12, fmt::format("100 random (g, theta_A, theta_B), worst error {:.2e}",
                                      worst)};
}

Outcome kernel_convergence() {
  int checks = 0, bad = 0;
  double worst_z = 0.0;
  std::uint64_t seed = 7000;
  for (const auto& model : {CorrelationModel::classical(), CorrelationModel::singlet(),
                            CorrelationModel::mixture()}) {
    const auto spec = spec_for(kPD, make_catalog("g1"), model);
    for (int k = 1; k <= 7; ++k) {
      const Angle theta(k * kPi / 8);
      const auto log = play_runs(spec, theta, theta, 1000000, ++seed);
      const auto c = estimate_correlations(log);
      for (const auto* est : {&c.ac, &c.cb}) {
        ++checks;
        if (!est->value) {
          ++bad;
          continue;
        }
        const double z = std::abs(*est->value - model.kernel(theta)) / est->std_error;
        worst_z = std::max(worst_z, z);
        if (z > 4) ++bad;
      }
    }
  }
  return {bad == 0, fmt::format("{} estimates at N=1e6, worst |z| {:.2f}, {} beyond 4 SE",
                                checks, worst_z, bad)};
}

Outcome mixture_shift() {
  const AnalysisOptions opts;
  const auto r = analyze_correlation(kPD, g3(0.5, kPi / 4), CorrelationModel::mixture(), opts);
  const Equilibrium* best = nullptr;
  for (const auto& e : r.equilibria) {
    if (e.verified && oracle_confirms(r, e, opts.approach)) best = &e;
  }
  if (!best) return {false, "no oracle-confirmed equilibrium"};
  const double shift = std::max(best->profile.p_a, best->profile.p_b);
  return {shift > 0.01 && r.discrepancies.empty(),
          fmt::format("equilibrium ({:.6f}, {:.6f}), payoff ({:.6f}, {:.6f}), shift {:.4f}",
                      best->profile.p_a, best->profile.p_b, best->payoffs.a, best->payoffs.b,
                      shift)};
}

Outcome settlement_blindness() {
  const auto g = g3(0.5, kPi / 4);
  const auto singlet = spec_for(kPD, g, CorrelationModel::singlet());
  const auto classical = spec_for(kPD, g, CorrelationModel::classical());
  const auto log = play_runs(singlet, Angle(1.2), Angle(2.1), 200000, 99);
  auto relabelled = log;
  relabelled.meta.model = "classical";
  std::ostringstream a, b;
  write_jsonl(a, log);
  write_jsonl(b, relabelled);
  const bool same_records = log.records == relabelled.records;
  const auto x = settle(log, singlet);
  const auto y = settle(relabelled, classical);
  return {same_records && x == y && a.str() != b.str(),
          fmt::format("payoffs ({}, {}) vs ({}, {})", x.payoffs.a, x.payoffs.b, y.payoffs.a,
                      y.payoffs.b)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "corrgame_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto cfg = root / "config.json";
  std::ofstream(cfg) << R"({"gfunction":{"name":"g3","params":{"delta":0.5,"epsilon":"pi:0.25"}},)"
                        R"("simulation":{"n":20000,"seed":314,"theta_a":1.1,"theta_b":1.9}})";
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = (root / std::to_string(i)).string();
    const std::string cfg_s = cfg.string();
    const char* argv[] = {"corrgame", "--config", cfg_s.c_str(), "--out", out.c_str(),
                          "simulate"};
    std::ostringstream sink, err;
    codes[i] = cli::run_cli(6, argv, sink, err);
  }
  const bool logs = slurp(root / "0" / "runs.jsonl") == slurp(root / "1" / "runs.jsonl");
  const bool results = slurp(root / "0" / "result.json") == slurp(root / "1" / "result.json");
  const auto size = fs::exists(root / "0" / "runs.jsonl") ? fs::file_size(root / "0" / "runs.jsonl") : 0;
  fs::remove_all(root);
  return {codes[0] == 0 && codes[1] == 0 && logs && results && size > 0,
          fmt::format("exit codes {}/{}, runs.jsonl ({} bytes) identical {}, result.json "
                      "identical {}",
                      codes[0], codes[1], size, logs, results)};
}

Outcome text_discrepancy() {
  const auto r = analyze_correlation(kBoS, make_catalog("g1"), CorrelationModel::singlet());
  if (r.formula_checks.size() != 2) return {false, "formula checks missing"};
  bool ok = true;
  std::string detail;
  for (const auto& f : r.formula_checks) {
    const bool gen = f.oracle && std::abs(*f.oracle - f.general_transform) <= 1e-3;
    const bool text = f.oracle && std::abs(*f.oracle - f.text_formula) <= 1e-3;
    ok = ok && (gen != text) &&
         f.agrees_with == (gen ? "general_transform" : "text_formula");
    detail += fmt::format("{}: general {:.5f}, text {:.5f}, oracle {:.5f} -> {}; ", f.player,
                          f.general_transform, f.text_formula, f.oracle.value_or(NAN),
                          f.agrees_with);
  }
  if (!detail.empty()) detail.resize(detail.size() - 2);
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"5/9 mixed equilibrium (PD, g3, singlet)", five_ninths},
      {"g1 leaves the PD solution unchanged", g1_invariance},
      {"(C,C) equilibrium via g4", g4_cooperation},
      {"two-branch equilibrium formula over epsilon", branch_formula_check},
      {"bifurcation with g8 in BoS", bifurcation},
      {"classical reduction of correlation payoffs", classical_reduction},
      {"Monte Carlo kernel convergence", kernel_convergence},
      {"mixture kernel shifts the g3 equilibrium", mixture_shift},
      {"settlement blind to model metadata", settlement_blindness},
      {"simulate output is byte-identical", determinism},
      {"BoS g1 formula discrepancy surfaced", text_discrepancy},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    if (!o.pass) ++failed;
    fmt::print("{} {:>2} {}: {} ({:.0f} ms)\n", o.pass ? "PASS" : "FAIL", i + 1,
               criteria[i].first, o.detail, ms);
  }
  fmt::print("{} of {} criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
