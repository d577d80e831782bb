#include "corrgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "corrgame/error.hpp"

namespace corrgame {

namespace {

constexpr double kProfileTol = 1e-9;
constexpr double kFormulaTol = 1e-3;

bool is_pure_value(double p) {
  return std::abs(p) <= 1e-12 || std::abs(p - 1.0) <= 1e-12;
}

EquilibriumKind kind_of(const Profile& p) {
  return is_pure_value(p.p_a) && is_pure_value(p.p_b) ? EquilibriumKind::kPure
                                                      : EquilibriumKind::kMixed;
}

bool same_profile(const Profile& x, const Profile& y, double tol) {
  return std::abs(x.p_a - y.p_a) <= tol && std::abs(x.p_b - y.p_b) <= tol;
}

void sort_canonical(std::vector<Equilibrium>& eqs) {
  std::stable_sort(eqs.begin(), eqs.end(), [](const auto& x, const auto& y) {
    if (x.profile.p_a != y.profile.p_a) return x.profile.p_a < y.profile.p_a;
    if (x.profile.p_b != y.profile.p_b) return x.profile.p_b < y.profile.p_b;
    const StrategyAngles none{};
    const auto& ax = x.angles ? *x.angles : none;
    const auto& ay = y.angles ? *y.angles : none;
    if (ax.theta_a != ay.theta_a) return ax.theta_a < ay.theta_a;
    if (ax.theta_b != ay.theta_b) return ax.theta_b < ay.theta_b;
    if (ax.side_a != ay.side_a) return ax.side_a < ay.side_a;
    if (ax.side_b != ay.side_b) return ax.side_b < ay.side_b;
    return static_cast<int>(x.provenance) < static_cast<int>(y.provenance);
  });
}

double approach_coord(double theta, Side side, double approach) {
  return std::clamp((theta + side * approach) / kPi, 0.0, 1.0);
}

Profile oracle_coords(const Equilibrium& eq, double approach) {
  if (!eq.angles) return eq.profile;
  return {approach_coord(eq.angles->theta_a, eq.angles->side_a, approach),
          approach_coord(eq.angles->theta_b, eq.angles->side_b, approach)};
}

// Bimatrix restricted to effective probabilities in [lo, hi]: the identity
// row/column stands for hi, the other for lo.
Bimatrix2x2 restrict_game(const Bimatrix2x2& m, double lo, double hi) {
  Bimatrix2x2::Entries e{};
  const double q[2] = {hi, lo};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      e[i][j] = expected_payoff_classical(m, Probability(q[i]), Probability(q[j]));
    }
  }
  return Bimatrix2x2(e);
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kClassicalGame: return "classical";
    case Regime::kQuantumGame: return "quantum";
    case Regime::kMixtureGame: return "mixture";
  }
  return "unknown";
}

std::string to_string(EquilibriumKind kind) {
  return kind == EquilibriumKind::kPure ? "pure" : "mixed";
}

std::string to_string(Provenance provenance) {
  return provenance == Provenance::kAnalytic ? "analytic" : "oracle";
}

Regime regime_for(const CorrelationModel& model) {
  switch (model.kind()) {
    case ModelKind::kClassical: return Regime::kClassicalGame;
    case ModelKind::kMixture: return Regime::kMixtureGame;
    case ModelKind::kSinglet:
    case ModelKind::kCustom: return Regime::kQuantumGame;
  }
  return Regime::kQuantumGame;
}

PayoffFn bimatrix_payoff_fn(const Bimatrix2x2& m) {
  return [m](double x_a, double x_b) {
    return expected_payoff_classical(m, Probability(x_a), Probability(x_b));
  };
}

PayoffFn angle_payoff_fn(const Bimatrix2x2& m, const GFunction& g,
                         const CorrelationModel& model) {
  return [m, g, model](double x_a, double x_b) {
    return kernel_payoff(m, g, model, Angle(kPi * x_a), Angle(kPi * x_b));
  };
}

EquilibriumReport classical_equilibria(const Bimatrix2x2& m,
                                       const AnalysisOptions& opts) {
  EquilibriumReport report;
  report.game = describe_matrix(m);
  report.regime = Regime::kClassicalGame;
  report.model = "bimatrix";
  const auto payoff = bimatrix_payoff_fn(m);

  auto add = [&](Profile prof, bool weak) {
    Equilibrium eq;
    eq.profile = prof;
    eq.kind = kind_of(prof);
    eq.payoffs = payoff(prof.p_a, prof.p_b);
    eq.provenance = Provenance::kAnalytic;
    eq.weak = weak;
    const auto v = verify_equilibrium(payoff, prof, opts.grid_step, opts.tol);
    eq.verified = v.ok;
    eq.max_gain = v.max_gain;
    report.equilibria.push_back(eq);
  };

  // Index 0 is the identity move, played with probability 1.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double gain_a = m.at(1 - i, j).a - m.at(i, j).a;
      const double gain_b = m.at(i, 1 - j).b - m.at(i, j).b;
      if (gain_a <= 0.0 && gain_b <= 0.0) {
        add({i == 0 ? 1.0 : 0.0, j == 0 ? 1.0 : 0.0},
            gain_a == 0.0 || gain_b == 0.0);
      }
    }
  }

  // Alice's indifference fixes Bob's probability and vice versa.
  const double den_a = m.at(0, 0).a - m.at(0, 1).a - m.at(1, 0).a + m.at(1, 1).a;
  const double num_a = m.at(1, 1).a - m.at(0, 1).a;
  const double den_b = m.at(0, 0).b - m.at(1, 0).b - m.at(0, 1).b + m.at(1, 1).b;
  const double num_b = m.at(1, 1).b - m.at(1, 0).b;
  const bool a_flat = den_a == 0.0 && num_a == 0.0;
  const bool b_flat = den_b == 0.0 && num_b == 0.0;
  if (a_flat || b_flat) {
    report.degenerate = true;
    report.notes.push_back(fmt::format(
        "DegenerateGame: {} indifferent between moves for every opponent "
        "strategy{}",
        a_flat && b_flat ? "both players are" : (a_flat ? "Alice is" : "Bob is"),
        a_flat && b_flat ? "; every profile is an equilibrium" : ""));
  } else if (den_a != 0.0 && den_b != 0.0) {
    const double p_b = num_a / den_a;
    const double p_a = num_b / den_b;
    if (p_a > 0.0 && p_a < 1.0 && p_b > 0.0 && p_b < 1.0) {
      add({p_a, p_b}, false);
    }
  }

  sort_canonical(report.equilibria);
  return report;
}

std::pair<double, double> effective_range(const GFunction& g,
                                          const CorrelationModel& model) {
  double k_lo = -1.0, k_hi = 1.0;
  switch (model.kind()) {
    case ModelKind::kClassical:
    case ModelKind::kSinglet: break;
    case ModelKind::kMixture:
      k_lo = -1.0 / 3.0;
      k_hi = 1.0 / 3.0;
      break;
    case ModelKind::kCustom: {
      k_lo = INFINITY;
      k_hi = -INFINITY;
      constexpr int kSamples = 4096;
      for (int k = 0; k <= kSamples; ++k) {
        const double c = model.kernel(Angle(kPi * k / kSamples));
        k_lo = std::min(k_lo, c);
        k_hi = std::max(k_hi, c);
      }
      break;
    }
  }
  const double x_lo = 0.5 * kPi * (1.0 + k_lo);
  const double x_hi = 0.5 * kPi * (1.0 + k_hi);

  std::vector<double> values{g.eval(x_lo), g.eval(x_hi)};
  double v = 0.0;
  if (x_lo < x_hi) {
    if (g.limit(x_lo, +1, v)) values.push_back(v);
    if (g.limit(x_hi, -1, v)) values.push_back(v);
    for (double b : g.breakpoints()) {
      if (b <= x_lo || b >= x_hi) continue;
      values.push_back(g.eval(b));
      if (g.limit(b, -1, v)) values.push_back(v);
      if (g.limit(b, +1, v)) values.push_back(v);
    }
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

EquilibriumReport quantum_equilibria(const Bimatrix2x2& m, const GFunction& g,
                                     const CorrelationModel& model,
                                     const AnalysisOptions& opts) {
  EquilibriumReport report;
  report.game = describe_matrix(m);
  report.regime = regime_for(model);
  report.g_name = g.name();
  report.model = model.name();

  const auto [lo, hi] = effective_range(g, model);
  if (hi - lo < 1e-12) {
    report.degenerate = true;
    report.notes.push_back(fmt::format(
        "DegenerateGame: the effective probability is constant ({}) for every "
        "angle; every profile is an equilibrium",
        lo));
    return report;
  }
  const bool full_range = lo == 0.0 && hi == 1.0;
  if (!full_range) {
    report.notes.push_back(fmt::format(
        "effective probabilities limited to [{}, {}]; equilibria solved on the "
        "restricted game",
        lo, hi));
  }
  const Bimatrix2x2 effective = full_range ? m : restrict_game(m, lo, hi);
  const auto classical = classical_equilibria(effective, opts);
  report.degenerate = classical.degenerate;
  report.notes.insert(report.notes.end(), classical.notes.begin(),
                      classical.notes.end());

  const auto inverse = model.angle_inverse();
  const auto payoff = angle_payoff_fn(m, g, model);

  for (const auto& src : classical.equilibria) {
    const Profile target{lo + src.profile.p_a * (hi - lo),
                         lo + src.profile.p_b * (hi - lo)};
    const auto images_a = g.transform_preimage(target.p_a, inverse);
    const auto images_b = g.transform_preimage(target.p_b, inverse);
    if (images_a.empty() || images_b.empty()) {
      report.notes.push_back(fmt::format(
          "MissingEquilibrium: effective profile ({}, {}) has no angle "
          "realising it for {}",
          target.p_a, target.p_b,
          images_a.empty() ? (images_b.empty() ? "either player" : "Alice")
                           : "Bob"));
      report.multiplicity.push_back(0);
      report.angle_multiplicity.push_back(0);
      continue;
    }

    std::vector<Profile> distinct_p;
    std::vector<StrategyAngles> distinct_angles;
    for (const auto& ia : images_a) {
      for (const auto& ib : images_b) {
        Equilibrium eq;
        eq.profile = {ia.p, ib.p};
        eq.kind = kind_of(eq.profile);
        eq.provenance = Provenance::kAnalytic;
        eq.limit_only = ia.limit_only || ib.limit_only;
        eq.weak = src.weak;
        eq.angles = StrategyAngles{ia.theta, ib.theta, ia.side, ib.side};
        eq.source_classical = target;
        eq.shift = std::hypot(eq.profile.p_a - target.p_a,
                              eq.profile.p_b - target.p_b);
        const Profile at = oracle_coords(eq, opts.approach);
        eq.payoffs = payoff(at.p_a, at.p_b);
        const auto v = verify_equilibrium(payoff, at, opts.grid_step, opts.tol);
        eq.verified = v.ok;
        eq.max_gain = v.max_gain;
        if (eq.verified) {
          const bool new_p = std::none_of(
              distinct_p.begin(), distinct_p.end(),
              [&](const auto& p) { return same_profile(p, eq.profile, kProfileTol); });
          if (new_p) distinct_p.push_back(eq.profile);
          if (std::find(distinct_angles.begin(), distinct_angles.end(),
                        *eq.angles) == distinct_angles.end()) {
            distinct_angles.push_back(*eq.angles);
          }
        } else {
          report.notes.push_back(fmt::format(
              "candidate ({}, {}) from effective profile ({}, {}) failed "
              "verification (max unilateral gain {})",
              eq.profile.p_a, eq.profile.p_b, target.p_a, target.p_b,
              eq.max_gain));
        }
        report.equilibria.push_back(eq);
      }
    }
    report.multiplicity.push_back(distinct_p.size());
    report.angle_multiplicity.push_back(distinct_angles.size());
    if (distinct_p.size() > 1) report.bifurcated = true;
  }

  sort_canonical(report.equilibria);
  return report;
}

namespace {

// Runs the grid oracle and reconciles it with the analytic equilibria.
// Clusters without an analytic counterpart become Oracle equilibria; when
// `strict` they are also discrepancies.
void reconcile(EquilibriumReport& report, const PayoffFn& payoff,
               const GFunction* g, bool strict, const AnalysisOptions& opts) {
  report.oracle_run = true;
  report.grid_step = opts.grid_step;
  report.oracle_clusters = best_response_oracle(payoff, opts.grid_step);
  const double match_tol = opts.grid_step + 1e-9;

  std::vector<Profile> analytic_coords;
  for (const auto& eq : report.equilibria) {
    if (eq.provenance != Provenance::kAnalytic || !eq.verified) continue;
    const Profile at = oracle_coords(eq, opts.approach);
    analytic_coords.push_back(at);
    const bool found = std::any_of(
        report.oracle_clusters.begin(), report.oracle_clusters.end(),
        [&](const auto& c) { return same_profile(c.centroid, at, match_tol); });
    if (!found) {
      report.discrepancies.push_back(fmt::format(
          "analytic equilibrium ({}, {}) has no oracle cluster within {}",
          eq.profile.p_a, eq.profile.p_b, match_tol));
    }
  }

  std::vector<Equilibrium> oracle_only;
  for (const auto& c : report.oracle_clusters) {
    const bool matched = std::any_of(
        analytic_coords.begin(), analytic_coords.end(),
        [&](const auto& at) { return same_profile(c.centroid, at, match_tol); });
    if (matched) continue;

    Equilibrium eq;
    eq.provenance = Provenance::kOracle;
    if (g != nullptr) {
      const double ta = kPi * c.centroid.p_a, tb = kPi * c.centroid.p_b;
      eq.angles = StrategyAngles{ta, tb, 0, 0};
      eq.profile = {g->eval(ta), g->eval(tb)};
    } else {
      eq.profile = c.centroid;
    }
    eq.kind = kind_of(eq.profile);
    eq.payoffs = payoff(c.centroid.p_a, c.centroid.p_b);
    const auto v =
        verify_equilibrium(payoff, c.centroid, opts.grid_step, opts.tol);
    eq.verified = v.ok;
    eq.max_gain = v.max_gain;
    // A cluster failing the deviation scan is a grid artifact, typically a
    // best-response jump at a discontinuity; it is logged but not listed.
    if (eq.verified) oracle_only.push_back(eq);
    const std::string msg = fmt::format(
        "oracle cluster at ({}, {}) (radius {}, {} points) has no analytic "
        "counterpart{}",
        c.centroid.p_a, c.centroid.p_b, c.radius, c.points,
        eq.verified ? ""
                    : fmt::format("; fails the deviation scan (gain {}), "
                                  "treated as a grid artifact",
                                  eq.max_gain));
    if (strict) {
      report.discrepancies.push_back(msg);
    } else {
      report.notes.push_back(msg);
    }
  }
  report.equilibria.insert(report.equilibria.end(), oracle_only.begin(),
                           oracle_only.end());
  sort_canonical(report.equilibria);
}

}  // namespace

EquilibriumReport analyze_classical(const Bimatrix2x2& m,
                                    const AnalysisOptions& opts) {
  auto report = classical_equilibria(m, opts);
  if (!report.degenerate) {
    reconcile(report, bimatrix_payoff_fn(m), nullptr, true, opts);
  }
  return report;
}

EquilibriumReport analyze_correlation(const Bimatrix2x2& m, const GFunction& g,
                                      const CorrelationModel& model,
                                      const AnalysisOptions& opts) {
  auto report = quantum_equilibria(m, g, model, opts);
  if (report.degenerate) return report;
  const bool strict = g.traits().invertible && g.traits().continuous &&
                      model.kind() != ModelKind::kCustom;
  reconcile(report, angle_payoff_fn(m, g, model), &g, strict, opts);

  // For g1 the quantum image of a classical mixed equilibrium has two
  // candidate closed forms in circulation; log both against the oracle.
  if (g.name() == "g1" && model.kind() == ModelKind::kSinglet) {
    const auto classical = classical_equilibria(m, opts);
    for (const auto& src : classical.equilibria) {
      if (src.kind != EquilibriumKind::kMixed) continue;
      const Equilibrium* image = nullptr;
      for (const auto& eq : report.equilibria) {
        if (eq.provenance == Provenance::kAnalytic && eq.verified &&
            eq.source_classical &&
            same_profile(*eq.source_classical, src.profile, 1e-12)) {
          image = &eq;
          break;
        }
      }
      std::optional<Profile> oracle;
      if (image != nullptr) {
        const Profile at = oracle_coords(*image, opts.approach);
        for (const auto& c : report.oracle_clusters) {
          if (same_profile(c.centroid, at, opts.grid_step + 1e-9)) {
            oracle = Profile{g.eval(kPi * c.centroid.p_a),
                             g.eval(kPi * c.centroid.p_b)};
            break;
          }
        }
      }
      for (int player = 0; player < 2; ++player) {
        FormulaCheck fc;
        fc.player = player == 0 ? "alice" : "bob";
        fc.classical = player == 0 ? src.profile.p_a : src.profile.p_b;
        fc.general_transform = std::acos(1.0 - 2.0 * fc.classical) / kPi;
        fc.text_formula = 1.0 - std::acos(fc.classical) / kPi;
        if (oracle) {
          fc.oracle = player == 0 ? oracle->p_a : oracle->p_b;
          const bool general =
              std::abs(fc.general_transform - *fc.oracle) <= kFormulaTol;
          const bool text = std::abs(fc.text_formula - *fc.oracle) <= kFormulaTol;
          fc.agrees_with = general && text ? "both"
                           : general       ? "general_transform"
                           : text          ? "text_formula"
                                           : "neither";
        } else {
          fc.agrees_with = "unverified";
        }
        report.formula_checks.push_back(fc);
      }
    }
  }
  return report;
}

}  // namespace corrgame
