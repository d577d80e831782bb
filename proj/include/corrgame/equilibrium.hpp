#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "corrgame/corrmodel.hpp"
#include "corrgame/game.hpp"
#include "corrgame/gfn.hpp"

namespace corrgame {

struct Profile {
  double p_a = 0.0;
  double p_b = 0.0;

  friend bool operator==(const Profile&, const Profile&) = default;
};

enum class EquilibriumKind { kPure, kMixed };
enum class Provenance { kAnalytic, kOracle };
enum class Regime { kClassicalGame, kQuantumGame, kMixtureGame };

// Directions realising a correlation-game equilibrium. A nonzero side marks
// a one-sided approach to the angle rather than the angle itself.
struct StrategyAngles {
  double theta_a = 0.0;
  double theta_b = 0.0;
  Side side_a = 0;
  Side side_b = 0;

  friend bool operator==(const StrategyAngles&, const StrategyAngles&) = default;
};

struct Equilibrium {
  Profile profile;
  EquilibriumKind kind = EquilibriumKind::kPure;
  PayoffPair payoffs;
  Provenance provenance = Provenance::kAnalytic;
  bool limit_only = false;
  bool weak = false;
  bool verified = false;
  double max_gain = 0.0;
  // Effective (classical) profile this equilibrium was obtained from.
  std::optional<Profile> source_classical;
  std::optional<StrategyAngles> angles;
  double shift = 0.0;

  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

struct OracleCluster {
  Profile centroid;  // in oracle coordinates
  double radius = 0.0;
  std::size_t points = 0;

  friend bool operator==(const OracleCluster&, const OracleCluster&) = default;
};

// Side-by-side predictions for one player's quantum image of a classical
// mixed equilibrium under g1.
struct FormulaCheck {
  std::string player;
  double classical = 0.0;
  double general_transform = 0.0;
  double text_formula = 0.0;
  std::optional<double> oracle;
  std::string agrees_with;

  friend bool operator==(const FormulaCheck&, const FormulaCheck&) = default;
};

struct EquilibriumReport {
  std::string game;
  Regime regime = Regime::kClassicalGame;
  std::string g_name;
  std::string model;
  std::vector<Equilibrium> equilibria;
  bool bifurcated = false;
  bool degenerate = false;
  // Distinct verified probability images per source equilibrium, and the
  // number of distinct verified angle profiles behind them.
  std::vector<std::size_t> multiplicity;
  std::vector<std::size_t> angle_multiplicity;
  std::vector<std::string> notes;

  bool oracle_run = false;
  double grid_step = 0.0;
  std::vector<OracleCluster> oracle_clusters;
  std::vector<std::string> discrepancies;
  std::vector<FormulaCheck> formula_checks;

  friend bool operator==(const EquilibriumReport&,
                         const EquilibriumReport&) = default;
};

struct AnalysisOptions {
  double tol = 1e-9;
  double grid_step = 1e-3;
  // Offset used to evaluate one-sided (limit-only) strategies.
  double approach = 1e-11;
};

// Payoffs over oracle coordinates (x_a, x_b) in [0,1]^2: probabilities for
// the bimatrix, theta / pi for correlation games.
using PayoffFn = std::function<PayoffPair(double x_a, double x_b)>;

PayoffFn bimatrix_payoff_fn(const Bimatrix2x2& m);
PayoffFn angle_payoff_fn(const Bimatrix2x2& m, const GFunction& g,
                         const CorrelationModel& model);

struct Verification {
  bool ok = false;
  double max_gain = 0.0;
};

// Unilateral deviation scan on a uniform grid of step grid_step (plus both
// endpoints and the profile itself).
Verification verify_equilibrium(const PayoffFn& payoff, Profile at,
                                double grid_step, double tol);

// Grid best-response oracle. Returns clusters of grid-Nash points, sorted by
// centroid.
std::vector<OracleCluster> best_response_oracle(const PayoffFn& payoff,
                                                double grid_step);

// Pure profiles plus the interior mixed equilibrium of the bimatrix game.
EquilibriumReport classical_equilibria(const Bimatrix2x2& m,
                                       const AnalysisOptions& opts = {});

// Correlation-game equilibria obtained by transforming the classical ones
// through the model's kernel and g, each re-verified angle-first.
EquilibriumReport quantum_equilibria(
    const Bimatrix2x2& m, const GFunction& g,
    const CorrelationModel& model = CorrelationModel::singlet(),
    const AnalysisOptions& opts = {});

// Attainable range [inf, sup] of G(kernel(theta)) over theta in [0, pi].
std::pair<double, double> effective_range(const GFunction& g,
                                          const CorrelationModel& model);

Regime regime_for(const CorrelationModel& model);

// Analytic report plus the grid oracle, reconciled.
EquilibriumReport analyze_classical(const Bimatrix2x2& m,
                                    const AnalysisOptions& opts = {});
EquilibriumReport analyze_correlation(const Bimatrix2x2& m, const GFunction& g,
                                      const CorrelationModel& model,
                                      const AnalysisOptions& opts = {});

std::string to_string(Regime regime);
std::string to_string(EquilibriumKind kind);
std::string to_string(Provenance provenance);

}  // namespace corrgame
