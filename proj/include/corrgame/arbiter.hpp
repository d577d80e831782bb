#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrgame/corrmodel.hpp"
#include "corrgame/game.hpp"
#include "corrgame/gfn.hpp"

namespace corrgame {

// A player's announced direction together with the identity-move
// probability it implies under g.
struct StrategyMix {
  StrategyMix(const GFunction& g, Angle theta)
      : theta(theta.value()), p(g.eval(theta).value()) {}

  double theta;
  double p;
};

struct RunRecord {
  std::uint64_t index = 0;
  AliceAxis alice_axis = AliceAxis::kZ;
  BobAxis bob_axis = BobAxis::kZ;
  int a = 1;
  int b = 1;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunMeta {
  std::string spec_hash;
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::string model;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;

  friend bool operator==(const RunMeta&, const RunMeta&) = default;
};

struct RunLog {
  RunMeta meta;
  std::vector<RunRecord> records;

  friend bool operator==(const RunLog&, const RunLog&) = default;
};

// Mean of a*b over one subset of runs. value is empty when the subset is.
struct CorrelationEstimate {
  std::optional<double> value;
  double std_error = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const CorrelationEstimate&,
                         const CorrelationEstimate&) = default;
};

struct CorrelationEstimates {
  CorrelationEstimate ac;  // (A, Z)
  CorrelationEstimate cb;  // (Z, B)
  CorrelationEstimate ab;  // (A, B), diagnostic
  CorrelationEstimate cc;  // (Z, Z), diagnostic

  friend bool operator==(const CorrelationEstimates&,
                         const CorrelationEstimates&) = default;
};

struct SimulationResult {
  double p_a = 0.0;
  double p_b = 0.0;
  CorrelationEstimates correlations;
  PayoffPair payoffs;
  // Delta-method standard errors of the payoffs.
  PayoffPair payoff_std_error;

  friend bool operator==(const SimulationResult&,
                         const SimulationResult&) = default;
};

// FNV-1a digest of the game, g-function and model, as 16 hex digits.
std::string spec_hash(const GameSpec& spec);

// Plays n runs of the measurement protocol. Run k depends only on
// (seed, k), so the log is the same for any thread count.
RunLog play_runs(const GameSpec& spec, Angle theta_a, Angle theta_b,
                 std::uint64_t n, std::uint64_t seed, unsigned threads = 0);

// (p_A, p_B) = ((N - N_A) / N, (N - N_B) / N).
std::pair<double, double> infer_strategies(const RunLog& log);

CorrelationEstimates estimate_correlations(const RunLog& log);

// Payoffs from the estimated correlations through the matrix and g only.
// Throws UndefinedCorrelation when (A,Z) or (Z,B) runs are missing.
SimulationResult settle(const RunLog& log, const Bimatrix2x2& m,
                        const GFunction& g);
SimulationResult settle(const RunLog& log, const GameSpec& spec);

// n independent draws from sample_pair at a fixed angle.
CorrelationEstimate sample_kernel(const CorrelationModel& model, Angle theta,
                                  std::uint64_t n, std::uint64_t seed);

// JSONL: a {"meta": ...} header line, then one record per line.
void write_jsonl(std::ostream& out, const RunLog& log);
RunLog read_jsonl(std::istream& in);
// index,alice_axis,bob_axis,a,b
void write_csv(std::ostream& out, const RunLog& log);

}  // namespace corrgame
