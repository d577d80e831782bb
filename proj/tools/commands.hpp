#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace corrgame::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitUndefinedCorrelation = 3,
  kExitDiscrepancy = 4,
};

// Regimes analyzed when the config does not list any.
std::vector<std::string> default_regimes(const Config& c);

std::vector<EquilibriumReport> analyze_reports(const Config& c);
EquilibriumReport analyze_regime(const GameSpec& spec, const std::string& regime,
                                 const AnalysisOptions& opts, bool oracle = true);

// theta,g,q_angle with duplicated left/right rows at discontinuities.
std::string gfn_csv(const GFunction& g, std::size_t resolution);

// One row per (sweep point, equilibrium).
std::string sweep_csv(const Config& c, bool* discrepancy = nullptr);
inline constexpr const char* kSweepHeader =
    "parameter,value,regime,index,kind,p_a,p_b,payoff_a,payoff_b,provenance,"
    "verified,limit_only,weak,bifurcation_count";

// Full command line: parses flags, runs the subcommand, reports errors as
// JSON on `err`, and returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace corrgame::cli
