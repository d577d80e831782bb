#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrgame/equilibrium.hpp"
#include "corrgame/error.hpp"
#include "corrgame/game.hpp"
#include "corrgame/serialize.hpp"

namespace corrgame::cli {

// Config problem tied to a dotted field path such as "game.params.r".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(ErrorCode::kConfig, message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct GameBlock {
  std::string preset;  // "PD", "BoS" or empty for an explicit matrix
  std::map<std::string, double> params;
  std::optional<Bimatrix2x2> matrix;
};

struct GFunctionBlock {
  std::string name = "g1";
  GParams params;
  std::vector<Segment> segments;  // non-empty for a custom g
};

struct SimulationBlock {
  std::uint64_t n = 10000;
  std::uint64_t seed = 1;
  double theta_a = kPi / 2;
  double theta_b = kPi / 2;
  unsigned threads = 0;
};

struct SweepBlock {
  std::string parameter;
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 1;
  std::string regime = "quantum";
  bool oracle = true;
};

struct Config {
  GameBlock game;
  GFunctionBlock gfunction;
  std::string model = "singlet";
  AnalysisOptions analysis;
  std::vector<std::string> regimes;  // empty means the default set
  SimulationBlock simulation;
  std::optional<SweepBlock> sweep;
  std::size_t gfn_resolution = 101;
  std::string out_dir = "out";
};

// Reads a number, or a "pi:x" string meaning x * pi.
double parse_number(const Json& j, const std::string& field);

Config parse_config(const Json& j);
Config load_config(const std::string& path);

// Builds and validates the objects named by the config. Throws ConfigError
// with the offending field.
GameSpec build_spec(const Config& c);

// Config with one parameter replaced, for sweeps.
Config with_parameter(const Config& c, const std::string& name, double value);

}  // namespace corrgame::cli
