#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace corrgame::cli {

namespace {

void allow_keys(const Json& j, const std::string& field,
                std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) {
      throw ConfigError(field.empty() ? k : field + "." + k, "unknown key");
    }
  }
}

std::string join(const std::string& field, const std::string& key) {
  return field.empty() ? key : field + "." + key;
}

bool get_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

std::uint64_t get_count(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned()) {
    throw ConfigError(field, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::map<std::string, double> get_params(const Json& j,
                                         const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object of numbers");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = parse_number(v, join(field, k));
  return out;
}

Bimatrix2x2 get_matrix(const Json& j, const std::string& field) {
  auto bad = [&] {
    return ConfigError(field,
                       "expected [[[a,b],[a,b]],[[a,b],[a,b]]] (rows are "
                       "Alice's moves, identity first)");
  };
  if (!j.is_array() || j.size() != 2) throw bad();
  Bimatrix2x2::Entries e{};
  for (int i = 0; i < 2; ++i) {
    if (!j[i].is_array() || j[i].size() != 2) throw bad();
    for (int k = 0; k < 2; ++k) {
      const auto& cell = j[i][k];
      if (!cell.is_array() || cell.size() != 2) throw bad();
      const auto f = fmt::format("{}[{}][{}]", field, i, k);
      e[i][k] = {parse_number(cell[0], f + "[0]"),
                 parse_number(cell[1], f + "[1]")};
    }
  }
  try {
    return Bimatrix2x2(e);
  } catch (const Error& err) {
    throw ConfigError(field, err.what());
  }
}

std::vector<Segment> get_segments(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(field, "expected a non-empty array of segments");
  }
  std::vector<Segment> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto f = fmt::format("{}[{}]", field, i);
    allow_keys(j[i], f, {"lo", "hi", "lo_closed", "hi_closed", "v_lo", "v_hi"});
    Segment s;
    for (const char* key : {"lo", "hi", "v_lo", "v_hi"}) {
      if (!j[i].contains(key)) throw ConfigError(join(f, key), "missing");
    }
    s.lo = parse_number(j[i]["lo"], join(f, "lo"));
    s.hi = parse_number(j[i]["hi"], join(f, "hi"));
    s.v_lo = parse_number(j[i]["v_lo"], join(f, "v_lo"));
    s.v_hi = parse_number(j[i]["v_hi"], join(f, "v_hi"));
    if (j[i].contains("lo_closed")) {
      s.lo_closed = get_bool(j[i]["lo_closed"], join(f, "lo_closed"));
    }
    if (j[i].contains("hi_closed")) {
      s.hi_closed = get_bool(j[i]["hi_closed"], join(f, "hi_closed"));
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

double parse_number(const Json& j, const std::string& field) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field, "number must be finite");
    return v;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.rfind("pi:", 0) == 0) {
      try {
        std::size_t used = 0;
        const double x = std::stod(s.substr(3), &used);
        if (used == s.size() - 3 && std::isfinite(x)) return x * kPi;
      } catch (const std::exception&) {
      }
    }
    throw ConfigError(field, fmt::format("cannot read '{}' as a number; use a "
                                         "number or \"pi:<factor>\"",
                                         s));
  }
  throw ConfigError(field, "expected a number or a \"pi:<factor>\" string");
}

Config parse_config(const Json& j) {
  Config c;
  allow_keys(j, "", {"game", "gfunction", "model", "analysis", "simulation",
                     "sweep", "gfn", "output"});

  if (j.contains("game")) {
    const auto& g = j["game"];
    allow_keys(g, "game", {"preset", "params", "matrix"});
    if (g.contains("preset") == g.contains("matrix")) {
      throw ConfigError("game", "give exactly one of 'preset' or 'matrix'");
    }
    if (g.contains("preset")) {
      c.game.preset = get_string(g["preset"], "game.preset");
      if (c.game.preset != "PD" && c.game.preset != "BoS") {
        throw ConfigError("game.preset", fmt::format("unknown preset '{}'; "
                                                     "expected PD or BoS",
                                                     c.game.preset));
      }
      if (!g.contains("params")) throw ConfigError("game.params", "missing");
      c.game.params = get_params(g["params"], "game.params");
    } else {
      if (g.contains("params")) {
        throw ConfigError("game.params", "only valid together with a preset");
      }
      c.game.matrix = get_matrix(g["matrix"], "game.matrix");
    }
  } else {
    c.game.preset = "PD";
    c.game.params = {{"r", 3}, {"s", 0}, {"t", 5}, {"u", 1}};
  }

  if (j.contains("gfunction")) {
    const auto& g = j["gfunction"];
    allow_keys(g, "gfunction", {"name", "params", "segments"});
    if (g.contains("name")) c.gfunction.name = get_string(g["name"], "gfunction.name");
    if (g.contains("params")) {
      c.gfunction.params = get_params(g["params"], "gfunction.params");
    }
    if (g.contains("segments")) {
      c.gfunction.segments = get_segments(g["segments"], "gfunction.segments");
      if (!g.contains("name")) c.gfunction.name = "custom";
    }
  }

  if (j.contains("model")) {
    c.model = get_string(j["model"], "model");
    if (c.model != "classical" && c.model != "singlet" && c.model != "mixture") {
      throw ConfigError("model", fmt::format("unknown model '{}'; expected "
                                             "classical, singlet or mixture",
                                             c.model));
    }
  }

  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    allow_keys(a, "analysis", {"tol", "grid_step", "approach", "regimes"});
    if (a.contains("tol")) c.analysis.tol = parse_number(a["tol"], "analysis.tol");
    if (a.contains("grid_step")) {
      c.analysis.grid_step = parse_number(a["grid_step"], "analysis.grid_step");
    }
    if (a.contains("approach")) {
      c.analysis.approach = parse_number(a["approach"], "analysis.approach");
    }
    if (a.contains("regimes")) {
      if (!a["regimes"].is_array()) {
        throw ConfigError("analysis.regimes", "expected an array");
      }
      for (std::size_t i = 0; i < a["regimes"].size(); ++i) {
        const auto f = fmt::format("analysis.regimes[{}]", i);
        const auto r = get_string(a["regimes"][i], f);
        if (r != "classical" && r != "quantum" && r != "mixture") {
          throw ConfigError(f, fmt::format("unknown regime '{}'", r));
        }
        c.regimes.push_back(r);
      }
    }
  }
  if (!(c.analysis.tol >= 0.0)) throw ConfigError("analysis.tol", "must be >= 0");
  if (!(c.analysis.grid_step > 0.0 && c.analysis.grid_step <= 0.05)) {
    throw ConfigError("analysis.grid_step", "must lie in (0, 0.05]");
  }
  if (!(c.analysis.approach > 0.0 && c.analysis.approach < 1e-3)) {
    throw ConfigError("analysis.approach", "must lie in (0, 1e-3)");
  }

  if (j.contains("simulation")) {
    const auto& s = j["simulation"];
    allow_keys(s, "simulation", {"n", "seed", "theta_a", "theta_b", "threads"});
    if (s.contains("n")) c.simulation.n = get_count(s["n"], "simulation.n");
    if (s.contains("seed")) c.simulation.seed = get_count(s["seed"], "simulation.seed");
    if (s.contains("theta_a")) {
      c.simulation.theta_a = parse_number(s["theta_a"], "simulation.theta_a");
    }
    if (s.contains("theta_b")) {
      c.simulation.theta_b = parse_number(s["theta_b"], "simulation.theta_b");
    }
    if (s.contains("threads")) {
      c.simulation.threads =
          static_cast<unsigned>(get_count(s["threads"], "simulation.threads"));
    }
  }
  if (c.simulation.n == 0) throw ConfigError("simulation.n", "must be >= 1");
  for (auto [v, f] : {std::pair{c.simulation.theta_a, "simulation.theta_a"},
                      std::pair{c.simulation.theta_b, "simulation.theta_b"}}) {
    if (!(v >= 0.0 && v <= kPi)) throw ConfigError(f, "angle must lie in [0, pi]");
  }

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    allow_keys(s, "sweep",
               {"parameter", "from", "to", "steps", "regime", "oracle"});
    SweepBlock sw;
    for (const char* key : {"parameter", "from", "to"}) {
      if (!s.contains(key)) throw ConfigError(join("sweep", key), "missing");
    }
    sw.parameter = get_string(s["parameter"], "sweep.parameter");
    static const std::set<std::string> kSweepable = {
        "delta", "epsilon", "r", "s", "t", "u", "alpha", "beta", "gamma"};
    if (!kSweepable.count(sw.parameter)) {
      throw ConfigError("sweep.parameter",
                        fmt::format("cannot sweep '{}'; expected one of delta, "
                                    "epsilon, r, s, t, u, alpha, beta, gamma",
                                    sw.parameter));
    }
    sw.from = parse_number(s["from"], "sweep.from");
    sw.to = parse_number(s["to"], "sweep.to");
    if (s.contains("steps")) sw.steps = get_count(s["steps"], "sweep.steps");
    if (sw.steps == 0) throw ConfigError("sweep.steps", "must be >= 1");
    if (sw.steps > 1 && !(sw.from < sw.to)) {
      throw ConfigError("sweep.to", "invalid range: 'to' must exceed 'from'");
    }
    if (s.contains("regime")) {
      sw.regime = get_string(s["regime"], "sweep.regime");
      if (sw.regime != "classical" && sw.regime != "quantum" &&
          sw.regime != "mixture") {
        throw ConfigError("sweep.regime", fmt::format("unknown regime '{}'",
                                                      sw.regime));
      }
    }
    if (s.contains("oracle")) sw.oracle = get_bool(s["oracle"], "sweep.oracle");
    c.sweep = sw;
  }

  if (j.contains("gfn")) {
    allow_keys(j["gfn"], "gfn", {"resolution"});
    if (j["gfn"].contains("resolution")) {
      c.gfn_resolution = get_count(j["gfn"]["resolution"], "gfn.resolution");
    }
  }
  if (c.gfn_resolution < 2) throw ConfigError("gfn.resolution", "must be >= 2");

  if (j.contains("output")) {
    allow_keys(j["output"], "output", {"dir"});
    if (j["output"].contains("dir")) {
      c.out_dir = get_string(j["output"]["dir"], "output.dir");
    }
  }

  build_spec(c);  // validate before any computation
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", fmt::format("cannot open '{}'", path));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("--config", fmt::format("invalid JSON: {}", e.what()));
  }
  return parse_config(j);
}

GameSpec build_spec(const Config& c) {
  GFunction g = [&] {
    if (!c.gfunction.segments.empty()) {
      try {
        return GFunction(c.gfunction.name, c.gfunction.segments);
      } catch (const Error& e) {
        throw ConfigError("gfunction.segments", e.what());
      }
    }
    try {
      return make_catalog(c.gfunction.name, c.gfunction.params);
    } catch (const Error& e) {
      throw ConfigError(e.code() == ErrorCode::kUnknownName ? "gfunction.name"
                                                            : "gfunction.params",
                        e.what());
    }
  }();
  const auto model = CorrelationModel::by_name(c.model);

  if (c.game.matrix) {
    return GameSpec{*c.game.matrix, g, model, Preset::kCustom, {}};
  }
  GameSpec spec = [&] {
    try {
      return make_preset(c.game.preset, c.game.params);
    } catch (const Error& e) {
      throw ConfigError("game.params", e.what());
    }
  }();
  for (const auto& [k, _] : c.game.params) {
    if (!spec.preset_params.count(k)) {
      throw ConfigError(join("game.params", k),
                        fmt::format("not a parameter of preset {}", c.game.preset));
    }
  }
  spec.g = g;
  spec.model = model;
  return spec;
}

Config with_parameter(const Config& c, const std::string& name, double value) {
  Config out = c;
  if (name == "delta" || name == "epsilon") {
    out.gfunction.params[name] = value;
  } else {
    if (c.game.matrix) {
      throw ConfigError("sweep.parameter",
                        fmt::format("'{}' needs a preset game", name));
    }
    out.game.params[name] = value;
  }
  return out;
}

}  // namespace corrgame::cli
