#include "corrgame/serialize.hpp"

#include <fmt/format.h>

#include "corrgame/error.hpp"

namespace corrgame {

namespace {

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
void get_optional(const Json& j, const char* key, std::optional<T>& v) {
  if (!j.contains(key) || j.at(key).is_null()) {
    v.reset();
  } else {
    v = j.at(key).get<T>();
  }
}

}  // namespace

Regime regime_from_string(const std::string& s) {
  if (s == "classical") return Regime::kClassicalGame;
  if (s == "quantum") return Regime::kQuantumGame;
  if (s == "mixture") return Regime::kMixtureGame;
  throw Error(ErrorCode::kFormat, fmt::format("unknown regime '{}'", s));
}

EquilibriumKind kind_from_string(const std::string& s) {
  if (s == "pure") return EquilibriumKind::kPure;
  if (s == "mixed") return EquilibriumKind::kMixed;
  throw Error(ErrorCode::kFormat, fmt::format("unknown equilibrium kind '{}'", s));
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "analytic") return Provenance::kAnalytic;
  if (s == "oracle") return Provenance::kOracle;
  throw Error(ErrorCode::kFormat, fmt::format("unknown provenance '{}'", s));
}

void to_json(Json& j, const Profile& p) { j = {{"p_a", p.p_a}, {"p_b", p.p_b}}; }
void from_json(const Json& j, Profile& p) {
  j.at("p_a").get_to(p.p_a);
  j.at("p_b").get_to(p.p_b);
}

void to_json(Json& j, const PayoffPair& p) { j = {{"a", p.a}, {"b", p.b}}; }
void from_json(const Json& j, PayoffPair& p) {
  j.at("a").get_to(p.a);
  j.at("b").get_to(p.b);
}

void to_json(Json& j, const StrategyAngles& a) {
  j = {{"theta_a", a.theta_a},
       {"theta_b", a.theta_b},
       {"side_a", a.side_a},
       {"side_b", a.side_b}};
}
void from_json(const Json& j, StrategyAngles& a) {
  j.at("theta_a").get_to(a.theta_a);
  j.at("theta_b").get_to(a.theta_b);
  j.at("side_a").get_to(a.side_a);
  j.at("side_b").get_to(a.side_b);
}

void to_json(Json& j, const Equilibrium& e) {
  j = Json::object();
  j["profile"] = e.profile;
  j["kind"] = to_string(e.kind);
  j["payoffs"] = e.payoffs;
  j["provenance"] = to_string(e.provenance);
  j["limit_only"] = e.limit_only;
  j["weak"] = e.weak;
  j["verified"] = e.verified;
  j["max_gain"] = e.max_gain;
  put_optional(j, "source_classical", e.source_classical);
  put_optional(j, "angles", e.angles);
  j["shift"] = e.shift;
}
void from_json(const Json& j, Equilibrium& e) {
  j.at("profile").get_to(e.profile);
  e.kind = kind_from_string(j.at("kind").get<std::string>());
  j.at("payoffs").get_to(e.payoffs);
  e.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  j.at("limit_only").get_to(e.limit_only);
  j.at("weak").get_to(e.weak);
  j.at("verified").get_to(e.verified);
  j.at("max_gain").get_to(e.max_gain);
  get_optional(j, "source_classical", e.source_classical);
  get_optional(j, "angles", e.angles);
  j.at("shift").get_to(e.shift);
}

void to_json(Json& j, const OracleCluster& c) {
  j = {{"centroid", c.centroid}, {"radius", c.radius}, {"points", c.points}};
}
void from_json(const Json& j, OracleCluster& c) {
  j.at("centroid").get_to(c.centroid);
  j.at("radius").get_to(c.radius);
  j.at("points").get_to(c.points);
}

void to_json(Json& j, const FormulaCheck& f) {
  j = Json::object();
  j["player"] = f.player;
  j["classical"] = f.classical;
  j["general_transform"] = f.general_transform;
  j["text_formula"] = f.text_formula;
  put_optional(j, "oracle", f.oracle);
  j["agrees_with"] = f.agrees_with;
}
void from_json(const Json& j, FormulaCheck& f) {
  j.at("player").get_to(f.player);
  j.at("classical").get_to(f.classical);
  j.at("general_transform").get_to(f.general_transform);
  j.at("text_formula").get_to(f.text_formula);
  get_optional(j, "oracle", f.oracle);
  j.at("agrees_with").get_to(f.agrees_with);
}

void to_json(Json& j, const EquilibriumReport& r) {
  j = Json::object();
  j["game"] = r.game;
  j["regime"] = to_string(r.regime);
  j["g"] = r.g_name;
  j["model"] = r.model;
  j["equilibria"] = r.equilibria;
  j["bifurcated"] = r.bifurcated;
  j["degenerate"] = r.degenerate;
  j["multiplicity"] = r.multiplicity;
  j["angle_multiplicity"] = r.angle_multiplicity;
  j["notes"] = r.notes;
  j["oracle"] = {{"run", r.oracle_run},
                 {"grid_step", r.grid_step},
                 {"clusters", r.oracle_clusters},
                 {"discrepancies", r.discrepancies}};
  j["formula_checks"] = r.formula_checks;
}
void from_json(const Json& j, EquilibriumReport& r) {
  j.at("game").get_to(r.game);
  r.regime = regime_from_string(j.at("regime").get<std::string>());
  j.at("g").get_to(r.g_name);
  j.at("model").get_to(r.model);
  j.at("equilibria").get_to(r.equilibria);
  j.at("bifurcated").get_to(r.bifurcated);
  j.at("degenerate").get_to(r.degenerate);
  j.at("multiplicity").get_to(r.multiplicity);
  j.at("angle_multiplicity").get_to(r.angle_multiplicity);
  j.at("notes").get_to(r.notes);
  const auto& o = j.at("oracle");
  o.at("run").get_to(r.oracle_run);
  o.at("grid_step").get_to(r.grid_step);
  o.at("clusters").get_to(r.oracle_clusters);
  o.at("discrepancies").get_to(r.discrepancies);
  j.at("formula_checks").get_to(r.formula_checks);
}

void to_json(Json& j, const CorrelationEstimate& e) {
  j = Json::object();
  put_optional(j, "value", e.value);
  j["std_error"] = e.std_error;
  j["count"] = e.count;
}
void from_json(const Json& j, CorrelationEstimate& e) {
  get_optional(j, "value", e.value);
  j.at("std_error").get_to(e.std_error);
  j.at("count").get_to(e.count);
}

void to_json(Json& j, const SimulationResult& r) {
  j = Json::object();
  j["p_a"] = r.p_a;
  j["p_b"] = r.p_b;
  j["correlations"] = {{"ac", r.correlations.ac},
                       {"cb", r.correlations.cb},
                       {"ab", r.correlations.ab},
                       {"cc", r.correlations.cc}};
  j["payoffs"] = r.payoffs;
  j["payoff_std_error"] = r.payoff_std_error;
}
void from_json(const Json& j, SimulationResult& r) {
  j.at("p_a").get_to(r.p_a);
  j.at("p_b").get_to(r.p_b);
  const auto& c = j.at("correlations");
  c.at("ac").get_to(r.correlations.ac);
  c.at("cb").get_to(r.correlations.cb);
  c.at("ab").get_to(r.correlations.ab);
  c.at("cc").get_to(r.correlations.cc);
  j.at("payoffs").get_to(r.payoffs);
  j.at("payoff_std_error").get_to(r.payoff_std_error);
}

}  // namespace corrgame
