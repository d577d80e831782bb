#pragma once

#include <nlohmann/json.hpp>

#include "corrgame/arbiter.hpp"
#include "corrgame/equilibrium.hpp"

namespace corrgame {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const Profile& p);
void from_json(const Json& j, Profile& p);
void to_json(Json& j, const PayoffPair& p);
void from_json(const Json& j, PayoffPair& p);
void to_json(Json& j, const StrategyAngles& a);
void from_json(const Json& j, StrategyAngles& a);
void to_json(Json& j, const Equilibrium& e);
void from_json(const Json& j, Equilibrium& e);
void to_json(Json& j, const OracleCluster& c);
void from_json(const Json& j, OracleCluster& c);
void to_json(Json& j, const FormulaCheck& f);
void from_json(const Json& j, FormulaCheck& f);
void to_json(Json& j, const EquilibriumReport& r);
void from_json(const Json& j, EquilibriumReport& r);

void to_json(Json& j, const CorrelationEstimate& e);
void from_json(const Json& j, CorrelationEstimate& e);
void to_json(Json& j, const SimulationResult& r);
void from_json(const Json& j, SimulationResult& r);

Regime regime_from_string(const std::string& s);
EquilibriumKind kind_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

}  // namespace corrgame
