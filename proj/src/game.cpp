#include "corrgame/game.hpp"

#include <cmath>

#include <fmt/format.h>

#include "corrgame/error.hpp"

namespace corrgame {

SymmetricParams SymmetricParams::from_rstu(double r, double s, double t,
                                           double u) {
  return {r - s - t + u, s - u, t - u, u};
}

Rstu SymmetricParams::to_rstu() const {
  return {K + L + M + N, L + N, M + N, N};
}

Bimatrix2x2::Bimatrix2x2(const Entries& entries) : entries_(entries) {
  for (const auto& row : entries_) {
    for (const auto& e : row) {
      if (!std::isfinite(e.a) || !std::isfinite(e.b)) {
        throw Error(ErrorCode::kDomain, "payoff entries must be finite");
      }
    }
  }
}

Bimatrix2x2 Bimatrix2x2::symmetric(double r, double s, double t, double u) {
  return Bimatrix2x2(Entries{{{{{r, r}, {s, t}}}, {{{t, s}, {u, u}}}}});
}

Bimatrix2x2 Bimatrix2x2::battle_of_sexes(double alpha, double beta,
                                         double gamma) {
  return Bimatrix2x2(Entries{
      {{{{alpha, beta}, {gamma, gamma}}}, {{{gamma, gamma}, {beta, alpha}}}}});
}

bool Bimatrix2x2::is_symmetric() const {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (entries_[i][j].a != entries_[j][i].b) return false;
    }
  }
  return true;
}

std::optional<SymmetricParams> Bimatrix2x2::symmetric_params() const {
  if (!is_symmetric()) return std::nullopt;
  return SymmetricParams::from_rstu(entries_[0][0].a, entries_[0][1].a,
                                    entries_[1][0].a, entries_[1][1].a);
}

std::string GameSpec::describe() const {
  auto get = [this](const char* k) {
    auto it = preset_params.find(k);
    return it == preset_params.end() ? 0.0 : it->second;
  };
  switch (preset) {
    case Preset::kPrisonersDilemma:
      return fmt::format("PD(r={}, s={}, t={}, u={})", get("r"), get("s"),
                         get("t"), get("u"));
    case Preset::kBattleOfSexes:
      return fmt::format("BoS(alpha={}, beta={}, gamma={})", get("alpha"),
                         get("beta"), get("gamma"));
    case Preset::kCustom: break;
  }
  return describe_matrix(matrix);
}

std::string describe_matrix(const Bimatrix2x2& m) {
  const auto& e = m.entries();
  return fmt::format("custom[({},{}) ({},{}) / ({},{}) ({},{})]", e[0][0].a,
                     e[0][0].b, e[0][1].a, e[0][1].b, e[1][0].a, e[1][0].b,
                     e[1][1].a, e[1][1].b);
}

namespace {

double param(const std::map<std::string, double>& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorCode::kParamOutOfRange,
                fmt::format("missing game parameter '{}'", key));
  }
  return it->second;
}

void require_less(double lo, double hi, const char* lo_name,
                  const char* hi_name) {
  if (!(lo < hi)) {
    throw Error(ErrorCode::kOrderingViolation,
                fmt::format("ordering violated: {} < {} fails ({} >= {})",
                            lo_name, hi_name, lo, hi));
  }
}

}  // namespace

GameSpec make_preset(const std::string& name,
                     const std::map<std::string, double>& params) {
  if (name == "PD") {
    const double r = param(params, "r"), s = param(params, "s"),
                 t = param(params, "t"), u = param(params, "u");
    require_less(s, u, "s", "u");
    require_less(u, r, "u", "r");
    require_less(r, t, "r", "t");
    return GameSpec{Bimatrix2x2::symmetric(r, s, t, u), make_catalog("g1"),
                    CorrelationModel::singlet(), Preset::kPrisonersDilemma,
                    {{"r", r}, {"s", s}, {"t", t}, {"u", u}}};
  }
  if (name == "BoS") {
    const double alpha = param(params, "alpha"), beta = param(params, "beta"),
                 gamma = param(params, "gamma");
    require_less(beta, alpha, "beta", "alpha");
    require_less(gamma, beta, "gamma", "beta");
    return GameSpec{Bimatrix2x2::battle_of_sexes(alpha, beta, gamma),
                    make_catalog("g1"), CorrelationModel::singlet(),
                    Preset::kBattleOfSexes,
                    {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}}};
  }
  throw Error(ErrorCode::kUnknownName,
              fmt::format("unknown game preset '{}'", name));
}

PayoffPair expected_payoff_classical(const Bimatrix2x2& m, Probability p_a,
                                     Probability p_b) {
  const double wa[2] = {p_a.value(), 1.0 - p_a.value()};
  const double wb[2] = {p_b.value(), 1.0 - p_b.value()};
  PayoffPair out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double w = wa[i] * wb[j];
      if (w == 0.0) continue;
      out.a += w * m.at(i, j).a;
      out.b += w * m.at(i, j).b;
    }
  }
  return out;
}

PayoffPair correlation_payoff(const Bimatrix2x2& m, const GFunction& g,
                              double c_ac, double c_cb) {
  return expected_payoff_classical(m, g.big_g(c_ac), g.big_g(c_cb));
}

PayoffPair kernel_payoff(const Bimatrix2x2& m, const GFunction& g,
                         const CorrelationModel& model, Angle theta_a,
                         Angle theta_b) {
  return correlation_payoff(m, g, model.kernel(theta_a), model.kernel(theta_b));
}

PayoffPair classical_payoff(const GameSpec& spec, Angle theta_a,
                            Angle theta_b) {
  return kernel_payoff(spec.matrix, spec.g, CorrelationModel::classical(),
                       theta_a, theta_b);
}

PayoffPair quantum_payoff(const GameSpec& spec, Probability p_a,
                          Probability p_b) {
  return expected_payoff_classical(spec.matrix, spec.g.q_transform(p_a),
                                   spec.g.q_transform(p_b));
}

PayoffPair quantum_payoff_angle(const GameSpec& spec, Angle theta_a,
                                Angle theta_b) {
  const bool own_kernel = spec.model.kind() == ModelKind::kMixture ||
                          spec.model.kind() == ModelKind::kCustom;
  const auto model = own_kernel ? spec.model : CorrelationModel::singlet();
  return kernel_payoff(spec.matrix, spec.g, model, theta_a, theta_b);
}

}  // namespace corrgame
