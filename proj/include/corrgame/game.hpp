#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "corrgame/corrmodel.hpp"
#include "corrgame/gfn.hpp"
#include "corrgame/types.hpp"

namespace corrgame {

struct PayoffPair {
  double a = 0.0;  // to Alice
  double b = 0.0;  // to Bob

  friend bool operator==(const PayoffPair&, const PayoffPair&) = default;
};

struct Rstu {
  double r, s, t, u;
};

// Coefficients of the symmetric bilinear form
//   P_A = K pA pB + L pA + M pB + N,  P_B = K pA pB + M pA + L pB + N.
struct SymmetricParams {
  double K = 0.0;
  double L = 0.0;
  double M = 0.0;
  double N = 0.0;

  static SymmetricParams from_rstu(double r, double s, double t, double u);
  Rstu to_rstu() const;
};

// Rows are Alice's moves (I, S_A), columns Bob's (I, S_B). Index 0 is the
// identity move, which a player makes with probability p.
class Bimatrix2x2 {
 public:
  using Entries = std::array<std::array<PayoffPair, 2>, 2>;

  explicit Bimatrix2x2(const Entries& entries);

  // (r,r) (s,t) / (t,s) (u,u)
  static Bimatrix2x2 symmetric(double r, double s, double t, double u);
  // (alpha,beta) (gamma,gamma) / (gamma,gamma) (beta,alpha)
  static Bimatrix2x2 battle_of_sexes(double alpha, double beta, double gamma);

  const PayoffPair& at(int row, int col) const { return entries_[row][col]; }
  const Entries& entries() const { return entries_; }

  bool is_symmetric() const;
  // Valid for symmetric games only.
  std::optional<SymmetricParams> symmetric_params() const;

 private:
  Entries entries_;
};

std::string describe_matrix(const Bimatrix2x2& m);

enum class Preset { kPrisonersDilemma, kBattleOfSexes, kCustom };

struct GameSpec {
  Bimatrix2x2 matrix;
  GFunction g;
  CorrelationModel model;
  Preset preset = Preset::kCustom;
  std::map<std::string, double> preset_params;

  std::string describe() const;
};

// "PD" with r, s, t, u (s < u < r < t) or "BoS" with alpha, beta, gamma
// (alpha > beta > gamma). The g-function defaults to g1, the model to the
// singlet.
GameSpec make_preset(const std::string& name,
                     const std::map<std::string, double>& params);

PayoffPair expected_payoff_classical(const Bimatrix2x2& m, Probability p_a,
                                     Probability p_b);

// Bilinear payoff evaluated at (G(c_ac), G(c_cb)).
PayoffPair correlation_payoff(const Bimatrix2x2& m, const GFunction& g,
                              double c_ac, double c_cb);

// Correlation payoff under an arbitrary kernel at the chosen angles.
PayoffPair kernel_payoff(const Bimatrix2x2& m, const GFunction& g,
                         const CorrelationModel& model, Angle theta_a,
                         Angle theta_b);

// Classical correlation game: the Classical kernel -1 + 2 theta / pi.
PayoffPair classical_payoff(const GameSpec& spec, Angle theta_a, Angle theta_b);

// Probability parameterisation via Q_g; needs an invertible g.
PayoffPair quantum_payoff(const GameSpec& spec, Probability p_a,
                          Probability p_b);

// Angle parameterisation. Uses the spec's model when it is the mixture or a
// custom kernel, the singlet kernel otherwise.
PayoffPair quantum_payoff_angle(const GameSpec& spec, Angle theta_a,
                                Angle theta_b);

}  // namespace corrgame
