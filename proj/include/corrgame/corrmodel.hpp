#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "corrgame/gfn.hpp"
#include "corrgame/rng.hpp"
#include "corrgame/types.hpp"

namespace corrgame {

enum class ModelKind { kClassical, kSinglet, kMixture, kCustom };

// Correlation kernel theta -> <outcome product> of an input-state family.
class CorrelationModel {
 public:
  using Kernel = std::function<double(double)>;

  static CorrelationModel classical();
  static CorrelationModel singlet();
  static CorrelationModel mixture();
  static CorrelationModel custom(std::string name, Kernel kernel);
  // "classical" | "singlet" | "mixture".
  static CorrelationModel by_name(const std::string& name);

  ModelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double kernel(Angle theta) const;

  // Angles theta with kernel(theta) = c, each with the local sign of the
  // kernel's slope. Closed form for the named models, scan + bisection for
  // custom kernels.
  std::vector<AngleRoot> kernel_inverse(double c) const;

  // Inverse of x(theta) = pi (1 + kernel(theta)) / 2, the argument fed to g
  // by the correlation payoff G(kernel(theta)).
  AngleInverse angle_inverse() const;

 private:
  CorrelationModel(ModelKind kind, std::string name, Kernel custom)
      : kind_(kind), name_(std::move(name)), custom_(std::move(custom)) {}

  ModelKind kind_;
  std::string name_;
  Kernel custom_;
};

struct OutcomePair {
  int a = 1;
  int b = 1;
};

enum class AliceAxis { kZ, kA };
enum class BobAxis { kZ, kB };

// Angle between the two measurement directions. e_A lies in the xz-plane,
// e_B in the yz-plane, both at their angle from the z-axis.
Angle axis_angle(AliceAxis alice, BobAxis bob, Angle theta_a, Angle theta_b);

// Joint law P(a, b) = (1 + a b kernel(theta)) / 4 with unbiased marginals.
OutcomePair sample_pair(const CorrelationModel& model, Angle theta,
                        SplitMix64& rng);

// Local hidden-variable realisation: a uniformly random angular momentum J,
// a = sign(e1 . J), b = sign(e2 . (-J)) with e1, e2 separated by theta.
OutcomePair hidden_variable_sample(Angle theta, SplitMix64& rng);

}  // namespace corrgame
