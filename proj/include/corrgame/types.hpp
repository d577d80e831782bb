#pragma once

#include <numbers>

namespace corrgame {

inline constexpr double kPi = std::numbers::pi;

// Angle in radians, 0 <= value <= pi. Round-off excursions up to 1e-12 are
// clamped; anything further out throws a domain error.
class Angle {
 public:
  explicit Angle(double radians);
  double value() const { return value_; }

 private:
  double value_;
};

// Probability of the identity move, 0 <= value <= 1 (same clamping rule).
class Probability {
 public:
  explicit Probability(double p);
  double value() const { return value_; }

 private:
  double value_;
};

}  // namespace corrgame
