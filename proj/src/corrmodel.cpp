#include "corrgame/corrmodel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "corrgame/error.hpp"

namespace corrgame {

CorrelationModel CorrelationModel::classical() {
  return {ModelKind::kClassical, "classical", {}};
}
CorrelationModel CorrelationModel::singlet() {
  return {ModelKind::kSinglet, "singlet", {}};
}
CorrelationModel CorrelationModel::mixture() {
  return {ModelKind::kMixture, "mixture", {}};
}
CorrelationModel CorrelationModel::custom(std::string name, Kernel kernel) {
  if (!kernel) {
    throw Error(ErrorCode::kConfig, "custom correlation model needs a kernel");
  }
  return {ModelKind::kCustom, std::move(name), std::move(kernel)};
}

CorrelationModel CorrelationModel::by_name(const std::string& name) {
  if (name == "classical") return classical();
  if (name == "singlet") return singlet();
  if (name == "mixture") return mixture();
  throw Error(ErrorCode::kUnknownName,
              fmt::format("unknown correlation model '{}'", name));
}

double CorrelationModel::kernel(Angle theta) const {
  const double t = theta.value();
  switch (kind_) {
    case ModelKind::kClassical: return -1.0 + 2.0 * t / kPi;
    case ModelKind::kSinglet: return -std::cos(t);
    case ModelKind::kMixture: return -std::cos(t) / 3.0;
    case ModelKind::kCustom: {
      const double c = custom_(t);
      if (!(c >= -1.0 && c <= 1.0)) {
        throw Error(ErrorCode::kDomain,
                    fmt::format("kernel '{}' returned {} at theta = {}", name_,
                                c, t));
      }
      return c;
    }
  }
  return 0.0;
}

namespace {

// acos is ill-conditioned at +-1: a cosine one ulp below 1 maps to 1.5e-8.
// Arguments within a few ulps of the ends are taken to be exact.
double acos_snapped(double v) {
  constexpr double kUlpSlack = 1e-15;
  if (v >= 1.0 - kUlpSlack) return 0.0;
  if (v <= -1.0 + kUlpSlack) return kPi;
  return std::acos(v);
}

}  // namespace

std::vector<AngleRoot> CorrelationModel::kernel_inverse(double c) const {
  constexpr double kSlack = 1e-12;
  switch (kind_) {
    case ModelKind::kClassical:
      if (c < -1.0 - kSlack || c > 1.0 + kSlack) return {};
      return {{std::clamp(0.5 * kPi * (1.0 + c), 0.0, kPi), +1}};
    case ModelKind::kSinglet:
      if (c < -1.0 - kSlack || c > 1.0 + kSlack) return {};
      return {{acos_snapped(-c), +1}};
    case ModelKind::kMixture: {
      const double cos_t = -3.0 * c;
      if (cos_t < -1.0 - kSlack || cos_t > 1.0 + kSlack) return {};
      return {{acos_snapped(cos_t), +1}};
    }
    case ModelKind::kCustom: break;
  }

  constexpr int kCells = 4096;
  const double h = kPi / kCells;
  auto f = [&](double t) { return kernel(Angle(t)) - c; };
  auto direction = [&](double t) {
    const double lo = std::max(0.0, t - 1e-7);
    const double hi = std::min(kPi, t + 1e-7);
    const double d = kernel(Angle(hi)) - kernel(Angle(lo));
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  };
  std::vector<AngleRoot> roots;
  double t0 = 0.0;
  double f0 = f(t0);
  if (std::abs(f0) <= 1e-14) roots.push_back({t0, direction(t0)});
  for (int k = 1; k <= kCells; ++k) {
    const double t1 = (k == kCells) ? kPi : k * h;
    const double f1 = f(t1);
    if (std::abs(f1) <= 1e-14) {
      roots.push_back({t1, direction(t1)});
    } else if (std::abs(f0) > 1e-14 && (f0 < 0) != (f1 < 0)) {
      double a = t0, b = t1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double root = 0.5 * (a + b);
      roots.push_back({root, direction(root)});
    }
    t0 = t1;
    f0 = f1;
  }
  return roots;
}

AngleInverse CorrelationModel::angle_inverse() const {
  return [model = *this](double x) {
    return model.kernel_inverse(2.0 * x / kPi - 1.0);
  };
}

Angle axis_angle(AliceAxis alice, BobAxis bob, Angle theta_a, Angle theta_b) {
  const bool a_tilted = alice == AliceAxis::kA;
  const bool b_tilted = bob == BobAxis::kB;
  if (!a_tilted && !b_tilted) return Angle(0.0);
  if (a_tilted && !b_tilted) return theta_a;
  if (!a_tilted && b_tilted) return theta_b;
  // e_A = (sin ta, 0, cos ta), e_B = (0, sin tb, cos tb).
  const double dot = std::cos(theta_a.value()) * std::cos(theta_b.value());
  return Angle(std::acos(std::clamp(dot, -1.0, 1.0)));
}

OutcomePair sample_pair(const CorrelationModel& model, Angle theta,
                        SplitMix64& rng) {
  const double c = model.kernel(theta);
  const int a = rng.uniform() < 0.5 ? 1 : -1;
  const bool same = rng.uniform() < 0.5 * (1.0 + c);
  return {a, same ? a : -a};
}

OutcomePair hidden_variable_sample(Angle theta, SplitMix64& rng) {
  const double st = std::sin(theta.value());
  const double ct = std::cos(theta.value());
  while (true) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * kPi * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double jx = r * std::cos(phi);
    const double along_1 = z;                    // e1 = e_z
    const double along_2 = -(st * jx + ct * z);  // e2 . (-J)
    if (along_1 == 0.0 || along_2 == 0.0) continue;
    return {along_1 > 0 ? 1 : -1, along_2 > 0 ? 1 : -1};
  }
}

}  // namespace corrgame
