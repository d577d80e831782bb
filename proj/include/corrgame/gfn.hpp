#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "corrgame/types.hpp"

namespace corrgame {

// Breakpoint snapping radius used by GFunction::eval. Arguments closer than
// this to a breakpoint are evaluated at the breakpoint itself.
inline constexpr double kBreakpointSnap = 1e-13;

// One affine branch of a piecewise-linear g-function. The branch is given by
// its endpoint values; an open endpoint's value is the one-sided limit.
struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
  double v_lo = 0.0;
  double v_hi = 0.0;

  double slope() const { return (v_hi - v_lo) / (hi - lo); }
  // Affine value at theta (also valid as a limit at open endpoints).
  double value_at(double theta) const;
  bool contains(double theta) const;
};

struct GTraits {
  bool invertible = false;
  bool continuous = false;
  std::vector<double> discontinuities;
};

// Side from which a point is approached: -1 from below, +1 from above,
// 0 when the point itself is used.
using Side = int;

struct PreimagePoint {
  double theta = 0.0;
  bool limit_only = false;
  Side side = 0;
  // Set when the value is attained on a constant branch; theta is then one
  // endpoint of that plateau.
  bool plateau = false;
};

// A probability reached from a transform solution at a given angle.
struct TransformImage {
  double p = 0.0;
  double theta = 0.0;
  bool limit_only = false;
  Side side = 0;
};

// Solutions theta of x(theta) = x for a monotone-on-pieces angle map x(.).
// direction is the local sign of dx/dtheta.
struct AngleRoot {
  double theta = 0.0;
  int direction = 1;
};
using AngleInverse = std::function<std::vector<AngleRoot>(double x)>;

using GParams = std::map<std::string, double>;

// Piecewise-linear map [0,pi] -> [0,1] linking angles to probabilities.
// Immutable after construction.
class GFunction {
 public:
  // Validates that the segments partition [0,pi] and map into [0,1].
  GFunction(std::string name, std::vector<Segment> segments,
            GParams params = {});

  const std::string& name() const { return name_; }
  const GParams& params() const { return params_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const GTraits& traits() const { return traits_; }

  // Internal breakpoints (segment boundaries strictly inside (0,pi)).
  std::vector<double> breakpoints() const;

  Probability eval(Angle theta) const;
  double eval(double theta) const;

  // One-sided limit of g at theta. side=-1 needs theta > 0, side=+1 needs
  // theta < pi; returns false when the side does not exist.
  bool limit(double theta, Side side, double& out) const;

  std::vector<PreimagePoint> preimage(Probability p) const;

  // G(x) = g(pi (1 + x) / 2) for a correlation x in [-1, 1].
  Probability big_g(double x) const;

  // Angle-first singlet transform g(pi (1 - cos theta) / 2).
  Probability q_transform_angle(Angle theta) const;
  // One-sided limit of the angle-first transform as theta is approached from
  // `side`.
  double q_transform_angle_limit(double theta, Side side) const;

  // Q_g(p) = g(pi/2 (1 - cos g^{-1}(p))). Throws NonInvertible unless the
  // preimage of p is unambiguous.
  Probability q_transform(Probability p) const;

  // All probabilities p whose angle satisfies Q(theta) = p_target under the
  // singlet kernel.
  std::vector<TransformImage> q_preimage(Probability p_target) const;

  // Same as q_preimage for an arbitrary angle map x(theta), supplied through
  // its inverse.
  std::vector<TransformImage> transform_preimage(
      double p_target, const AngleInverse& inverse) const;

 private:
  double snap(double theta) const;

  std::string name_;
  std::vector<Segment> segments_;
  GParams params_;
  GTraits traits_;
};

// Recomputes the traits directly from a segment list.
GTraits classify(const std::vector<Segment>& segments);
inline GTraits classify(const GFunction& g) { return classify(g.segments()); }

// Catalog g-functions g1..g8. Parameters: "delta" in (0,1) for g3..g7,
// "epsilon" in (0,pi) for g3, g6, g7.
GFunction make_catalog(const std::string& name, const GParams& params = {});

struct CatalogEntry {
  std::string name;
  std::vector<std::string> params;
  std::string formula;
};
const std::vector<CatalogEntry>& catalog_entries();

// Inverse of the singlet map x(theta) = pi (1 - cos theta) / 2.
std::vector<AngleRoot> singlet_angle_inverse(double x);

}  // namespace corrgame
