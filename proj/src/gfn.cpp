#include "corrgame/gfn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "corrgame/error.hpp"

namespace corrgame {

namespace {

constexpr double kJoinTol = 1e-12;
constexpr double kValueTol = 1e-14;
constexpr double kDedupTol = 1e-12;
constexpr double kLimitGap = 1e-12;

struct ImageInterval {
  double lo, hi;
};

ImageInterval image_of(const Segment& s) {
  return {std::min(s.v_lo, s.v_hi), std::max(s.v_lo, s.v_hi)};
}

}  // namespace

double Segment::value_at(double theta) const {
  if (theta == hi) return v_hi;
  if (theta == lo) return v_lo;
  const double f = (theta - lo) / (hi - lo);
  return v_lo + f * (v_hi - v_lo);
}

bool Segment::contains(double theta) const {
  const bool above_lo = theta > lo || (lo_closed && theta == lo);
  const bool below_hi = theta < hi || (hi_closed && theta == hi);
  return above_lo && below_hi;
}

GTraits classify(const std::vector<Segment>& segments) {
  GTraits t;
  t.continuous = true;
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    if (std::abs(segments[k].v_hi - segments[k + 1].v_lo) > kJoinTol) {
      t.continuous = false;
      t.discontinuities.push_back(segments[k].hi);
    }
  }

  t.invertible = true;
  for (const auto& s : segments) {
    if (s.v_lo == s.v_hi) t.invertible = false;
  }
  // Images may touch in a single point (g4, g5, g7 reach delta twice at
  // branch ends); any overlap of positive length breaks invertibility.
  for (std::size_t a = 0; a < segments.size() && t.invertible; ++a) {
    for (std::size_t b = a + 1; b < segments.size(); ++b) {
      const auto ia = image_of(segments[a]);
      const auto ib = image_of(segments[b]);
      const double overlap = std::min(ia.hi, ib.hi) - std::max(ia.lo, ib.lo);
      if (overlap > kJoinTol) {
        t.invertible = false;
        break;
      }
    }
  }
  return t;
}

GFunction::GFunction(std::string name, std::vector<Segment> segments,
                     GParams params)
    : name_(std::move(name)),
      segments_(std::move(segments)),
      params_(std::move(params)) {
  auto fail = [this](const std::string& why) {
    throw Error(ErrorCode::kInvalidGFunction,
                fmt::format("g-function '{}': {}", name_, why));
  };
  if (segments_.empty()) fail("no segments");

  for (auto& s : segments_) {
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) ||
        !std::isfinite(s.v_lo) || !std::isfinite(s.v_hi)) {
      fail("non-finite segment data");
    }
  }
  auto& first = segments_.front();
  auto& last = segments_.back();
  if (std::abs(first.lo) > kJoinTol) fail("first segment must start at 0");
  if (std::abs(last.hi - kPi) > kJoinTol) fail("last segment must end at pi");
  first.lo = 0.0;
  last.hi = kPi;
  if (!first.lo_closed) fail("theta = 0 is not covered");
  if (!last.hi_closed) fail("theta = pi is not covered");

  for (std::size_t k = 0; k < segments_.size(); ++k) {
    auto& s = segments_[k];
    if (!(s.lo < s.hi)) fail(fmt::format("segment {} has empty interval", k));
    for (double v : {s.v_lo, s.v_hi}) {
      if (v < -kJoinTol || v > 1.0 + kJoinTol) {
        fail(fmt::format("segment {} leaves [0,1] (value {})", k, v));
      }
    }
    s.v_lo = std::clamp(s.v_lo, 0.0, 1.0);
    s.v_hi = std::clamp(s.v_hi, 0.0, 1.0);
    if (k + 1 < segments_.size()) {
      auto& next = segments_[k + 1];
      if (std::abs(s.hi - next.lo) > kJoinTol) {
        fail(fmt::format("gap or overlap between segments {} and {}", k, k + 1));
      }
      next.lo = s.hi;
      if (s.hi_closed == next.lo_closed) {
        fail(fmt::format("breakpoint {} must be claimed by exactly one segment",
                         s.hi));
      }
    }
  }
  traits_ = classify(segments_);
}

std::vector<double> GFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
    out.push_back(segments_[k].hi);
  }
  return out;
}

double GFunction::snap(double theta) const {
  if (std::abs(theta) <= kBreakpointSnap) return 0.0;
  if (std::abs(theta - kPi) <= kBreakpointSnap) return kPi;
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
    const double b = segments_[k].hi;
    if (std::abs(theta - b) <= kBreakpointSnap) return b;
  }
  return theta;
}

double GFunction::eval(double theta) const {
  const double t = snap(Angle(theta).value());
  for (const auto& s : segments_) {
    if (s.contains(t)) return s.value_at(t);
  }
  // Unreachable for a validated partition.
  throw Error(ErrorCode::kInvalidGFunction,
              fmt::format("no segment claims theta = {}", t));
}

Probability GFunction::eval(Angle theta) const {
  return Probability(eval(theta.value()));
}

bool GFunction::limit(double theta, Side side, double& out) const {
  const double t = snap(theta);
  if (side < 0) {
    if (t <= 0.0) return false;
    for (const auto& s : segments_) {
      if (s.lo < t && t <= s.hi) {
        out = s.value_at(t);
        return true;
      }
    }
  } else if (side > 0) {
    if (t >= kPi) return false;
    for (const auto& s : segments_) {
      if (s.lo <= t && t < s.hi) {
        out = s.value_at(t);
        return true;
      }
    }
  }
  return false;
}

std::vector<PreimagePoint> GFunction::preimage(Probability prob) const {
  const double p = prob.value();
  std::vector<PreimagePoint> raw;
  auto endpoint = [&raw](double theta, bool closed, Side inward, bool plateau) {
    raw.push_back({theta, !closed, closed ? 0 : inward, plateau});
  };

  for (const auto& s : segments_) {
    if (s.v_lo == s.v_hi) {
      if (std::abs(p - s.v_lo) <= kValueTol) {
        endpoint(s.lo, s.lo_closed, +1, true);
        endpoint(s.hi, s.hi_closed, -1, true);
      }
      continue;
    }
    if (std::abs(p - s.v_lo) <= kValueTol) {
      endpoint(s.lo, s.lo_closed, +1, false);
      continue;
    }
    if (std::abs(p - s.v_hi) <= kValueTol) {
      endpoint(s.hi, s.hi_closed, -1, false);
      continue;
    }
    const double f = (p - s.v_lo) / (s.v_hi - s.v_lo);
    if (f > 0.0 && f < 1.0) {
      raw.push_back({s.lo + f * (s.hi - s.lo), false, 0, false});
    }
  }

  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.theta < b.theta; });
  std::vector<PreimagePoint> out;
  for (const auto& pt : raw) {
    if (!out.empty() && std::abs(out.back().theta - pt.theta) <= kDedupTol) {
      auto& kept = out.back();
      if (!pt.limit_only) {
        kept.limit_only = false;
        kept.side = 0;
      }
      kept.plateau = kept.plateau || pt.plateau;
      continue;
    }
    out.push_back(pt);
  }
  return out;
}

Probability GFunction::big_g(double x) const {
  if (!(x >= -1.0 - 1e-12 && x <= 1.0 + 1e-12)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("G argument {} outside [-1, 1]", x));
  }
  x = std::clamp(x, -1.0, 1.0);
  // cos(pi/2) evaluates to 6e-17; a zero correlation should land on pi/2.
  if (std::abs(x) < 1e-15) x = 0.0;
  return Probability(eval(0.5 * kPi * (1.0 + x)));
}

Probability GFunction::q_transform_angle(Angle theta) const {
  return big_g(-std::cos(theta.value()));
}

double GFunction::q_transform_angle_limit(double theta, Side side) const {
  // x(theta) = pi (1 - cos theta) / 2 is increasing, so the side carries
  // over unchanged.
  const double x = 0.5 * kPi * (1.0 - std::cos(Angle(theta).value()));
  double v = 0.0;
  if (side != 0 && limit(x, side, v)) return v;
  return eval(x);
}

Probability GFunction::q_transform(Probability p) const {
  if (!traits_.invertible) {
    throw Error(ErrorCode::kNonInvertible,
                fmt::format("g-function '{}' is not invertible; use the "
                            "angle-first transform",
                            name_));
  }
  const auto pts = preimage(p);
  if (pts.empty()) {
    throw Error(ErrorCode::kDomain,
                fmt::format("probability {} is not attained by '{}'",
                            p.value(), name_));
  }
  const double q = q_transform_angle(Angle(pts.front().theta)).value();
  for (const auto& pt : pts) {
    const double other = q_transform_angle(Angle(pt.theta)).value();
    if (std::abs(other - q) > 1e-12) {
      throw Error(ErrorCode::kNonInvertible,
                  fmt::format("probability {} has preimages with different "
                              "transforms under '{}'",
                              p.value(), name_));
    }
  }
  return Probability(q);
}

std::vector<TransformImage> GFunction::transform_preimage(
    double p_target, const AngleInverse& inverse) const {
  std::vector<TransformImage> images;
  for (const auto& pt : preimage(Probability(p_target))) {
    for (const auto& root : inverse(pt.theta)) {
      const double theta = snap(root.theta);
      if (!pt.limit_only) {
        const double here = eval(theta);
        images.push_back({here, theta, false, 0});
        for (Side s : {-1, +1}) {
          double v = 0.0;
          if (limit(theta, s, v) && std::abs(v - here) > kLimitGap) {
            images.push_back({v, theta, true, s});
          }
        }
      } else {
        const Side s = pt.side * root.direction;
        double v = 0.0;
        if (s != 0 && limit(theta, s, v)) {
          images.push_back({v, theta, true, s});
        }
      }
    }
  }

  std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.side < b.side;
  });
  std::vector<TransformImage> out;
  for (const auto& im : images) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& o) {
      return std::abs(o.theta - im.theta) <= kDedupTol && o.side == im.side &&
             std::abs(o.p - im.p) <= kDedupTol;
    });
    if (!dup) out.push_back(im);
  }
  return out;
}

std::vector<TransformImage> GFunction::q_preimage(Probability p_target) const {
  return transform_preimage(p_target.value(), singlet_angle_inverse);
}

std::vector<AngleRoot> singlet_angle_inverse(double x) {
  const double c = std::clamp(1.0 - 2.0 * x / kPi, -1.0, 1.0);
  // Same end snapping as the model inverses: acos(1 - ulp) is 1.5e-8.
  if (c >= 1.0 - 1e-15) return {{0.0, +1}};
  if (c <= -1.0 + 1e-15) return {{kPi, +1}};
  return {{std::acos(c), +1}};
}

// --- catalog ---------------------------------------------------------------

namespace {

double require(const GParams& params, const std::string& key, double lo,
               double hi) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorCode::kParamOutOfRange,
                fmt::format("missing parameter '{}'", key));
  }
  const double v = it->second;
  if (!(v > lo && v < hi)) {
    throw Error(ErrorCode::kParamOutOfRange,
                fmt::format("parameter {} = {} outside ({}, {})", key, v, lo, hi));
  }
  return v;
}

void reject_extra(const std::string& name, const GParams& params,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return key == a; });
    if (!ok) {
      throw Error(ErrorCode::kParamOutOfRange,
                  fmt::format("'{}' takes no parameter '{}'", name, key));
    }
  }
}

// Two branches split at `at`: [0, at] closed, (at, pi] open on the left.
std::vector<Segment> two_branch(double at, double a0, double a1, double b0,
                                double b1) {
  return {Segment{0.0, at, true, true, a0, a1},
          Segment{at, kPi, false, true, b0, b1}};
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"g1", {}, "theta/pi"},
      {"g2", {}, "1 - theta/pi"},
      {"g3", {"delta", "epsilon"},
       "delta(1 - theta/eps) on [0,eps]; delta + (1-delta)(theta-eps)/(pi-eps) "
       "on (eps,pi]"},
      {"g4", {"delta"},
       "delta(1 - 2theta/pi) on [0,pi/2]; 1 - 2(1-delta)(theta-pi/2)/pi on "
       "(pi/2,pi]"},
      {"g5", {"delta"},
       "2(1-delta)theta/pi + delta on [0,pi/2]; 2delta(theta-pi/2)/pi on "
       "(pi/2,pi]"},
      {"g6", {"delta", "epsilon"},
       "(1-delta)theta/eps + delta on [0,eps]; delta(pi-theta)/(pi-eps) on "
       "(eps,pi]"},
      {"g7", {"delta", "epsilon"},
       "1 - (1-delta)theta/eps on [0,eps]; delta(theta-eps)/(pi-eps) on "
       "(eps,pi]"},
      {"g8", {}, "2theta/pi on [0,pi/2]; 1 - 2(theta-pi/2)/pi on (pi/2,pi]"},
  };
  return entries;
}

GFunction make_catalog(const std::string& name, const GParams& params) {
  const double half = kPi / 2;
  if (name == "g1") {
    reject_extra(name, params, {});
    return GFunction(name, {Segment{0.0, kPi, true, true, 0.0, 1.0}});
  }
  if (name == "g2") {
    reject_extra(name, params, {});
    return GFunction(name, {Segment{0.0, kPi, true, true, 1.0, 0.0}});
  }
  if (name == "g3") {
    reject_extra(name, params, {"delta", "epsilon"});
    const double d = require(params, "delta", 0.0, 1.0);
    const double e = require(params, "epsilon", 0.0, kPi);
    return GFunction(name, two_branch(e, d, 0.0, d, 1.0), params);
  }
  if (name == "g4") {
    reject_extra(name, params, {"delta"});
    const double d = require(params, "delta", 0.0, 1.0);
    return GFunction(name, two_branch(half, d, 0.0, 1.0, d), params);
  }
  if (name == "g5") {
    reject_extra(name, params, {"delta"});
    const double d = require(params, "delta", 0.0, 1.0);
    return GFunction(name, two_branch(half, d, 1.0, 0.0, d), params);
  }
  if (name == "g6") {
    reject_extra(name, params, {"delta", "epsilon"});
    const double d = require(params, "delta", 0.0, 1.0);
    const double e = require(params, "epsilon", 0.0, kPi);
    return GFunction(name, two_branch(e, d, 1.0, d, 0.0), params);
  }
  if (name == "g7") {
    reject_extra(name, params, {"delta", "epsilon"});
    const double d = require(params, "delta", 0.0, 1.0);
    const double e = require(params, "epsilon", 0.0, kPi);
    return GFunction(name, two_branch(e, 1.0, d, 0.0, d), params);
  }
  if (name == "g8") {
    reject_extra(name, params, {});
    return GFunction(name, two_branch(half, 0.0, 1.0, 1.0, 0.0));
  }
  throw Error(ErrorCode::kUnknownName,
              fmt::format("unknown g-function '{}'", name));
}

}  // namespace corrgame
