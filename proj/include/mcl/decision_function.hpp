#pragma once

#include <cmath>
#include <cstdint>
#include <variant>

#include "mcl/domain.hpp"
#include "mcl/rng.hpp"

namespace mcl {

// The three 1-Lipschitz decision-function families used at tree nodes.
// Sign convention: f <= 0 routes to the minus child, f >= 0 to the plus
// child; a query descends both sides while |f(center)| < radius.

/// f(w) = (rho(plus, w) - rho(minus, w)) / 2
struct VantagePair {
  Point plus;
  Point minus;
  bool operator==(const VantagePair&) const = default;
};

/// f(w) = rho(center, w) - radius, radius = covering radius of the minus
/// bin, precomputed at build time.
struct BallAround {
  Point center;
  double radius = 0.0;
  bool operator==(const BallAround&) const = default;
};

/// f(w) = rho(anchor, w) - threshold; the anchor need not be a datapoint.
struct PivotThreshold {
  Point anchor;
  double threshold = 0.0;
  bool operator==(const PivotThreshold&) const = default;
};

struct DecisionFunction {
  DomainSpec domain;
  std::variant<VantagePair, BallAround, PivotThreshold> fn;
  bool operator==(const DecisionFunction&) const = default;
};

DecisionFunction make_vantage_pair(const DomainSpec& spec, Point plus, Point minus);
DecisionFunction make_ball(const DomainSpec& spec, Point center, double radius);
DecisionFunction make_pivot(const DomainSpec& spec, Point anchor, double threshold);

/// Pure evaluation; throws Errc::dimension_mismatch if the point does not
/// belong to the function's domain.
double evaluate(const DecisionFunction& f, const Point& w);

/// Max over sampled pairs of |f(x)-f(y)| - rho(x,y). A correct
/// 1-Lipschitz function stays <= ~1e-9 (floating error only).
double check_lipschitz(const DecisionFunction& f, std::uint64_t seed, std::uint64_t trials);

/// Same check for an arbitrary callable on the given domain; used to
/// exhibit violations for deliberately corrupted functions.
template <typename Fn>
double check_lipschitz_fn(const DomainSpec& spec, Fn&& fn, std::uint64_t seed,
                          std::uint64_t trials) {
  if (trials < 1) throw Error(Errc::invalid_argument, "check_lipschitz: trials must be >= 1");
  double worst = -1e300;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Point x = sample_point(spec, seed, streams::kLipschitz, 2 * i);
    const Point y = sample_point(spec, seed, streams::kLipschitz, 2 * i + 1);
    const double gap = std::abs(fn(x) - fn(y)) - distance(spec, x, y);
    if (gap > worst) worst = gap;
  }
  return worst;
}

}  // namespace mcl
