#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcl/domain.hpp"
#include "mcl/rng.hpp"

namespace mcl {

/// Concept parameters are flat real vectors whose interpretation belongs
/// to the class (e.g. balls store center coordinates followed by the
/// radius).
using ParamVec = std::vector<double>;

/// A family of subsets of a ground set, given by a pure membership
/// predicate over (parameter, point). Exactly one of three access modes:
///   - `params` non-empty: a globally finite class,
///   - `canonical_params`: per-point-set finite enumeration realizing
///     every achievable trace (exact shattering decisions),
///   - `sample`: randomized parameter draws under an explicit budget
///     (positive answers carry witnesses; negatives are "not refuted").
struct ConceptClass {
  std::string name;
  std::function<bool(const ParamVec&, const Point&)> member;
  std::vector<ParamVec> params;
  std::function<std::vector<ParamVec>(std::span<const Point>)> canonical_params;
  std::function<ParamVec(CounterRng&, std::span<const Point>)> sample;

  bool exact() const { return !params.empty() || static_cast<bool>(canonical_params); }
  bool finite() const { return !params.empty(); }
};

struct ShatterReport {
  std::vector<Point> points;
  bool shattered = false;
  bool exhaustive = false;           // false => a negative is only "not refuted"
  std::uint32_t missing_mask = 0;    // lowest unrealized subset when not shattered
  std::vector<ParamVec> witnesses;   // per subset mask when shattered
};

/// Tests whether the class shatters the k points (k <= 20). Exact for
/// enumerable classes; for sampled classes `budget` parameters are drawn
/// and a positive answer lists one witness concept per subset.
ShatterReport shatters(std::span<const Point> points, const ConceptClass& cls,
                       std::uint64_t budget, std::uint64_t seed = 0x5eed);

struct ShatterSearchResult {
  std::optional<ShatterReport> witness;
  std::uint64_t subsets_tried = 0;
};

/// Randomized search for a shattered k-subset of the sample:
/// `subset_trials` random k-subsets, each tested with `concept_budget`.
ShatterSearchResult find_shattered_subset(std::span<const Point> sample, const ConceptClass& cls,
                                          std::uint32_t k, std::uint64_t subset_trials,
                                          std::uint64_t concept_budget, std::uint64_t seed);

/// VC-dim bound 4s(t+2) for classes computed by s-parameter programs of
/// t arithmetic/comparison operations.
std::uint64_t goldberg_jerrum_bound(std::uint64_t s, std::uint64_t t);

/// VC-dim bound 4*h*p*log(2hp) for bins of metric trees of depth <= h
/// over decision classes of VC dimension <= p. Defaults to base-2 logs.
double bins_class_bound(std::uint64_t h, std::uint64_t p, double log_base = 2.0);

/// Sample size after which empirical measures of all concepts in a class
/// of VC dimension d are within eps of the truth with confidence
/// 1 - delta: ceil((128/eps^2) (d log((2e^2/eps) log(2e/eps)) + log(8/delta))).
/// Natural logarithms by default.
std::uint64_t sample_size_bound(double eps, double delta, std::uint64_t d,
                                double log_base = 2.718281828459045235);

/// sup over the (finite) class of |mu(A) - |X cap A|/n|, with mu supplied
/// by an exact measure oracle per concept.
double empirical_deviation(const ConceptClass& cls, const std::vector<Point>& dataset,
                           const std::function<double(const ParamVec&)>& measure_oracle);

// ---- fixture classes -------------------------------------------------

/// Closed intervals [lo, hi] on the line (= balls in R^1). Canonical
/// per-point-set enumeration; exact shattering decisions.
ConceptClass intervals_class();

/// Closed Euclidean balls in R^dim; randomized data-aware sampler.
ConceptClass euclidean_balls_class(std::uint32_t dim);

/// Axis-aligned boxes in R^dim; canonical per-point-set enumeration
/// (guarded, meant for small point sets).
ConceptClass axis_boxes_class(std::uint32_t dim);

/// All Hamming balls in {0,1}^d; globally finite, d <= 12.
ConceptClass hamming_balls_class(std::uint32_t d);

/// {x : sum x_i <= t} for t = -1..d on the Hamming cube; globally finite.
/// Exact measures are binomial tails.
ConceptClass sum_threshold_class(std::uint32_t d);

/// {x : x_1 <= theta} over the given thresholds (first coordinate; bit 0
/// on the Hamming cube).
ConceptClass first_coordinate_threshold_class(const DomainSpec& spec,
                                              std::vector<double> thresholds);

/// Upper bound d + floor(log2 d) on the VC dimension of Hamming balls
/// (finite-class log bound applied to d 2^d balls).
std::uint64_t hamming_balls_vc_upper_bound(std::uint32_t d);

}  // namespace mcl
