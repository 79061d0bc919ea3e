#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcl/domain.hpp"

namespace mcl {

/// Gaussian upper bound on the Hamming cube's concentration function:
/// exp(-3 eps^2 d / 4). Valid for eps in (0, 1]; the defined value at
/// eps = 0 is 1/2, which the formula does not reproduce (it tends to 1),
/// so eps <= 0 is rejected.
double chernoff_okamoto_bound(double eps, std::uint32_t d);

/// Exact P(Bin(d,1/2) >= floor(d/2) + t + 1) with t = eps*d, i.e. the
/// measure not covered by the closed eps-neighbourhood of the majority
/// half-cube {x : sum x_i <= floor(d/2)}. A certified lower bound on the
/// cube's concentration function. eps*d must be integral (grid 1/d).
double halfcube_alpha_exact(std::uint32_t d, double eps);

/// Exact P(Bin(d,1/2) >= m); exposed for oracles and measure callbacks.
double binomial_tail_half(std::uint32_t d, std::int64_t m);

struct ConcentrationEstimate {
  std::vector<double> eps_grid;
  std::vector<double> alpha;    // non-increasing in eps
  std::vector<double> stderrs;  // zero for exact methods
  std::string method;           // chernoff_okamoto | exact_halfcube | empirical_lower
  DomainSpec spec;
  std::uint64_t samples = 0;
};

/// Statistical lower bound on alpha(eps) from a battery of measure-1/2
/// half-sets cut by 1-Lipschitz witnesses (first coordinate at its
/// median; coordinate sum on the Hamming cube; distance to a random
/// point at its median). Reports the max over the battery per grid eps.
ConcentrationEstimate empirical_alpha_lower(const DomainSpec& spec, std::uint64_t seed,
                                            std::uint64_t samples,
                                            std::vector<double> eps_grid);

struct NNRadiusStats {
  double p10 = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double mean = 0.0;
  double spread = 0.0;     // p90 - p10
  double occupancy = 0.0;  // mean count of datapoints at distance <= eps_NN
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t queries = 0;
  std::uint64_t seed = 0;
};

/// Samples a dataset of n points and `queries` centers from the same
/// measure, computes the nearest-neighbour radius of each center by
/// linear scan, and summarizes the distribution.
NNRadiusStats nn_radius_stats(const DomainSpec& spec, std::uint64_t n, std::uint64_t queries,
                              std::uint64_t seed, std::uint32_t threads = 1);

/// Entropy oracle for the Hamming cube: the radius r solving
/// 1 - H2(r) = log2(n)/d, the predicted location of the median
/// nearest-neighbour distance.
double nn_median_prediction(std::uint32_t d, std::uint64_t n);

/// Subspace concentration transfer: alpha_C(eps) <= alpha(eps/2)/mu(C),
/// clamped to 1.
double subspace_alpha_bound(double alpha_omega_at_half_eps, double mu_c);

struct BinAccessPrediction {
  double min_bins_met = 0.0;        // m^(1/2) / 2
  double exceptional_measure = 0.0; // m^(-1/2) / 2
};

/// Formula pair used to annotate sweeps; requires m >= 4.
BinAccessPrediction bin_access_prediction(double m);

/// A measurable subset of a domain. `contains` decides membership;
/// `dist_to_set` (optional) returns the exact distance to the set. When
/// absent, distances are estimated against a stored witness sample,
/// which overestimates them, so the neighbourhood measure comes out as a
/// conservative lower bound.
struct SetSpec {
  std::string name;
  std::function<bool(const Point&)> contains;
  std::function<double(const Point&)> dist_to_set;  // may be empty
};

struct MeasureEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo estimate of mu(A_eps), the closed eps-neighbourhood of A.
MeasureEstimate neighborhood_measure(const DomainSpec& spec, const SetSpec& set, double eps,
                                     std::uint64_t samples, std::uint64_t seed);

/// The majority half-cube {x : sum x_i <= floor(d/2)} with its exact
/// distance function; Hamming domains only.
SetSpec halfcube_set(const DomainSpec& spec);
SetSpec whole_space_set();

}  // namespace mcl
