#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcl/error.hpp"

namespace mcl {

/// The metric-measure domains used as workloads. Each comes with a
/// canonical i.i.d. sampler and a normalization constant chosen so the
/// expected distance between two random points is Theta(1):
///   hamming    {0,1}^d, bit disagreements / d
///   unit_cube  [0,1]^d, Euclidean / sqrt(d)
///   gaussian   N(0, I_d), Euclidean / sqrt(2d)
///   sphere     S^{d-1}, chordal / sqrt(2)
enum class DomainKind : std::uint8_t { hamming = 0, unit_cube = 1, gaussian = 2, sphere = 3 };

const char* to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

struct DomainSpec {
  DomainKind kind = DomainKind::hamming;
  std::uint32_t dim = 1;
  double norm = 1.0;  // c_rho, multiplies the raw metric

  bool operator==(const DomainSpec&) const = default;
};

/// Domain descriptor with the canonical normalization constant for the kind.
DomainSpec make_domain(DomainKind kind, std::uint32_t dim);

/// A point of some domain: bit-packed words for the Hamming cube
/// (64 coordinates per word, tail bits zero), contiguous reals otherwise.
struct Point {
  std::vector<std::uint64_t> bits;
  std::vector<double> reals;

  bool operator==(const Point&) const = default;

  bool is_binary() const noexcept { return reals.empty(); }

  static Point zeros_bits(std::uint32_t dim) {
    Point p;
    p.bits.assign((dim + 63) / 64, 0);
    return p;
  }

  bool get_bit(std::uint32_t i) const { return (bits[i / 64] >> (i % 64)) & 1u; }

  void set_bit(std::uint32_t i, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (v)
      bits[i / 64] |= mask;
    else
      bits[i / 64] &= ~mask;
  }

  /// Number of set bits (binary points only).
  std::uint64_t popcount() const noexcept;
};

/// Parses "0110..." into a packed binary point.
Point point_from_bit_string(const std::string& s);
Point point_from_reals(std::vector<double> coords);

/// Normalized metric of the domain. Symmetric, zero iff equal
/// coordinates. Throws Errc::dimension_mismatch on size mismatch.
double distance(const DomainSpec& spec, const Point& x, const Point& y);

/// Unnormalized squared Euclidean distance between real coordinate vectors.
double squared_euclidean(const std::vector<double>& a, const std::vector<double>& b);

/// n i.i.d. points from the domain's canonical measure. Point i is drawn
/// from substream (seed, kDataset, i), so samples are replayable and
/// prefix-stable in n.
std::vector<Point> sample_points(const DomainSpec& spec, std::uint64_t seed, std::uint64_t n);

/// Single point from an explicit substream index (used for query centers,
/// pivots and Monte Carlo draws).
Point sample_point(const DomainSpec& spec, std::uint64_t seed, std::uint64_t purpose,
                   std::uint64_t index);

struct DistanceStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of E rho(x,y) over independent pairs.
DistanceStats mean_distance_estimate(const DomainSpec& spec, std::uint64_t seed,
                                     std::uint64_t pairs);

}  // namespace mcl
