#include "mcl/domain.hpp"

#include <bit>
#include <cmath>

#include "mcl/rng.hpp"

namespace mcl {

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::hamming: return "hamming";
    case DomainKind::unit_cube: return "unit-cube";
    case DomainKind::gaussian: return "gaussian";
    case DomainKind::sphere: return "sphere";
  }
  return "?";
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "hamming") return DomainKind::hamming;
  if (name == "unit-cube" || name == "unit_cube" || name == "cube") return DomainKind::unit_cube;
  if (name == "gaussian") return DomainKind::gaussian;
  if (name == "sphere") return DomainKind::sphere;
  throw Error(Errc::invalid_argument, "unknown domain kind '" + name + "'");
}

DomainSpec make_domain(DomainKind kind, std::uint32_t dim) {
  if (dim < 1) throw Error(Errc::invalid_argument, "domain dimension must be >= 1");
  DomainSpec spec;
  spec.kind = kind;
  spec.dim = dim;
  switch (kind) {
    case DomainKind::hamming: spec.norm = 1.0 / dim; break;
    case DomainKind::unit_cube: spec.norm = 1.0 / std::sqrt(static_cast<double>(dim)); break;
    case DomainKind::gaussian: spec.norm = 1.0 / std::sqrt(2.0 * dim); break;
    case DomainKind::sphere: spec.norm = 1.0 / std::sqrt(2.0); break;
  }
  return spec;
}

std::uint64_t Point::popcount() const noexcept {
  std::uint64_t c = 0;
  for (std::uint64_t w : bits) c += std::popcount(w);
  return c;
}

Point point_from_bit_string(const std::string& s) {
  Point p = Point::zeros_bits(static_cast<std::uint32_t>(s.size()));
  for (std::uint32_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      p.set_bit(i, true);
    else if (s[i] != '0')
      throw Error(Errc::invalid_argument, "bit string must contain only 0/1");
  }
  return p;
}

Point point_from_reals(std::vector<double> coords) {
  Point p;
  p.reals = std::move(coords);
  return p;
}

namespace {

void check_dims(const DomainSpec& spec, const Point& p, const char* role) {
  if (spec.kind == DomainKind::hamming) {
    const std::size_t words = (spec.dim + 63) / 64;
    if (p.reals.size() != 0 || p.bits.size() != words)
      throw Error(Errc::dimension_mismatch,
                  std::string(role) + ": point does not match hamming d=" +
                      std::to_string(spec.dim));
  } else {
    if (!p.bits.empty() || p.reals.size() != spec.dim)
      throw Error(Errc::dimension_mismatch,
                  std::string(role) + ": point does not match " +
                      std::string(to_string(spec.kind)) + " d=" + std::to_string(spec.dim));
  }
}

}  // namespace

double squared_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

double distance(const DomainSpec& spec, const Point& x, const Point& y) {
  check_dims(spec, x, "distance(x)");
  check_dims(spec, y, "distance(y)");
  if (spec.kind == DomainKind::hamming) {
    std::uint64_t diff = 0;
    for (std::size_t w = 0; w < x.bits.size(); ++w) diff += std::popcount(x.bits[w] ^ y.bits[w]);
    return static_cast<double>(diff) * spec.norm;
  }
  return std::sqrt(squared_euclidean(x.reals, y.reals)) * spec.norm;
}

namespace {

Point sample_one(const DomainSpec& spec, CounterRng& rng) {
  Point p;
  switch (spec.kind) {
    case DomainKind::hamming: {
      const std::size_t words = (spec.dim + 63) / 64;
      p.bits.resize(words);
      for (std::size_t w = 0; w < words; ++w) p.bits[w] = rng.next_u64();
      const std::uint32_t tail = spec.dim % 64;
      if (tail != 0) p.bits[words - 1] &= (std::uint64_t{1} << tail) - 1;
      break;
    }
    case DomainKind::unit_cube: {
      p.reals.resize(spec.dim);
      for (auto& v : p.reals) v = rng.next_unit();
      break;
    }
    case DomainKind::gaussian: {
      p.reals.resize(spec.dim);
      for (auto& v : p.reals) v = rng.next_gaussian();
      break;
    }
    case DomainKind::sphere: {
      p.reals.resize(spec.dim);
      for (;;) {
        double sq = 0.0;
        for (auto& v : p.reals) {
          v = rng.next_gaussian();
          sq += v * v;
        }
        if (sq > 1e-280) {
          const double inv = 1.0 / std::sqrt(sq);
          for (auto& v : p.reals) v *= inv;
          break;
        }
      }
      break;
    }
  }
  return p;
}

}  // namespace

std::vector<Point> sample_points(const DomainSpec& spec, std::uint64_t seed, std::uint64_t n) {
  if (n < 1) throw Error(Errc::invalid_argument, "sample_points: n must be >= 1");
  std::vector<Point> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    CounterRng rng = substream(seed, streams::kDataset, i);
    out.push_back(sample_one(spec, rng));
  }
  return out;
}

Point sample_point(const DomainSpec& spec, std::uint64_t seed, std::uint64_t purpose,
                   std::uint64_t index) {
  CounterRng rng = substream(seed, purpose, index);
  return sample_one(spec, rng);
}

DistanceStats mean_distance_estimate(const DomainSpec& spec, std::uint64_t seed,
                                     std::uint64_t pairs) {
  if (pairs < 1) throw Error(Errc::invalid_argument, "mean_distance_estimate: pairs must be >= 1");
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    CounterRng rng = substream(seed, streams::kPairs, i);
    const Point x = sample_one(spec, rng);
    const Point y = sample_one(spec, rng);
    const double d = distance(spec, x, y);
    sum += d;
    sumsq += d * d;
  }
  DistanceStats stats;
  stats.pairs = pairs;
  stats.seed = seed;
  stats.mean = sum / static_cast<double>(pairs);
  const double var = sumsq / static_cast<double>(pairs) - stats.mean * stats.mean;
  stats.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
  return stats;
}

}  // namespace mcl
