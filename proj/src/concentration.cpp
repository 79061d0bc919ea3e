#include "mcl/concentration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "mcl/parallel.hpp"
#include "mcl/rng.hpp"

namespace mcl {

using boost::multiprecision::cpp_int;

double chernoff_okamoto_bound(double eps, std::uint32_t d) {
  if (!(eps > 0.0) || eps > 1.0)
    throw Error(Errc::invalid_argument, "chernoff_okamoto_bound: eps must be in (0, 1]");
  if (d < 1) throw Error(Errc::invalid_argument, "chernoff_okamoto_bound: d must be >= 1");
  return std::exp(-3.0 * eps * eps * static_cast<double>(d) / 4.0);
}

double binomial_tail_half(std::uint32_t d, std::int64_t m) {
  if (m > static_cast<std::int64_t>(d)) return 0.0;
  if (m <= 0) return 1.0;
  // exact integer sum of C(d, k) for k >= m, then one rounding on divide
  cpp_int coeff = 1;  // C(d, 0)
  cpp_int sum = 0;
  for (std::uint32_t k = 0; k <= d; ++k) {
    if (static_cast<std::int64_t>(k) >= m) sum += coeff;
    if (k < d) coeff = coeff * (d - k) / (k + 1);
  }
  const cpp_int denom = cpp_int(1) << d;
  return sum.convert_to<double>() / denom.convert_to<double>();
}

namespace {

std::int64_t grid_offset(std::uint32_t d, double eps, const char* who) {
  const double t = eps * static_cast<double>(d);
  const auto rounded = static_cast<std::int64_t>(std::llround(t));
  if (std::abs(t - static_cast<double>(rounded)) > 1e-9 || rounded < 0)
    throw Error(Errc::bad_grid, std::string(who) +
                                    ": eps*d must be a non-negative integer; valid grid is "
                                    "eps = t/" +
                                    std::to_string(d) + ", t = 0.." + std::to_string(d));
  return rounded;
}

}  // namespace

double halfcube_alpha_exact(std::uint32_t d, double eps) {
  if (d < 1) throw Error(Errc::invalid_argument, "halfcube_alpha_exact: d must be >= 1");
  const std::int64_t t = grid_offset(d, eps, "halfcube_alpha_exact");
  return binomial_tail_half(d, static_cast<std::int64_t>(d / 2) + t + 1);
}

namespace {

// Witnesses are 1-Lipschitz functions g with threshold at the empirical
// median; {g > theta + eps} then lies outside the eps-neighbourhood of
// the measure-1/2 set {g <= theta}. On the Hamming cube all shipped
// witnesses take values on the lattice k/d, so counting is done on
// integer levels to keep the estimate aligned with the exact binomial
// tail.
struct Witness {
  std::string name;
  std::function<double(const Point&)> value;          // real domains
  std::function<std::int64_t(const Point&)> level;    // hamming lattice
};

std::vector<Witness> witness_battery(const DomainSpec& spec, std::uint64_t seed) {
  std::vector<Witness> w;
  if (spec.kind == DomainKind::hamming) {
    w.push_back({"coordinate_sum", {}, [](const Point& p) {
                   return static_cast<std::int64_t>(p.popcount());
                 }});
    const Point ref = sample_point(spec, seed, streams::kWitness, 0);
    w.push_back({"distance_to_point", {}, [ref](const Point& p) {
                   std::uint64_t diff = 0;
                   for (std::size_t i = 0; i < p.bits.size(); ++i)
                     diff += std::popcount(p.bits[i] ^ ref.bits[i]);
                   return static_cast<std::int64_t>(diff);
                 }});
  } else {
    const double c = spec.norm;
    w.push_back({"first_coordinate", [c](const Point& p) { return p.reals[0] * c; }, {}});
    const Point ref = sample_point(spec, seed, streams::kWitness, 0);
    const DomainSpec s = spec;
    w.push_back({"distance_to_point",
                 [s, ref](const Point& p) { return distance(s, ref, p); },
                 {}});
  }
  return w;
}

}  // namespace

ConcentrationEstimate empirical_alpha_lower(const DomainSpec& spec, std::uint64_t seed,
                                            std::uint64_t samples,
                                            std::vector<double> eps_grid) {
  if (samples < 1000)
    throw Error(Errc::invalid_argument, "empirical_alpha_lower: samples must be >= 1000");

  ConcentrationEstimate est;
  est.method = "empirical_lower";
  est.spec = spec;
  est.samples = samples;
  est.eps_grid = std::move(eps_grid);
  est.alpha.assign(est.eps_grid.size(), 0.0);
  est.stderrs.assign(est.eps_grid.size(), 0.0);

  const bool lattice = spec.kind == DomainKind::hamming;
  std::vector<std::int64_t> offsets;
  if (lattice) {
    offsets.reserve(est.eps_grid.size());
    for (const double eps : est.eps_grid)
      offsets.push_back(grid_offset(spec.dim, eps, "empirical_alpha_lower"));
  }

  const auto battery = witness_battery(spec, seed);
  for (std::size_t wi = 0; wi < battery.size(); ++wi) {
    const Witness& w = battery[wi];

    // pass 1: threshold at the empirical lower median
    std::vector<double> vals;
    std::vector<std::int64_t> levels;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const Point p = sample_point(spec, seed, streams::kMonteCarlo, 2 * (wi * samples + i));
      if (lattice)
        levels.push_back(w.level(p));
      else
        vals.push_back(w.value(p));
    }
    std::int64_t theta_level = 0;
    double theta = 0.0;
    if (lattice) {
      std::sort(levels.begin(), levels.end());
      theta_level = levels[(levels.size() - 1) / 2];
    } else {
      std::sort(vals.begin(), vals.end());
      theta = vals[(vals.size() - 1) / 2];
    }

    // pass 2: fresh sample, tail counts per grid eps
    std::vector<std::uint64_t> counts(est.eps_grid.size(), 0);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const Point p = sample_point(spec, seed, streams::kMonteCarlo, 2 * (wi * samples + i) + 1);
      if (lattice) {
        const std::int64_t lv = w.level(p);
        for (std::size_t g = 0; g < counts.size(); ++g)
          if (lv >= theta_level + offsets[g] + 1) counts[g]++;
      } else {
        const double v = w.value(p);
        for (std::size_t g = 0; g < counts.size(); ++g)
          if (v > theta + est.eps_grid[g]) counts[g]++;
      }
    }
    for (std::size_t g = 0; g < counts.size(); ++g) {
      const double p = static_cast<double>(counts[g]) / static_cast<double>(samples);
      if (p > est.alpha[g]) {
        est.alpha[g] = p;
        est.stderrs[g] = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
      }
    }
  }
  return est;
}

NNRadiusStats nn_radius_stats(const DomainSpec& spec, std::uint64_t n, std::uint64_t queries,
                              std::uint64_t seed, std::uint32_t threads) {
  if (n < 2) throw Error(Errc::invalid_argument, "nn_radius_stats: n must be >= 2");
  if (queries < 1) throw Error(Errc::invalid_argument, "nn_radius_stats: queries must be >= 1");

  const std::vector<Point> data = sample_points(spec, seed, n);
  std::vector<double> radii(queries, 0.0);
  std::vector<std::uint32_t> ties(queries, 0);
  parallel_for(queries, threads, [&](std::uint64_t qi) {
    const Point w = sample_point(spec, seed, streams::kQueries, qi);
    double best = distance(spec, w, data[0]);
    std::uint32_t count = 1;
    for (std::uint64_t i = 1; i < n; ++i) {
      const double d = distance(spec, w, data[i]);
      if (d < best) {
        best = d;
        count = 1;
      } else if (d == best) {
        ++count;
      }
    }
    radii[qi] = best;
    ties[qi] = count;
  });

  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };

  NNRadiusStats stats;
  stats.n = n;
  stats.d = spec.dim;
  stats.queries = queries;
  stats.seed = seed;
  stats.p10 = quantile(0.10);
  stats.median = quantile(0.50);
  stats.p90 = quantile(0.90);
  stats.spread = stats.p90 - stats.p10;
  double sum = 0.0;
  for (const double r : radii) sum += r;
  stats.mean = sum / static_cast<double>(queries);
  double tsum = 0.0;
  for (const std::uint32_t t : ties) tsum += t;
  stats.occupancy = tsum / static_cast<double>(queries);
  return stats;
}

double nn_median_prediction(std::uint32_t d, std::uint64_t n) {
  if (d < 1 || n < 2)
    throw Error(Errc::invalid_argument, "nn_median_prediction: need d >= 1, n >= 2");
  const double target = 1.0 - std::log2(static_cast<double>(n)) / static_cast<double>(d);
  if (target <= 0.0) return 0.0;
  if (target >= 1.0) return 0.5;
  const auto h2 = [](double r) { return -r * std::log2(r) - (1.0 - r) * std::log2(1.0 - r); };
  double lo = 1e-15, hi = 0.5 - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (h2(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double subspace_alpha_bound(double alpha_omega_at_half_eps, double mu_c) {
  if (!(mu_c > 0.0) || mu_c > 1.0)
    throw Error(Errc::invalid_argument, "subspace_alpha_bound: mu(C) must be in (0, 1]");
  if (alpha_omega_at_half_eps < 0.0 || alpha_omega_at_half_eps > 1.0)
    throw Error(Errc::invalid_argument, "subspace_alpha_bound: alpha must be in [0, 1]");
  return std::min(1.0, alpha_omega_at_half_eps / mu_c);
}

BinAccessPrediction bin_access_prediction(double m) {
  if (!(m >= 4.0)) throw Error(Errc::invalid_argument, "bin_access_prediction: m must be >= 4");
  return {0.5 * std::sqrt(m), 0.5 / std::sqrt(m)};
}

MeasureEstimate neighborhood_measure(const DomainSpec& spec, const SetSpec& set, double eps,
                                     std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(Errc::invalid_argument, "neighborhood_measure: samples >= 1");
  if (eps < 0.0) throw Error(Errc::invalid_argument, "neighborhood_measure: eps must be >= 0");

  std::vector<Point> witnesses;
  if (!set.dist_to_set) {
    constexpr std::uint64_t kWitnessCap = 4096;
    for (std::uint64_t i = 0; i < samples && witnesses.size() < kWitnessCap; ++i) {
      Point p = sample_point(spec, seed, streams::kWitness, i + 1);
      if (set.contains(p)) witnesses.push_back(std::move(p));
    }
    if (witnesses.empty())
      throw Error(Errc::witness_empty,
                  "neighborhood_measure: predicate '" + set.name +
                      "' never fired within the witness budget");
  }

  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Point p = sample_point(spec, seed, streams::kMonteCarlo, i);
    bool inside = set.contains(p);
    if (!inside) {
      if (set.dist_to_set) {
        inside = set.dist_to_set(p) <= eps;
      } else {
        for (const Point& w : witnesses) {
          if (distance(spec, p, w) <= eps) {
            inside = true;
            break;
          }
        }
      }
    }
    if (inside) ++hits;
  }
  MeasureEstimate est;
  est.samples = samples;
  est.value = static_cast<double>(hits) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(samples));
  return est;
}

SetSpec halfcube_set(const DomainSpec& spec) {
  if (spec.kind != DomainKind::hamming)
    throw Error(Errc::invalid_argument, "halfcube_set: requires a Hamming domain");
  const std::uint64_t half = spec.dim / 2;
  const double inv_d = 1.0 / static_cast<double>(spec.dim);
  SetSpec s;
  s.name = "halfcube";
  s.contains = [half](const Point& p) { return p.popcount() <= half; };
  s.dist_to_set = [half, inv_d](const Point& p) {
    const std::uint64_t k = p.popcount();
    return k <= half ? 0.0 : static_cast<double>(k - half) * inv_d;
  };
  return s;
}

SetSpec whole_space_set() {
  SetSpec s;
  s.name = "whole_space";
  s.contains = [](const Point&) { return true; };
  s.dist_to_set = [](const Point&) { return 0.0; };
  return s;
}

}  // namespace mcl
