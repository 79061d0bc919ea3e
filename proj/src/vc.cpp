#include "mcl/vc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace mcl {

namespace {

std::uint32_t trace_mask(const ConceptClass& cls, const ParamVec& param,
                         std::span<const Point> points) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (cls.member(param, points[i])) mask |= (1u << i);
  return mask;
}

ShatterReport run_masks(std::span<const Point> points, const ConceptClass& cls,
                        const std::function<std::optional<ParamVec>()>& next_param,
                        bool exhaustive) {
  const auto k = static_cast<std::uint32_t>(points.size());
  const std::uint32_t total = 1u << k;
  ShatterReport rep;
  rep.points.assign(points.begin(), points.end());
  rep.exhaustive = exhaustive;
  rep.witnesses.assign(total, ParamVec{});
  std::vector<char> hit(total, 0);
  std::uint32_t found = 0;
  // the empty subset is realized by "no concept" by convention, so an
  // empty class still shatters the empty point set
  if (!hit[0]) {
    hit[0] = 1;
    ++found;
  }
  while (found < total) {
    const auto param = next_param();
    if (!param) break;
    const std::uint32_t m = trace_mask(cls, *param, points);
    if (!hit[m]) {
      hit[m] = 1;
      rep.witnesses[m] = *param;
      ++found;
    }
  }
  rep.shattered = found == total;
  if (!rep.shattered) {
    rep.witnesses.clear();
    for (std::uint32_t m = 0; m < total; ++m)
      if (!hit[m]) {
        rep.missing_mask = m;
        break;
      }
  }
  return rep;
}

}  // namespace

ShatterReport shatters(std::span<const Point> points, const ConceptClass& cls,
                       std::uint64_t budget, std::uint64_t seed) {
  if (points.size() > 20)
    throw Error(Errc::invalid_argument, "shatters: at most 20 points (2^k enumeration guard)");
  if (!cls.member) throw Error(Errc::invalid_argument, "shatters: class has no membership predicate");

  if (cls.finite()) {
    std::size_t i = 0;
    return run_masks(points, cls, [&]() -> std::optional<ParamVec> {
      if (i >= cls.params.size()) return std::nullopt;
      return cls.params[i++];
    }, true);
  }
  if (cls.canonical_params) {
    const std::vector<ParamVec> params = cls.canonical_params(points);
    std::size_t i = 0;
    return run_masks(points, cls, [&]() -> std::optional<ParamVec> {
      if (i >= params.size()) return std::nullopt;
      return params[i++];
    }, true);
  }
  if (!cls.sample)
    throw Error(Errc::invalid_argument, "shatters: class is neither enumerable nor sampleable");
  CounterRng rng = substream(seed, streams::kShatter, 0);
  std::uint64_t drawn = 0;
  return run_masks(points, cls, [&]() -> std::optional<ParamVec> {
    if (drawn >= budget) return std::nullopt;
    ++drawn;
    return cls.sample(rng, points);
  }, false);
}

ShatterSearchResult find_shattered_subset(std::span<const Point> sample, const ConceptClass& cls,
                                          std::uint32_t k, std::uint64_t subset_trials,
                                          std::uint64_t concept_budget, std::uint64_t seed) {
  if (k > 20) throw Error(Errc::invalid_argument, "find_shattered_subset: k <= 20");
  if (sample.size() < k)
    throw Error(Errc::invalid_argument, "find_shattered_subset: sample smaller than k");

  ShatterSearchResult res;
  std::vector<std::uint32_t> pick(sample.size());
  for (std::uint32_t i = 0; i < pick.size(); ++i) pick[i] = i;
  std::vector<Point> subset(k);
  for (std::uint64_t trial = 0; trial < subset_trials; ++trial) {
    CounterRng rng = substream(seed, streams::kShatter, trial + 1);
    for (std::uint32_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::uint32_t>(rng.next_below(pick.size() - i));
      std::swap(pick[i], pick[j]);
      subset[i] = sample[pick[i]];
    }
    res.subsets_tried++;
    ShatterReport rep = shatters(subset, cls, concept_budget, rng.next_u64());
    if (rep.shattered) {
      res.witness = std::move(rep);
      return res;
    }
  }
  return res;
}

std::uint64_t goldberg_jerrum_bound(std::uint64_t s, std::uint64_t t) {
  if (s < 1 || t < 1) throw Error(Errc::invalid_argument, "goldberg_jerrum_bound: s, t >= 1");
  return 4 * s * (t + 2);
}

double bins_class_bound(std::uint64_t h, std::uint64_t p, double log_base) {
  if (h < 1 || p < 1) throw Error(Errc::invalid_argument, "bins_class_bound: h, p >= 1");
  if (!(log_base > 1.0)) throw Error(Errc::invalid_argument, "bins_class_bound: log base > 1");
  const double hp = static_cast<double>(h) * static_cast<double>(p);
  return 4.0 * hp * (std::log(2.0 * hp) / std::log(log_base));
}

std::uint64_t sample_size_bound(double eps, double delta, std::uint64_t d, double log_base) {
  if (!(eps > 0.0) || eps >= 1.0 || !(delta > 0.0) || delta >= 1.0 || d < 1)
    throw Error(Errc::invalid_argument,
                "sample_size_bound: need eps, delta in (0,1) and d >= 1");
  const double ln_base = std::log(log_base);
  const auto lg = [ln_base](double x) { return std::log(x) / ln_base; };
  constexpr double e = 2.718281828459045235;
  const double inner = (2.0 * e * e / eps) * lg(2.0 * e / eps);
  const double rhs =
      128.0 / (eps * eps) * (static_cast<double>(d) * lg(inner) + lg(8.0 / delta));
  return static_cast<std::uint64_t>(std::ceil(rhs));
}

double empirical_deviation(const ConceptClass& cls, const std::vector<Point>& dataset,
                           const std::function<double(const ParamVec&)>& measure_oracle) {
  if (!cls.finite())
    throw Error(Errc::invalid_argument,
                "empirical_deviation: class must be globally finite");
  if (dataset.empty()) throw Error(Errc::invalid_argument, "empirical_deviation: empty dataset");
  double worst = 0.0;
  for (const ParamVec& param : cls.params) {
    const double mu = measure_oracle(param);
    std::uint64_t inside = 0;
    for (const Point& p : dataset)
      if (cls.member(param, p)) ++inside;
    const double mu_n = static_cast<double>(inside) / static_cast<double>(dataset.size());
    worst = std::max(worst, std::abs(mu - mu_n));
  }
  return worst;
}

// ---- fixtures ---------------------------------------------------------

namespace {

double coord(const Point& p, std::size_t i) { return p.reals[i]; }

// Midpoint cut grid: every achievable way an interval can separate the
// sorted values, plus sentinels strictly outside the range.
std::vector<double> cut_grid(std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::vector<double> cuts;
  cuts.push_back(vals.front() - 1.0);
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) cuts.push_back(0.5 * (vals[i] + vals[i + 1]));
  cuts.push_back(vals.back() + 1.0);
  return cuts;
}

}  // namespace

ConceptClass intervals_class() {
  ConceptClass cls;
  cls.name = "intervals_on_line";
  cls.member = [](const ParamVec& q, const Point& p) {
    return q[0] <= coord(p, 0) && coord(p, 0) <= q[1];
  };
  cls.canonical_params = [](std::span<const Point> pts) {
    std::vector<ParamVec> out;
    out.push_back({1.0, 0.0});  // empty interval
    if (pts.empty()) return out;
    std::vector<double> vals;
    for (const Point& p : pts) vals.push_back(coord(p, 0));
    const std::vector<double> cuts = cut_grid(vals);
    for (std::size_t i = 0; i < cuts.size(); ++i)
      for (std::size_t j = i; j < cuts.size(); ++j) out.push_back({cuts[i], cuts[j]});
    return out;
  };
  return cls;
}

ConceptClass euclidean_balls_class(std::uint32_t dim) {
  if (dim < 1) throw Error(Errc::invalid_argument, "euclidean_balls_class: dim >= 1");
  ConceptClass cls;
  cls.name = "euclidean_balls_r" + std::to_string(dim);
  cls.member = [dim](const ParamVec& q, const Point& p) {
    double sq = 0.0;
    for (std::uint32_t i = 0; i < dim; ++i) {
      const double diff = p.reals[i] - q[i];
      sq += diff * diff;
    }
    const double r = q[dim];
    return sq <= r * r;
  };
  cls.sample = [dim](CounterRng& rng, std::span<const Point> pts) {
    ParamVec q(dim + 1, 0.0);
    if (pts.empty()) {
      for (std::uint32_t i = 0; i < dim; ++i) q[i] = rng.next_gaussian();
      q[dim] = rng.next_unit();
      return q;
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        scale = std::max(scale, std::sqrt(squared_euclidean(pts[i].reals, pts[j].reals)));
    if (scale == 0.0) scale = 1.0;

    const Point& a = pts[rng.next_below(pts.size())];
    const Point& b = pts[rng.next_below(pts.size())];
    switch (rng.next_below(4)) {
      case 0: {  // near one point
        for (std::uint32_t i = 0; i < dim; ++i)
          q[i] = a.reals[i] + 0.05 * scale * rng.next_gaussian();
        break;
      }
      case 1: {  // near a midpoint
        for (std::uint32_t i = 0; i < dim; ++i)
          q[i] = 0.5 * (a.reals[i] + b.reals[i]) + 0.25 * scale * rng.next_gaussian();
        break;
      }
      case 2: {  // far along a point-to-point direction: near-halfspace cuts
        const double t = std::exp(3.0 * rng.next_unit());  // 1..~20 diameters out
        for (std::uint32_t i = 0; i < dim; ++i) {
          double dir = a.reals[i] - b.reals[i];
          q[i] = a.reals[i] + t * dir + 0.05 * scale * rng.next_gaussian();
        }
        break;
      }
      default: {  // diffuse
        for (std::uint32_t i = 0; i < dim; ++i)
          q[i] = a.reals[i] + 2.0 * scale * rng.next_gaussian();
        break;
      }
    }
    // radius pinned to a data point's distance, nudged in or out
    const Point& c = pts[rng.next_below(pts.size())];
    double sq = 0.0;
    for (std::uint32_t i = 0; i < dim; ++i) {
      const double diff = c.reals[i] - q[i];
      sq += diff * diff;
    }
    const double nudge = (rng.next_bool() ? 1.0 : -1.0) * 1e-3 * scale * rng.next_unit_pos();
    q[dim] = std::max(0.0, std::sqrt(sq) + nudge);
    return q;
  };
  return cls;
}

ConceptClass axis_boxes_class(std::uint32_t dim) {
  if (dim < 1) throw Error(Errc::invalid_argument, "axis_boxes_class: dim >= 1");
  ConceptClass cls;
  cls.name = "axis_boxes_r" + std::to_string(dim);
  cls.member = [dim](const ParamVec& q, const Point& p) {
    for (std::uint32_t i = 0; i < dim; ++i)
      if (p.reals[i] < q[2 * i] || p.reals[i] > q[2 * i + 1]) return false;
    return true;
  };
  cls.canonical_params = [dim](std::span<const Point> pts) {
    std::vector<ParamVec> out;
    ParamVec empty(2 * dim, 0.0);
    empty[0] = 1.0;
    empty[1] = 0.0;  // lo > hi: empty box
    out.push_back(empty);
    if (pts.empty()) return out;
    std::vector<std::vector<double>> cuts(dim);
    std::size_t total = 1;
    for (std::uint32_t c = 0; c < dim; ++c) {
      std::vector<double> vals;
      for (const Point& p : pts) vals.push_back(coord(p, c));
      cuts[c] = cut_grid(vals);
      const std::size_t per = cuts[c].size() * (cuts[c].size() + 1) / 2;
      total *= per;
      if (total > 2'000'000)
        throw Error(Errc::invalid_argument,
                    "axis_boxes_class: canonical enumeration too large for this point set");
    }
    // odometer over per-coordinate (lo, hi) pairs
    std::vector<std::pair<std::size_t, std::size_t>> idx(dim, {0, 0});
    for (;;) {
      ParamVec q(2 * dim);
      for (std::uint32_t c = 0; c < dim; ++c) {
        q[2 * c] = cuts[c][idx[c].first];
        q[2 * c + 1] = cuts[c][idx[c].second];
      }
      out.push_back(std::move(q));
      std::uint32_t c = 0;
      for (; c < dim; ++c) {
        auto& [lo, hi] = idx[c];
        if (++hi < cuts[c].size()) break;
        if (++lo < cuts[c].size()) {
          hi = lo;
          break;
        }
        lo = hi = 0;
      }
      if (c == dim) break;
    }
    return out;
  };
  return cls;
}

ConceptClass hamming_balls_class(std::uint32_t d) {
  if (d < 1 || d > 12)
    throw Error(Errc::invalid_argument, "hamming_balls_class: 1 <= d <= 12 (finite enumeration)");
  ConceptClass cls;
  cls.name = "hamming_balls_d" + std::to_string(d);
  cls.member = [](const ParamVec& q, const Point& p) {
    const auto center = static_cast<std::uint64_t>(q[0]);
    const auto radius = static_cast<std::uint64_t>(q[1]);
    return std::popcount(p.bits[0] ^ center) <= static_cast<int>(radius);
  };
  for (std::uint64_t center = 0; center < (std::uint64_t{1} << d); ++center)
    for (std::uint64_t r = 0; r <= d; ++r)
      cls.params.push_back({static_cast<double>(center), static_cast<double>(r)});
  return cls;
}

ConceptClass sum_threshold_class(std::uint32_t d) {
  if (d < 1) throw Error(Errc::invalid_argument, "sum_threshold_class: d >= 1");
  ConceptClass cls;
  cls.name = "sum_threshold_d" + std::to_string(d);
  cls.member = [](const ParamVec& q, const Point& p) {
    return static_cast<double>(p.popcount()) <= q[0];
  };
  for (std::int64_t t = -1; t <= static_cast<std::int64_t>(d); ++t)
    cls.params.push_back({static_cast<double>(t)});
  return cls;
}

ConceptClass first_coordinate_threshold_class(const DomainSpec& spec,
                                              std::vector<double> thresholds) {
  ConceptClass cls;
  cls.name = "first_coordinate_threshold";
  const bool binary = spec.kind == DomainKind::hamming;
  cls.member = [binary](const ParamVec& q, const Point& p) {
    const double x1 = binary ? (p.get_bit(0) ? 1.0 : 0.0) : p.reals[0];
    return x1 <= q[0];
  };
  for (const double t : thresholds) cls.params.push_back({t});
  return cls;
}

std::uint64_t hamming_balls_vc_upper_bound(std::uint32_t d) {
  if (d < 1) throw Error(Errc::invalid_argument, "hamming_balls_vc_upper_bound: d >= 1");
  return d + static_cast<std::uint64_t>(std::floor(std::log2(static_cast<double>(d))));
}

}  // namespace mcl
