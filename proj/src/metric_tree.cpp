#include "mcl/metric_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcl/dataset_io.hpp"
#include "mcl/rng.hpp"

namespace mcl {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::vp: return "vp";
    case Strategy::ball: return "ball";
    case Strategy::pivot: return "pivot";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "vp") return Strategy::vp;
  if (name == "ball") return Strategy::ball;
  if (name == "pivot") return Strategy::pivot;
  throw Error(Errc::invalid_argument, "unknown strategy '" + name + "'");
}

std::uint64_t MetricTree::leaf_count() const noexcept {
  std::uint64_t c = 0;
  for (const auto& n : nodes)
    if (n.is_leaf()) ++c;
  return c;
}

std::uint32_t MetricTree::depth() const noexcept {
  // nodes are stored pre-order; walk explicitly
  std::uint32_t best = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& node = nodes[id];
    if (!node.is_leaf()) {
      stack.push_back({static_cast<std::uint32_t>(node.minus_child), d + 1});
      stack.push_back({static_cast<std::uint32_t>(node.plus_child), d + 1});
    }
  }
  return best;
}

namespace {

struct Builder {
  const std::vector<Point>& data;
  const DomainSpec& spec;
  const BuildParams& params;
  std::uint64_t seed;
  std::vector<TreeNode> nodes;

  bool zero_diameter(const std::vector<std::uint32_t>& idx) const {
    for (std::size_t i = 1; i < idx.size(); ++i)
      if (!(data[idx[i]] == data[idx[0]])) return false;
    return true;
  }

  // Reorders a prefix of idx uniformly; candidates are the first k entries.
  std::uint32_t shuffle_candidates(std::vector<std::uint32_t>& idx, CounterRng& rng) const {
    const auto m = static_cast<std::uint32_t>(idx.size());
    const std::uint32_t k = std::min(params.candidates, m);
    for (std::uint32_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::uint32_t>(rng.next_below(m - i));
      std::swap(idx[i], idx[j]);
    }
    return k;
  }

  // Farthest pair among the first k entries of idx; falls back to a full
  // scan against idx[0] when the candidates are all coincident. Returns
  // dataset indices (plus = smaller index) or nullopt when the node has
  // zero diameter.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> farthest_pair(
      const std::vector<std::uint32_t>& idx, std::uint32_t k) const {
    double best = 0.0;
    std::uint32_t bi = 0, bj = 0;
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = i + 1; j < k; ++j) {
        const double d = distance(spec, data[idx[i]], data[idx[j]]);
        if (d > best) {
          best = d;
          bi = idx[i];
          bj = idx[j];
        }
      }
    if (best == 0.0) {
      for (const std::uint32_t j : idx) {
        if (!(data[j] == data[idx[0]])) {
          bi = idx[0];
          bj = j;
          best = 1.0;
          break;
        }
      }
    }
    if (best == 0.0) return std::nullopt;
    return std::make_pair(std::min(bi, bj), std::max(bi, bj));
  }

  // Splits idx by sign of f; f <= 0 goes to minus (build-time tie-break).
  void route(const DecisionFunction& f, const std::vector<std::uint32_t>& idx,
             std::vector<std::uint32_t>& minus, std::vector<std::uint32_t>& plus) const {
    minus.clear();
    plus.clear();
    for (const std::uint32_t i : idx) {
      if (evaluate(f, data[i]) <= 0.0)
        minus.push_back(i);
      else
        plus.push_back(i);
    }
  }

  // Median-radius split around `center`; when the lower median swallows
  // everything, retreats to the largest distance value below the maximum.
  // Returns the realized radius (== covering radius of the minus side),
  // or nullopt when all distances coincide.
  std::optional<double> split_radius(const Point& center,
                                     const std::vector<std::uint32_t>& idx) const {
    std::vector<double> dists;
    dists.reserve(idx.size());
    for (const std::uint32_t i : idx) dists.push_back(distance(spec, center, data[i]));
    std::sort(dists.begin(), dists.end());
    const double dmax = dists.back();
    double radius = dists[(dists.size() - 1) / 2];
    if (radius == dmax) {
      // find largest value strictly below the max
      const auto it = std::lower_bound(dists.begin(), dists.end(), dmax);
      if (it == dists.begin()) return std::nullopt;  // all equal
      radius = *std::prev(it);
    }
    return radius;
  }

  std::optional<DecisionFunction> choose_split(std::vector<std::uint32_t>& idx,
                                               std::uint32_t node_id) {
    CounterRng rng = substream(seed, streams::kBuild, node_id);
    const std::uint32_t k = shuffle_candidates(idx, rng);
    switch (params.strategy) {
      case Strategy::vp: {
        const auto pair = farthest_pair(idx, k);
        if (!pair) return std::nullopt;
        return make_vantage_pair(spec, data[pair->first], data[pair->second]);
      }
      case Strategy::ball: {
        for (std::uint32_t c = 0; c < k; ++c) {
          const Point& center = data[idx[c]];
          if (const auto radius = split_radius(center, idx))
            return make_ball(spec, center, *radius);
        }
        break;
      }
      case Strategy::pivot: {
        for (std::uint32_t attempt = 0; attempt < std::max(params.candidates, 1u); ++attempt) {
          const Point anchor =
              sample_point(spec, rng.next_u64(), streams::kBuild, node_id);
          if (const auto threshold = split_radius(anchor, idx))
            return make_pivot(spec, anchor, *threshold);
        }
        break;
      }
    }
    // ball/pivot could not separate anything; a farthest-pair split still
    // works whenever the node has positive diameter
    const auto pair = farthest_pair(idx, k);
    if (!pair) return std::nullopt;
    return make_vantage_pair(spec, data[pair->first], data[pair->second]);
  }

  std::uint32_t build_node(std::vector<std::uint32_t> idx, std::uint32_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    if (idx.size() <= params.bin_capacity || depth >= params.max_depth) {
      nodes[id].bin = std::move(idx);
      return id;
    }
    auto fn = choose_split(idx, id);
    if (!fn) {  // zero diameter: forced leaf
      std::sort(idx.begin(), idx.end());
      nodes[id].bin = std::move(idx);
      return id;
    }
    std::vector<std::uint32_t> minus, plus;
    route(*fn, idx, minus, plus);
    if (minus.empty() || plus.empty()) {
      // only reachable for pivot anchors landing outside the data's
      // distance range; keep the node a leaf rather than recurse forever
      std::sort(idx.begin(), idx.end());
      nodes[id].bin = std::move(idx);
      return id;
    }
    idx.clear();
    idx.shrink_to_fit();
    nodes[id].fn = std::move(*fn);
    const std::uint32_t m = build_node(std::move(minus), depth + 1);
    nodes[id].minus_child = static_cast<std::int32_t>(m);
    const std::uint32_t p = build_node(std::move(plus), depth + 1);
    nodes[id].plus_child = static_cast<std::int32_t>(p);
    return id;
  }
};

}  // namespace

MetricTree build_tree(const std::vector<Point>& dataset, const DomainSpec& spec,
                      const BuildParams& params, std::uint64_t seed) {
  if (dataset.empty()) throw Error(Errc::invalid_argument, "build_tree: dataset is empty");
  if (params.bin_capacity < 1) throw Error(Errc::invalid_argument, "build_tree: b must be >= 1");
  if (params.max_depth < 1) throw Error(Errc::invalid_argument, "build_tree: h must be >= 1");
  if (params.candidates < 2 && params.strategy == Strategy::vp)
    throw Error(Errc::invalid_argument, "build_tree: vp needs c >= 2 candidates");

  Builder b{dataset, spec, params, seed, {}};
  std::vector<std::uint32_t> all(dataset.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  b.build_node(std::move(all), 0);

  MetricTree tree;
  tree.spec = spec;
  tree.params = params;
  tree.seed = seed;
  tree.dataset_size = dataset.size();
  tree.dataset_hash = dataset_fingerprint(Dataset{spec, seed, dataset});
  tree.root = 0;
  tree.nodes = std::move(b.nodes);
  return tree;
}

RangeResult range_search(const MetricTree& tree, const std::vector<Point>& dataset,
                         const RangeQuery& q, SearchDebug* debug) {
  if (!(q.radius > 0.0)) throw Error(Errc::invalid_argument, "range query radius must be > 0");
  RangeResult res;
  std::vector<std::uint32_t> stack{tree.root};
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    const TreeNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      res.trace.bins_opened++;
      for (const std::uint32_t i : node.bin) {
        res.trace.distance_computations++;
        if (distance(tree.spec, q.center, dataset[i]) < q.radius) res.matches.push_back(i);
      }
      continue;
    }
    res.trace.internal_nodes_visited++;
    res.trace.decision_evals++;
    const double f = evaluate(*node.fn, q.center);
    if (f < q.radius)
      stack.push_back(static_cast<std::uint32_t>(node.minus_child));
    else if (debug)
      debug->pruned_subtrees.push_back(static_cast<std::uint32_t>(node.minus_child));
    if (f > -q.radius)
      stack.push_back(static_cast<std::uint32_t>(node.plus_child));
    else if (debug)
      debug->pruned_subtrees.push_back(static_cast<std::uint32_t>(node.plus_child));
  }
  std::sort(res.matches.begin(), res.matches.end());
  res.matches.erase(std::unique(res.matches.begin(), res.matches.end()), res.matches.end());
  res.trace.result_size = res.matches.size();
  return res;
}

std::vector<std::uint32_t> linear_scan(const std::vector<Point>& dataset, const DomainSpec& spec,
                                       const RangeQuery& q) {
  std::vector<std::uint32_t> matches;
  for (std::uint32_t i = 0; i < dataset.size(); ++i)
    if (distance(spec, q.center, dataset[i]) < q.radius) matches.push_back(i);
  return matches;
}

NnResult nn_search(const MetricTree& tree, const std::vector<Point>& dataset, const Point& center,
                   const NnSchedule& schedule) {
  if (dataset.empty()) throw Error(Errc::invalid_argument, "nn_search: dataset is empty");
  if (!(schedule.r0 > 0.0) || !(schedule.growth > 1.0))
    throw Error(Errc::invalid_argument, "nn_search: need r0 > 0 and growth > 1");

  NnResult out;
  double radius = schedule.r0;
  for (;;) {
    out.rounds++;
    const RangeResult r = range_search(tree, dataset, {center, radius});
    out.trace.accumulate(r.trace);
    if (!r.matches.empty()) {
      out.index = r.matches.front();
      out.distance = std::numeric_limits<double>::infinity();
      for (const std::uint32_t i : r.matches) {
        const double d = distance(tree.spec, center, dataset[i]);
        if (d < out.distance) {  // strict: ties keep the smallest index
          out.distance = d;
          out.index = i;
        }
      }
      break;
    }
    radius *= schedule.growth;
    if (!std::isfinite(radius))
      throw Error(Errc::invalid_argument, "nn_search: radius schedule diverged");
  }

  // confirming query just above the found distance; the open ball at
  // nextafter(d) is exactly {rho <= d}
  const double confirm = std::nextafter(out.distance, std::numeric_limits<double>::infinity());
  out.rounds++;
  const RangeResult r = range_search(tree, dataset, {center, confirm > 0.0 ? confirm : 5e-324});
  out.trace.accumulate(r.trace);
  out.certificate_bins_opened = r.trace.bins_opened;
  for (const std::uint32_t i : r.matches) {
    const double d = distance(tree.spec, center, dataset[i]);
    if (d < out.distance || (d == out.distance && i < out.index)) {
      out.distance = d;
      out.index = i;
    }
  }
  return out;
}

namespace {

void collect_leaf_points(const MetricTree& tree, std::uint32_t id,
                         std::vector<std::uint32_t>& out) {
  std::vector<std::uint32_t> stack{id};
  while (!stack.empty()) {
    const TreeNode& node = tree.nodes[stack.back()];
    stack.pop_back();
    if (node.is_leaf()) {
      out.insert(out.end(), node.bin.begin(), node.bin.end());
    } else {
      stack.push_back(static_cast<std::uint32_t>(node.minus_child));
      stack.push_back(static_cast<std::uint32_t>(node.plus_child));
    }
  }
}

}  // namespace

ValidationReport validate_tree(const MetricTree& tree, const std::vector<Point>& dataset) {
  ValidationReport rep;
  auto fail = [&](std::uint32_t node, std::string what) {
    rep.ok = false;
    rep.violations.push_back({node, std::move(what)});
  };

  if (tree.nodes.empty() || tree.root >= tree.nodes.size()) {
    fail(0, "root index out of range");
    return rep;
  }

  // arity + reachability (each node reached exactly once from the root)
  std::vector<std::uint32_t> depth_of(tree.nodes.size(), 0);
  std::vector<char> seen(tree.nodes.size(), 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{tree.root, 0}};
  std::uint64_t reached = 0;
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    if (seen[id]) {
      fail(id, "node reachable more than once (not a tree)");
      return rep;
    }
    seen[id] = 1;
    reached++;
    depth_of[id] = d;
    const TreeNode& node = tree.nodes[id];
    if ((node.minus_child < 0) != (node.plus_child < 0)) {
      fail(id, "internal node must have exactly two children");
      continue;
    }
    if (!node.is_leaf()) {
      if (!node.fn) {
        fail(id, "internal node missing decision function");
        continue;
      }
      const auto m = static_cast<std::uint32_t>(node.minus_child);
      const auto p = static_cast<std::uint32_t>(node.plus_child);
      if (m >= tree.nodes.size() || p >= tree.nodes.size()) {
        fail(id, "child index out of range");
        continue;
      }
      stack.push_back({m, d + 1});
      stack.push_back({p, d + 1});
    }
  }
  if (reached != tree.nodes.size())
    fail(tree.root, "unreachable nodes present: " +
                        std::to_string(tree.nodes.size() - reached));

  // coverage: every datapoint appears in at least one leaf bin
  std::vector<char> covered(dataset.size(), 0);
  for (std::uint32_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    if (!node.is_leaf()) continue;
    for (const std::uint32_t i : node.bin) {
      if (i >= dataset.size()) {
        fail(id, "bin references datapoint " + std::to_string(i) + " out of range");
        continue;
      }
      covered[i] = 1;
    }
  }
  for (std::uint32_t i = 0; i < covered.size(); ++i)
    if (!covered[i]) fail(tree.root, "datapoint " + std::to_string(i) + " missing from all bins");

  // sign condition at every internal node
  std::vector<std::uint32_t> under;
  for (std::uint32_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    if (node.is_leaf() || !node.fn) continue;
    under.clear();
    collect_leaf_points(tree, static_cast<std::uint32_t>(node.minus_child), under);
    for (const std::uint32_t i : under)
      if (evaluate(*node.fn, dataset[i]) > 0.0) {
        fail(id, "sign condition: datapoint " + std::to_string(i) + " under minus child has f > 0");
        break;
      }
    under.clear();
    collect_leaf_points(tree, static_cast<std::uint32_t>(node.plus_child), under);
    for (const std::uint32_t i : under)
      if (evaluate(*node.fn, dataset[i]) < 0.0) {
        fail(id, "sign condition: datapoint " + std::to_string(i) + " under plus child has f < 0");
        break;
      }
  }

  // capacity, exempting depth-capped and zero-diameter leaves
  for (std::uint32_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    if (!node.is_leaf() || node.bin.size() <= tree.params.bin_capacity) continue;
    if (depth_of[id] >= tree.params.max_depth) continue;
    bool all_equal = true;
    for (std::size_t k = 1; k < node.bin.size() && all_equal; ++k)
      all_equal = dataset[node.bin[k]] == dataset[node.bin[0]];
    if (!all_equal)
      fail(id, "leaf bin of size " + std::to_string(node.bin.size()) + " exceeds capacity " +
                   std::to_string(tree.params.bin_capacity));
  }

  return rep;
}

}  // namespace mcl
