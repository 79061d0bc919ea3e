#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcl/decision_function.hpp"
#include "mcl/domain.hpp"

namespace mcl {

enum class Strategy : std::uint8_t { vp = 0, ball = 1, pivot = 2 };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct BuildParams {
  Strategy strategy = Strategy::vp;
  std::uint32_t bin_capacity = 16;  // b
  std::uint32_t candidates = 8;     // c, node-level sample size for pivots/centers
  std::uint32_t max_depth = 64;     // h
};

/// Either an internal node carrying a decision function and two children,
/// or a leaf carrying a bin of datapoint indices.
struct TreeNode {
  std::optional<DecisionFunction> fn;
  std::int32_t minus_child = -1;
  std::int32_t plus_child = -1;
  std::vector<std::uint32_t> bin;

  bool is_leaf() const noexcept { return minus_child < 0; }
};

struct MetricTree {
  DomainSpec spec;
  BuildParams params;
  std::uint64_t seed = 0;
  std::uint64_t dataset_size = 0;
  std::uint64_t dataset_hash = 0;
  std::uint32_t root = 0;
  std::vector<TreeNode> nodes;

  std::uint64_t leaf_count() const noexcept;
  std::uint64_t internal_count() const noexcept { return nodes.size() - leaf_count(); }
  std::uint32_t depth() const noexcept;
};

/// Builds a metric tree over the dataset. Deterministic in all inputs.
/// vp: farthest pair among c seeded candidates becomes (plus, minus)
/// vantage points. ball: seeded candidate center, radius = lower median
/// distance (ties route to minus). pivot: anchor sampled from the domain
/// measure, threshold = lower median distance. Nodes whose points cannot
/// be split (zero diameter) become leaves regardless of capacity.
MetricTree build_tree(const std::vector<Point>& dataset, const DomainSpec& spec,
                      const BuildParams& params, std::uint64_t seed);

struct RangeQuery {
  Point center;
  double radius = 0.0;  // epsilon > 0
};

/// Per-query work accounting. cost() = decision evaluations + datapoint
/// distance computations; machine independent, lower-bounds both CPU and
/// I/O flavors of "performance".
struct SearchTrace {
  std::uint64_t internal_nodes_visited = 0;
  std::uint64_t decision_evals = 0;
  std::uint64_t bins_opened = 0;
  std::uint64_t distance_computations = 0;
  std::uint64_t result_size = 0;

  std::uint64_t cost() const noexcept { return decision_evals + distance_computations; }

  void accumulate(const SearchTrace& t) noexcept {
    internal_nodes_visited += t.internal_nodes_visited;
    decision_evals += t.decision_evals;
    bins_opened += t.bins_opened;
    distance_computations += t.distance_computations;
    result_size += t.result_size;
  }
};

struct RangeResult {
  std::vector<std::uint32_t> matches;  // sorted, duplicate-free
  SearchTrace trace;
};

/// Optional traversal record for pruning-soundness replays.
struct SearchDebug {
  std::vector<std::uint32_t> pruned_subtrees;  // root node ids of skipped subtrees
};

/// Exact open-ball range search: returns {i : rho(center, x_i) < radius}.
/// The minus child is entered iff f(center) < radius, the plus child iff
/// f(center) > -radius.
RangeResult range_search(const MetricTree& tree, const std::vector<Point>& dataset,
                         const RangeQuery& q, SearchDebug* debug = nullptr);

/// Exact answer by full scan; the correctness oracle and the performance
/// baseline (n distance computations).
std::vector<std::uint32_t> linear_scan(const std::vector<Point>& dataset, const DomainSpec& spec,
                                       const RangeQuery& q);

struct NnSchedule {
  double r0 = 0.05;
  double growth = 2.0;
};

struct NnResult {
  std::uint32_t index = 0;
  double distance = 0.0;
  SearchTrace trace;  // summed over all rounds
  // bins opened by the confirming query at radius nextafter(distance):
  // exactly the bins whose region meets the closed NN ball, the quantity
  // no correct metric-tree search can avoid touching
  std::uint64_t certificate_bins_opened = 0;
  std::uint64_t rounds = 0;
};

/// Exact nearest neighbour via growing range queries r0, r0*growth, ...
/// followed by one confirming query just above the best distance found.
/// Ties break to the smallest index.
NnResult nn_search(const MetricTree& tree, const std::vector<Point>& dataset, const Point& center,
                   const NnSchedule& schedule = {});

struct Violation {
  std::uint32_t node = 0;
  std::string what;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Exhaustive structural check: binary arity, reachability, coverage of
/// every datapoint by some bin, the sign condition at every internal
/// node, and bin capacity (exempting depth-capped and zero-diameter
/// leaves).
ValidationReport validate_tree(const MetricTree& tree, const std::vector<Point>& dataset);

// Versioned binary tree format, magic "MCT1"; round-trips bit-exact.
void write_tree(std::ostream& out, const MetricTree& tree);
MetricTree read_tree(std::istream& in);
void save_tree(const std::string& path, const MetricTree& tree);
MetricTree load_tree(const std::string& path);

}  // namespace mcl
