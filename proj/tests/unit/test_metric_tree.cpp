#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "mcl/metric_tree.hpp"
#include "mcl/rng.hpp"

using namespace mcl;

namespace {

std::vector<std::uint32_t> subtree_points(const MetricTree& tree, std::uint32_t root) {
  std::vector<std::uint32_t> out, stack{root};
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
  return out;
}

}  // namespace

TEST_CASE("single point builds a single-leaf tree of depth 0") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  const auto data = sample_points(spec, 1, 1);
  for (const Strategy s : {Strategy::vp, Strategy::ball, Strategy::pivot}) {
    const MetricTree tree = build_tree(data, spec, {s, 16, 8, 64}, 0);
    CHECK(tree.nodes.size() == 1);
    CHECK(tree.depth() == 0);
    CHECK(tree.nodes[0].bin.size() == 1);
    CHECK(validate_tree(tree, data).ok);
  }
}

TEST_CASE("capacity is respected away from the depth cap") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 16);
  const auto data = sample_points(spec, 42, 1000);
  const BuildParams params{Strategy::vp, 16, 8, 64};
  const MetricTree tree = build_tree(data, spec, params, 7);
  CHECK(validate_tree(tree, data).ok);
  for (const TreeNode& n : tree.nodes)
    if (n.is_leaf()) CHECK(n.bin.size() <= 16);
  CHECK(tree.depth() <= 64);
  // builds are deterministic
  const MetricTree again = build_tree(data, spec, params, 7);
  std::stringstream a, b;
  write_tree(a, tree);
  write_tree(b, again);
  CHECK(a.str() == b.str());
}

TEST_CASE("an all-identical dataset becomes one leaf regardless of capacity") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  const std::vector<Point> data(50, point_from_bit_string("10101010"));
  for (const Strategy s : {Strategy::vp, Strategy::ball, Strategy::pivot}) {
    const MetricTree tree = build_tree(data, spec, {s, 4, 8, 64}, 3);
    CHECK(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].bin.size() == 50);
    CHECK(validate_tree(tree, data).ok);
  }
}

TEST_CASE("empty dataset is rejected") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  CHECK_THROWS_AS(build_tree({}, spec, {}, 0), Error);
}

TEST_CASE("ball splits survive tie plateaus (equilateral points)") {
  // pairwise distances all 4/6: the lower-median radius swallows
  // everything and the builder must retreat to a smaller realized radius
  const DomainSpec spec = make_domain(DomainKind::hamming, 6);
  const std::vector<Point> data = {point_from_bit_string("110000"), point_from_bit_string("001100"),
                                   point_from_bit_string("000011")};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const MetricTree tree = build_tree(data, spec, {Strategy::ball, 1, 4, 16}, seed);
    CHECK(validate_tree(tree, data).ok);
    CHECK(tree.leaf_count() == 3);
    const NnResult nn = nn_search(tree, data, data[2]);
    CHECK(nn.index == 2);
  }
}

TEST_CASE("validate_tree flags a flipped sign") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 16);
  const auto data = sample_points(spec, 11, 200);
  MetricTree tree = build_tree(data, spec, {Strategy::vp, 8, 8, 64}, 1);
  REQUIRE(validate_tree(tree, data).ok);
  REQUIRE_FALSE(tree.nodes[tree.root].is_leaf());
  std::swap(tree.nodes[tree.root].minus_child, tree.nodes[tree.root].plus_child);
  const ValidationReport rep = validate_tree(tree, data);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().node == tree.root);
  CHECK(rep.violations.front().what.find("sign condition") != std::string::npos);
}

TEST_CASE("validate_tree flags a dropped datapoint") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 4);
  const auto data = sample_points(spec, 12, 100);
  MetricTree tree = build_tree(data, spec, {Strategy::ball, 8, 8, 64}, 2);
  REQUIRE(validate_tree(tree, data).ok);
  for (TreeNode& n : tree.nodes) {
    if (n.is_leaf() && !n.bin.empty()) {
      n.bin.erase(n.bin.begin());
      break;
    }
  }
  const ValidationReport rep = validate_tree(tree, data);
  CHECK_FALSE(rep.ok);
  CHECK(rep.violations.front().what.find("missing from all bins") != std::string::npos);
}

TEST_CASE("a radius beyond the diameter returns everything and opens every bin") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 12);
  const auto data = sample_points(spec, 4, 256);
  const MetricTree tree = build_tree(data, spec, {Strategy::vp, 8, 8, 64}, 4);
  const RangeResult r = range_search(tree, data, {data[0], 2.0});
  CHECK(r.matches.size() == data.size());
  CHECK(r.trace.bins_opened == tree.leaf_count());
  CHECK(r.trace.result_size == data.size());
}

TEST_CASE("a radius below the minimum distance returns nothing") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 4);
  const auto data = sample_points(spec, 5, 128);
  const MetricTree tree = build_tree(data, spec, {Strategy::vp, 8, 8, 64}, 5);
  const Point q = sample_point(spec, 999, streams::kQueries, 0);
  const RangeResult r = range_search(tree, data, {q, 1e-12});
  CHECK(r.matches.empty());
  CHECK(r.trace.cost() >= 0);
}

TEST_CASE("range_search rejects non-positive radii") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  const auto data = sample_points(spec, 6, 16);
  const MetricTree tree = build_tree(data, spec, {}, 6);
  CHECK_THROWS_AS(range_search(tree, data, {data[0], 0.0}), Error);
}

TEST_CASE("search rejects centers from the wrong domain") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 4);
  const auto data = sample_points(spec, 7, 32);
  const MetricTree tree = build_tree(data, spec, {}, 7);
  const Point wrong = point_from_reals({1.0, 2.0});
  CHECK_THROWS_AS(range_search(tree, data, {wrong, 0.5}), Error);
  CHECK_THROWS_AS(nn_search(tree, data, wrong), Error);
}

TEST_CASE("nn_search validates its inputs") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  const auto data = sample_points(spec, 6, 16);
  const MetricTree tree = build_tree(data, spec, {}, 6);
  CHECK_THROWS_AS(nn_search(tree, {}, data[0]), Error);
  CHECK_THROWS_AS(nn_search(tree, data, data[0], {0.0, 2.0}), Error);
  CHECK_THROWS_AS(nn_search(tree, data, data[0], {0.1, 1.0}), Error);
}

TEST_CASE("range_search agrees with linear_scan on every strategy") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 12);
  const auto data = sample_points(spec, 77, 512);
  for (const Strategy s : {Strategy::vp, Strategy::ball, Strategy::pivot}) {
    const MetricTree tree = build_tree(data, spec, {s, 8, 8, 64}, 77);
    REQUIRE(validate_tree(tree, data).ok);
    for (std::uint64_t qi = 0; qi < 200; ++qi) {
      const Point w = sample_point(spec, 1234, streams::kQueries, qi);
      CounterRng rng = substream(555, streams::kQueries, qi);
      const double eps = 0.05 + 0.5 * rng.next_unit();
      const RangeResult r = range_search(tree, data, {w, eps});
      CHECK(r.matches == linear_scan(data, spec, {w, eps}));
      CHECK(r.trace.distance_computations <= data.size());
      CHECK(r.trace.decision_evals <= tree.internal_count());
      CHECK(r.trace.bins_opened <= tree.leaf_count());
      CHECK(r.trace.cost() >= r.trace.result_size);
    }
  }
}

TEST_CASE("linear_scan handles the degenerate cases") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  CHECK(linear_scan({}, spec, {point_from_bit_string("00000000"), 1.0}).empty());
  const auto data = sample_points(spec, 8, 64);
  const auto all = linear_scan(data, spec, {data[0], 1.5});
  CHECK(all.size() == data.size());
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST_CASE("nn_search finds an exact match at distance zero") {
  const DomainSpec spec = make_domain(DomainKind::gaussian, 6);
  const auto data = sample_points(spec, 9, 100);
  const MetricTree tree = build_tree(data, spec, {Strategy::ball, 4, 8, 64}, 9);
  const NnResult nn = nn_search(tree, data, data[37]);
  CHECK(nn.index == 37);
  CHECK(nn.distance == 0.0);
}

TEST_CASE("nn_search matches the linear-scan argmin") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 12);
  const auto data = sample_points(spec, 31, 512);
  for (const Strategy s : {Strategy::vp, Strategy::ball, Strategy::pivot}) {
    const MetricTree tree = build_tree(data, spec, {s, 16, 8, 64}, 31);
    for (std::uint64_t qi = 0; qi < 100; ++qi) {
      const Point w = sample_point(spec, 888, streams::kQueries, qi);
      const NnResult nn = nn_search(tree, data, w);
      double best = distance(spec, w, data[0]);
      std::uint32_t best_i = 0;
      for (std::uint32_t i = 1; i < data.size(); ++i) {
        const double d = distance(spec, w, data[i]);
        if (d < best) {
          best = d;
          best_i = i;
        }
      }
      CHECK(nn.distance == best);
      CHECK(nn.index == best_i);
    }
  }
}

TEST_CASE("nn ties break to the smallest index") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 4);
  const std::vector<Point> data = {point_from_bit_string("1111"), point_from_bit_string("0011"),
                                   point_from_bit_string("0110")};
  const MetricTree tree = build_tree(data, spec, {Strategy::vp, 1, 4, 8}, 0);
  const NnResult nn = nn_search(tree, data, point_from_bit_string("0000"));
  CHECK(nn.index == 1);  // 0011 and 0110 both at distance 1/2
  CHECK(nn.distance == 0.5);
}

TEST_CASE("trace cost is monotone in the radius") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 8);
  const auto data = sample_points(spec, 14, 512);
  const MetricTree tree = build_tree(data, spec, {Strategy::vp, 8, 8, 64}, 14);
  const Point w = sample_point(spec, 15, streams::kQueries, 0);
  std::uint64_t prev = 0;
  for (double eps = 0.02; eps <= 1.0; eps += 0.02) {
    const RangeResult r = range_search(tree, data, {w, eps});
    CHECK(r.trace.cost() >= prev);
    prev = r.trace.cost();
  }
}

TEST_CASE("pruned subtrees contain no matching point") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 10);
  const auto data = sample_points(spec, 3, 300);
  for (const Strategy s : {Strategy::vp, Strategy::ball, Strategy::pivot}) {
    const MetricTree tree = build_tree(data, spec, {s, 4, 8, 64}, 3);
    for (std::uint64_t qi = 0; qi < 25; ++qi) {
      const Point w = sample_point(spec, 77, streams::kQueries, qi);
      const double eps = 0.05 + 0.4 * substream(78, streams::kQueries, qi).next_unit();
      SearchDebug dbg;
      (void)range_search(tree, data, {w, eps}, &dbg);
      for (const std::uint32_t pruned : dbg.pruned_subtrees)
        for (const std::uint32_t i : subtree_points(tree, pruned))
          CHECK(distance(spec, w, data[i]) >= eps);
    }
  }
}

TEST_CASE("tree serialization round-trips bit-exactly and preserves answers") {
  const DomainSpec spec = make_domain(DomainKind::gaussian, 5);
  const auto data = sample_points(spec, 23, 200);
  for (const Strategy s : {Strategy::vp, Strategy::ball, Strategy::pivot}) {
    const MetricTree tree = build_tree(data, spec, {s, 8, 8, 64}, 23);
    std::stringstream buf;
    write_tree(buf, tree);
    const MetricTree back = read_tree(buf);
    std::stringstream buf2;
    write_tree(buf2, back);
    CHECK(buf.str() == buf2.str());
    CHECK(back.dataset_hash == tree.dataset_hash);
    const Point w = sample_point(spec, 70, streams::kQueries, 0);
    const RangeResult r1 = range_search(tree, data, {w, 0.7});
    const RangeResult r2 = range_search(back, data, {w, 0.7});
    CHECK(r1.matches == r2.matches);
    CHECK(r1.trace.cost() == r2.trace.cost());
  }
}

TEST_CASE("reading garbage fails cleanly") {
  std::stringstream buf("not a tree");
  CHECK_THROWS_AS(read_tree(buf), Error);
}
