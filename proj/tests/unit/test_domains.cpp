#include "doctest.h"

#include <cmath>

#include "mcl/domain.hpp"
#include "mcl/rng.hpp"

using namespace mcl;

TEST_CASE("hamming distance matches the bit-count formula") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 4);
  const Point x = point_from_bit_string("0011");
  const Point y = point_from_bit_string("0110");
  CHECK(distance(spec, x, y) == 0.5);
  CHECK(distance(spec, x, x) == 0.0);
  CHECK(distance(spec, y, x) == distance(spec, x, y));
}

TEST_CASE("unit cube distance normalizes by sqrt(d)") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 2);
  const Point x = point_from_reals({0.0, 0.0});
  const Point y = point_from_reals({1.0, 1.0});
  // ||x-y|| / sqrt(2) = sqrt(2)/sqrt(2)
  CHECK(distance(spec, x, y) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(distance(spec, x, x) == 0.0);
}

TEST_CASE("distance rejects dimension mismatches") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 64);
  const Point x = sample_points(spec, 1, 1)[0];
  const Point wide = sample_points(make_domain(DomainKind::hamming, 128), 1, 1)[0];
  const Point real = point_from_reals({1.0, 2.0});
  CHECK_THROWS_AS(distance(spec, x, wide), Error);
  CHECK_THROWS_AS(distance(spec, x, real), Error);
  const DomainSpec cube = make_domain(DomainKind::unit_cube, 3);
  CHECK_THROWS_AS(distance(cube, point_from_reals({1.0}), point_from_reals({1.0, 2.0, 3.0})),
                  Error);
}

TEST_CASE("bit strings must be binary") {
  CHECK_THROWS_AS(point_from_bit_string("0102"), Error);
}

TEST_CASE("sampling is deterministic in (spec, seed, n)") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  const auto a = sample_points(spec, 7, 3);
  const auto b = sample_points(spec, 7, 3);
  CHECK(a == b);
  const auto c = sample_points(spec, 8, 3);
  CHECK(a != c);
  // prefix stability
  const auto big = sample_points(spec, 7, 5);
  CHECK(std::equal(a.begin(), a.end(), big.begin()));
}

TEST_CASE("d=1 hamming bits are unbiased") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 1);
  const auto pts = sample_points(spec, 99, 100000);
  std::uint64_t ones = 0;
  for (const auto& p : pts) ones += p.popcount();
  const double frac = static_cast<double>(ones) / 100000.0;
  CHECK(frac > 0.495);
  CHECK(frac < 0.505);
}

TEST_CASE("sphere samples have unit norm") {
  const DomainSpec spec = make_domain(DomainKind::sphere, 3);
  const auto pts = sample_points(spec, 5, 100);
  for (const auto& p : pts) {
    double sq = 0.0;
    for (const double v : p.reals) sq += v * v;
    CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-9);
  }
}

TEST_CASE("metric axioms hold on sampled triples") {
  for (const DomainKind kind :
       {DomainKind::hamming, DomainKind::unit_cube, DomainKind::gaussian, DomainKind::sphere}) {
    const DomainSpec spec = make_domain(kind, 16);
    const auto pts = sample_points(spec, 21, 3 * 10000);
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
      const double dxy = distance(spec, pts[i], pts[i + 1]);
      const double dyz = distance(spec, pts[i + 1], pts[i + 2]);
      const double dxz = distance(spec, pts[i], pts[i + 2]);
      CHECK(dxz <= dxy + dyz + 1e-9);
      const double dyx = distance(spec, pts[i + 1], pts[i]);
      if (kind == DomainKind::hamming)
        CHECK(dxy == dyx);
      else
        CHECK(std::abs(dxy - dyx) <= 1e-12);
    }
  }
}

TEST_CASE("mean pairwise distance is Theta(1) under the chosen normalizations") {
  for (const DomainKind kind :
       {DomainKind::hamming, DomainKind::unit_cube, DomainKind::gaussian, DomainKind::sphere}) {
    for (const std::uint32_t d : {32u, 64u, 128u}) {
      const DistanceStats s = mean_distance_estimate(make_domain(kind, d), 13, 20000);
      CHECK(s.mean >= 0.3);
      CHECK(s.mean <= 1.2);
      CHECK(s.stddev >= 0.0);
    }
  }
}

TEST_CASE("mean distance pins down the documented constants") {
  // normalized hamming: exactly 1/2 in expectation
  const DistanceStats h = mean_distance_estimate(make_domain(DomainKind::hamming, 32), 1, 100000);
  CHECK(h.mean > 0.49);
  CHECK(h.mean < 0.51);
  // unit cube d=64: ~ sqrt(1/6) = 0.408
  const DistanceStats c =
      mean_distance_estimate(make_domain(DomainKind::unit_cube, 64), 2, 100000);
  CHECK(c.mean > 0.38);
  CHECK(c.mean < 0.44);
  // gaussian d=64 with 1/sqrt(2d): ~ 1
  const DistanceStats g =
      mean_distance_estimate(make_domain(DomainKind::gaussian, 64), 3, 100000);
  CHECK(g.mean > 0.97);
  CHECK(g.mean < 1.03);
}

TEST_CASE("mean_distance_estimate is deterministic in the seed") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 8);
  const DistanceStats a = mean_distance_estimate(spec, 4, 5000);
  const DistanceStats b = mean_distance_estimate(spec, 4, 5000);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
}
