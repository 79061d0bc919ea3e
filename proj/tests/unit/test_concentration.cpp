#include "doctest.h"

#include <cmath>

#include "mcl/concentration.hpp"
#include "mcl/rng.hpp"

using namespace mcl;

// frozen from an exact binomial-sum oracle computed independently
constexpr double kHalfcube50 = 5.94602262797181425e-02;   // P(Bin(50,1/2) >= 31)
constexpr double kHalfcube200 = 1.81747397626496926e-03;  // P(Bin(200,1/2) >= 121)

TEST_CASE("chernoff-okamoto bound evaluates its formula") {
  CHECK(chernoff_okamoto_bound(0.1, 50) == doctest::Approx(std::exp(-0.375)).epsilon(1e-15));
  CHECK(chernoff_okamoto_bound(0.2, 200) == doctest::Approx(std::exp(-6.0)).epsilon(1e-15));
  // value tends to 1 as eps -> 0; the defined alpha at eps = 0 is 1/2,
  // which is why eps <= 0 is rejected rather than evaluated
  CHECK(chernoff_okamoto_bound(1e-9, 50) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(chernoff_okamoto_bound(0.0, 50), Error);
  CHECK_THROWS_AS(chernoff_okamoto_bound(-0.1, 50), Error);
  CHECK_THROWS_AS(chernoff_okamoto_bound(1.5, 50), Error);
}

TEST_CASE("halfcube alpha matches the frozen binomial oracle") {
  CHECK(std::abs(halfcube_alpha_exact(50, 0.1) - kHalfcube50) <= 1e-12);
  CHECK(std::abs(halfcube_alpha_exact(200, 0.1) - kHalfcube200) <= 1e-12);
  // P(Bin(10,1/2) >= 8) = 56/1024 exactly
  CHECK(halfcube_alpha_exact(10, 0.2) == doctest::Approx(56.0 / 1024.0).epsilon(1e-15));
  // impossible tail
  CHECK(halfcube_alpha_exact(2, 0.5) == 0.0);
}

TEST_CASE("halfcube alpha rejects off-grid eps and names the grid") {
  try {
    halfcube_alpha_exact(50, 0.123);
    FAIL("expected a bad_grid error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_grid);
    CHECK(std::string(e.what()).find("t/50") != std::string::npos);
  }
}

TEST_CASE("exact halfcube stays below the chernoff bound on the whole grid") {
  for (const std::uint32_t d : {10u, 50u, 100u, 200u}) {
    for (std::uint32_t t = 1; t <= d; ++t) {
      const double eps = static_cast<double>(t) / d;
      CHECK(halfcube_alpha_exact(d, eps) <= chernoff_okamoto_bound(eps, d));
    }
  }
}

TEST_CASE("empirical lower bound brackets the exact halfcube value") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 50);
  const std::uint64_t samples = 100000;
  const ConcentrationEstimate est = empirical_alpha_lower(spec, 91, samples, {0.1});
  const double sigma = std::sqrt(kHalfcube50 * (1 - kHalfcube50) / samples);
  CHECK(std::abs(est.alpha[0] - kHalfcube50) <= 3 * sigma + 1e-12);
  CHECK(est.stderrs[0] > 0.0);
}

TEST_CASE("empirical lower bound is monotone and vanishes past the diameter") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 20);
  std::vector<double> grid;
  for (std::uint32_t t = 1; t <= 30; ++t) grid.push_back(t / 20.0);
  const ConcentrationEstimate est = empirical_alpha_lower(spec, 17, 20000, grid);
  for (std::size_t g = 1; g < est.alpha.size(); ++g) CHECK(est.alpha[g] <= est.alpha[g - 1]);
  CHECK(est.alpha.back() == 0.0);  // eps = 1.5 x diameter
  for (const double a : est.alpha) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("concentration sharpens with dimension on the sphere") {
  const ConcentrationEstimate lo =
      empirical_alpha_lower(make_domain(DomainKind::sphere, 16), 5, 20000, {0.2});
  const ConcentrationEstimate hi =
      empirical_alpha_lower(make_domain(DomainKind::sphere, 64), 5, 20000, {0.2});
  CHECK(hi.alpha[0] < lo.alpha[0]);
}

TEST_CASE("empirical estimator rejects tiny sample budgets") {
  CHECK_THROWS_AS(empirical_alpha_lower(make_domain(DomainKind::hamming, 8), 1, 10, {0.125}),
                  Error);
}

TEST_CASE("nn radius stats land near the entropy oracle at d=64") {
  const NNRadiusStats s = nn_radius_stats(make_domain(DomainKind::hamming, 64), 256, 500, 1001);
  CHECK(s.p10 <= s.median);
  CHECK(s.median <= s.p90);
  CHECK(s.occupancy >= 1.0);
  CHECK(std::abs(s.median - 0.30) <= 0.03);
}

TEST_CASE("occupancy stays within the desk-scale caps") {
  // ties are common on the lattice, impossible (a.s.) on continuous domains
  const NNRadiusStats cube = nn_radius_stats(make_domain(DomainKind::hamming, 64), 256, 300, 4);
  CHECK(cube.occupancy <= 6.0);
  CHECK(cube.occupancy > 1.0);
  for (const DomainKind kind :
       {DomainKind::unit_cube, DomainKind::gaussian, DomainKind::sphere}) {
    const NNRadiusStats s = nn_radius_stats(make_domain(kind, 16), 256, 300, 4);
    CHECK(s.occupancy <= 4.0);
  }
}

TEST_CASE("nn radius stats handle n=2") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 3);
  const NNRadiusStats s = nn_radius_stats(spec, 2, 1, 5);
  const auto data = sample_points(spec, 5, 2);
  const Point w = sample_point(spec, 5, streams::kQueries, 0);
  const double expected = std::min(distance(spec, w, data[0]), distance(spec, w, data[1]));
  CHECK(s.median == expected);
  CHECK(s.occupancy >= 1.0);
}

TEST_CASE("nn radius stats are thread-count independent") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 32);
  const NNRadiusStats a = nn_radius_stats(spec, 128, 64, 7, 1);
  const NNRadiusStats b = nn_radius_stats(spec, 128, 64, 7, 4);
  CHECK(a.median == b.median);
  CHECK(a.mean == b.mean);
  CHECK(a.occupancy == b.occupancy);
}

TEST_CASE("entropy oracle reproduces the desk-scale predictions") {
  CHECK(nn_median_prediction(64, 256) == doctest::Approx(0.2949).epsilon(2e-3));
  CHECK(nn_median_prediction(144, 4096) == doctest::Approx(0.3317).epsilon(2e-3));
  CHECK(nn_median_prediction(256, 65536) == doctest::Approx(0.3539).epsilon(2e-3));
}

TEST_CASE("subspace bound transfers and clamps") {
  CHECK(subspace_alpha_bound(0.01, 0.5) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(subspace_alpha_bound(0.5, 0.25) == 1.0);
  CHECK(subspace_alpha_bound(0.0, 0.3) == 0.0);
  CHECK_THROWS_AS(subspace_alpha_bound(0.1, 0.0), Error);
  CHECK_THROWS_AS(subspace_alpha_bound(0.1, -1.0), Error);
  CHECK_THROWS_AS(subspace_alpha_bound(1.5, 0.5), Error);
}

TEST_CASE("bin access prediction formulas") {
  const BinAccessPrediction p4 = bin_access_prediction(4);
  CHECK(p4.min_bins_met == 1.0);
  CHECK(p4.exceptional_measure == 0.25);
  const BinAccessPrediction p100 = bin_access_prediction(100);
  CHECK(p100.min_bins_met == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(p100.exceptional_measure == doctest::Approx(0.05).epsilon(1e-15));
  const BinAccessPrediction p1e4 = bin_access_prediction(10000);
  CHECK(p1e4.min_bins_met == doctest::Approx(50.0).epsilon(1e-15));
  CHECK(p1e4.exceptional_measure == doctest::Approx(0.005).epsilon(1e-15));
  CHECK_THROWS_AS(bin_access_prediction(3.9), Error);
}

TEST_CASE("neighborhood of the whole space has measure 1") {
  const DomainSpec spec = make_domain(DomainKind::gaussian, 4);
  const MeasureEstimate est = neighborhood_measure(spec, whole_space_set(), 0.01, 2000, 3);
  CHECK(est.value == 1.0);
}

TEST_CASE("halfcube neighborhood matches the exact binomial complement") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 50);
  const std::uint64_t samples = 100000;
  const MeasureEstimate est = neighborhood_measure(spec, halfcube_set(spec), 0.1, samples, 19);
  const double expected = 1.0 - kHalfcube50;
  const double sigma = std::sqrt(expected * (1 - expected) / samples);
  CHECK(std::abs(est.value - expected) <= 3 * sigma + 1e-12);
}

TEST_CASE("gromov-milman implication holds for the halfcube") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 50);
  const double gamma = 0.1;
  const MeasureEstimate mu_a = neighborhood_measure(spec, halfcube_set(spec), 0.0, 50000, 23);
  const double alpha_gamma = halfcube_alpha_exact(50, gamma);
  REQUIRE(mu_a.value > alpha_gamma);  // the implication only fires above alpha
  const MeasureEstimate mu_ag = neighborhood_measure(spec, halfcube_set(spec), gamma, 50000, 23);
  CHECK(mu_ag.value > 0.5 - 3 * mu_ag.stderr_);
}

TEST_CASE("witness-sample fallback approximates the exact hook on a tiny cube") {
  const DomainSpec spec = make_domain(DomainKind::hamming, 8);
  SetSpec no_hook = halfcube_set(spec);
  no_hook.dist_to_set = nullptr;
  const MeasureEstimate approx = neighborhood_measure(spec, no_hook, 0.125, 20000, 29);
  const MeasureEstimate exact = neighborhood_measure(spec, halfcube_set(spec), 0.125, 20000, 29);
  CHECK(std::abs(approx.value - exact.value) <= 0.05);
  CHECK(approx.value <= exact.value + 1e-12);  // fallback never overshoots
}

TEST_CASE("an empty predicate raises witness_empty") {
  const DomainSpec spec = make_domain(DomainKind::unit_cube, 2);
  SetSpec never;
  never.name = "never";
  never.contains = [](const Point&) { return false; };
  try {
    neighborhood_measure(spec, never, 0.1, 2000, 1);
    FAIL("expected witness_empty");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::witness_empty);
  }
}
