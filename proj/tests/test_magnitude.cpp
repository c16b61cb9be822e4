#include "doctest.h"

#include <cmath>
#include <limits>

#include "maghull/error.hpp"
#include "maghull/magnitude.hpp"
#include "oracles/dense.hpp"
#include "support.hpp"

using namespace maghull;

TEST_CASE("single point has weight 1 and magnitude 1") {
  const auto w = solve_weights(build_similarity(PointCloud(2, {3, 4}), 1.0));
  CHECK(w.weights == std::vector<double>{1.0});
  CHECK(w.magnitude == 1.0);
}

TEST_CASE("two points match the closed-form 2x2 inverse") {
  for (double d : {1e-3, 0.1, 1.0, 3.7, 40.0}) {
    const auto w = solve_weights(build_similarity(PointCloud(1, {0.0, d}), 1.0));
    const double expect = 1.0 / (1.0 + std::exp(-d));
    CHECK(w.weights[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(w.weights[1] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(w.magnitude == doctest::Approx(2.0 * expect).epsilon(1e-12));
  }
}

TEST_CASE("weights match a dense LU oracle and satisfy the weight-vector invariants") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud c = testing::random_cloud(rng, 40, 1 + trial % 5);
    const double t = 0.5 + trial;
    const auto sim = build_similarity(c, t);
    const auto w = solve_weights(sim);
    const auto ref = oracle::weights(c, t);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(w.weights[i] == doctest::Approx(ref(i)).epsilon(1e-8));
    double sum = 0;
    for (double x : w.weights) sum += x;
    CHECK(w.magnitude == doctest::Approx(sum).epsilon(1e-14));
    CHECK(residual_inf_norm(sim, w.weights) <= solve_tolerance(c.size()));
    const auto zw = multiply(sim.entries(), w.weights);
    double quad = 0;
    for (std::size_t i = 0; i < c.size(); ++i) quad += w.weights[i] * zw[i];
    CHECK(std::abs(quad - w.magnitude) <= solve_tolerance(c.size()) * c.size());
  }
}

TEST_CASE("three points: weights ordered by the opposite side lengths") {
  // |x1-x3| >= |x2-x3| >= |x1-x2|  =>  w(x3) >= w(x1) >= w(x2).
  // The closed-form differences give w(x1) >= w(x2), not the reverse.
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const PointCloud c = testing::random_cloud(rng, 3, 2);
    const Matrix d = pairwise_distances(c);
    // labelling p[0..2] = x1..x3 for which the hypothesis holds
    std::vector<std::size_t> p{0, 1, 2};
    bool found = false;
    do {
      if (d(p[0], p[2]) >= d(p[1], p[2]) && d(p[1], p[2]) >= d(p[0], p[1])) found = true;
    } while (!found && std::next_permutation(p.begin(), p.end()));
    REQUIRE(found);
    const auto w = solve_weights(build_similarity(c, 1.0 + trial % 5)).weights;
    CHECK(w[p[2]] >= w[p[0]] - 1e-12);
    CHECK(w[p[0]] >= w[p[1]] - 1e-12);
  }
}

TEST_CASE("three collinear points: the middle point has the smallest weight") {
  // x1 = 0, x2 = 0.1, x3 = 0.8 satisfies the side-length hypothesis; x2 sits between the others
  const auto w = solve_weights(build_similarity(PointCloud(1, {0.0, 0.1, 0.8}), 1.0)).weights;
  CHECK(w[1] < w[0]);
  CHECK(w[0] < w[2]);
  // exact weights from the 3x3 cofactors, a = e^-0.1, b = e^-0.7, c = e^-0.8
  const double a = std::exp(-0.1), b = std::exp(-0.7), c = std::exp(-0.8);
  const double det = 1 + 2 * a * b * c - a * a - b * b - c * c;
  CHECK(w[0] == doctest::Approx((1 - b) * (1 + b - a - c) / det).epsilon(1e-13));
  CHECK(w[1] == doctest::Approx((1 - c) * (1 + c - a - b) / det).epsilon(1e-13));
  CHECK(w[2] == doctest::Approx((1 - a) * (1 + a - b - c) / det).epsilon(1e-13));
}

TEST_CASE("magnitude function limits") {
  Rng rng(12);
  const PointCloud c = testing::separated_cloud(rng, 30, 2, 0.1);
  const std::vector<double> ts{1e-6, 400.0, std::numeric_limits<double>::infinity()};
  const auto m = magnitude_function(c, ts);
  REQUIRE(m.size() == 3);
  CHECK(std::abs(m[0].magnitude - 1.0) < 1e-3);
  CHECK(std::abs(m[1].magnitude - 30.0) < 1e-6);
  CHECK(m[2].magnitude == 30.0);
  CHECK(m[1].scale == 400.0);
}

TEST_CASE("doubling t equals doubling the coordinates") {
  const PointCloud c(2, {0.1, 0.2, 0.7, -0.3});
  const double a = magnitude_function(c, std::vector<double>{2.0})[0].magnitude;
  const double b = solve_weights(build_similarity(scale_coordinates(c, 2.0), 1.0)).magnitude;
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("subsets have magnitude between 1 and that of the whole set") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const PointCloud x = testing::random_cloud(rng, 30, 1 + trial % 4);
    const double t = 0.3 + 0.4 * trial;
    const double mx = solve_weights(build_similarity(x, t)).magnitude;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < 30; ++i)
      if (rng.uniform() < 0.5) idx.push_back(i);
    if (idx.empty()) idx.push_back(0);
    const double my = solve_weights(build_similarity(x.subset(idx), t)).magnitude;
    CHECK(my >= 1.0 - 1e-9);
    CHECK(my <= mx + 1e-9);
  }
}

TEST_CASE("nested samples in a fixed region have nondecreasing magnitude") {
  Rng rng(32);
  const PointCloud x = testing::random_cloud(rng, 120, 2);
  double prev = 0;
  for (std::size_t n = 10; n <= 120; n += 10) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    const double m = solve_weights(build_similarity(x.subset(idx), 3.0)).magnitude;
    CHECK(m >= prev - 1e-9);
    prev = m;
  }
}

TEST_CASE("solve residual budget holds on generated clouds over t in [1e-3, 1e3]") {
  for (DatasetKind kind :
       {DatasetKind::Annulus, DatasetKind::Square, DatasetKind::NoisyMoons, DatasetKind::GaussianBlobs}) {
    DatasetSpec s;
    s.kind = kind;
    s.count = 150;
    s.dim = 2;
    s.seed = 77;
    const PointCloud c = generate(s);
    for (double t : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3}) {
      CAPTURE(to_string(kind));
      CAPTURE(t);
      const auto sim = build_similarity(c, t);
      const auto w = solve_weights(sim);
      CHECK(residual_inf_norm(sim, w.weights) <= solve_tolerance(c.size()));
    }
  }
}

TEST_CASE("solve cache reuses factorizations") {
  SolveCache cache(4);
  const PointCloud c(1, {0, 1, 3});
  MagnitudeOptions opt;
  opt.cache = &cache;
  const std::vector<double> ts{1.0, 2.0, 1.0};
  const auto m = magnitude_function(c, ts, opt);
  CHECK(m[0].magnitude == m[2].magnitude);
  CHECK(cache.hits() == 1);
  CHECK(cache.size() == 2);
  CHECK(SolveCache::fingerprint(c) != SolveCache::fingerprint(PointCloud(1, {0, 1, 3.5})));
}

TEST_CASE("solver errors name the offending scale") {
  // Points 1e-9 apart are not duplicates but zeta is singular to working precision.
  const PointCloud c(1, {0.0, 1e-9, 2e-9});
  try {
    magnitude_function(c, std::vector<double>{1e-6});
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FactorizationFailure);
    CHECK(std::string(e.what()).find("t=1e-06") != std::string::npos);
  }
}

TEST_CASE("log(1 + w) colouring") {
  WeightVector w{{0.0, std::exp(1.0) - 1.0}, 1.0, 0.0};
  const auto c = log_weight_coloring(w);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == doctest::Approx(1.0).epsilon(1e-15));
  const auto single = log_weight_coloring(solve_weights(build_similarity(PointCloud(1, {0.0}), 1.0)));
  CHECK(single[0] == doctest::Approx(std::log(2.0)));
  WeightVector bad{{0.5, -1.0}, 1.0, -0.5};
  try {
    log_weight_coloring(bad);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonRepresentable);
  }
}
