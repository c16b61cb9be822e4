#include "doctest.h"

#include <cmath>
#include <vector>

#include "maghull/datagen.hpp"
#include "maghull/linalg.hpp"
#include "maghull/simd/kernels.hpp"
#include "oracles/dense.hpp"

using namespace maghull;

namespace {

std::vector<double> randv(Rng& rng, std::size_t n, double lo = -1, double hi = 1) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

long double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return s;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  auto tables = simd::available();
  REQUIRE(!tables.empty());
  CHECK(tables.front()->isa == simd::Isa::Scalar);
  CHECK(&simd::scalar_kernels() == tables.front());
}

TEST_CASE("kernel variants agree with an extended-precision reference") {
  Rng rng(11);
  for (const simd::KernelTable* k : simd::available()) {
    CAPTURE(simd::to_string(k->isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 1001u}) {
      CAPTURE(n);
      const auto a = randv(rng, n), b = randv(rng, n);
      long double mag = 0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(static_cast<long double>(a[i]) * b[i]);
      // |error| <= n u sum|a_i b_i| for any summation order
      CHECK(std::abs(k->dot(a.data(), b.data(), n) - ref_dot(a, b)) <= (n + 1) * 1.2e-16L * mag + 1e-300L);

      std::vector<std::vector<double>> rows, cols;
      for (int r = 0; r < 4; ++r) rows.push_back(randv(rng, n));
      for (int c = 0; c < 2; ++c) cols.push_back(randv(rng, n));
      const double* ra[4] = {rows[0].data(), rows[1].data(), rows[2].data(), rows[3].data()};
      const double* ca[2] = {cols[0].data(), cols[1].data()};
      double out[8];
      k->dot_tile_4x2(ra, ca, n, out);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 2; ++c) CHECK(std::abs(out[2 * r + c] - ref_dot(rows[r], cols[c])) <= (n + 1) * 1.2e-16L * n);

      auto y = randv(rng, n);
      auto y0 = y;
      k->axpy(-0.75, a.data(), y.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - (y0[i] - 0.75 * a[i])) <= 4e-16);

      const auto x = randv(rng, n, 0.0, 5.0);
      std::vector<double> e(n);
      k->exp_neg_scaled(x.data(), 3.0, e.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(e[i] - std::exp(-3.0 * x[i])) <= 4e-16 * std::exp(-3.0 * x[i]));
    }
  }
}

TEST_CASE("vectorised exp handles the underflow range") {
  std::vector<double> x{0.0, 700.0, 708.0, 709.5, 730.0, 745.0, 745.2, 746.0, 1e6};
  for (const simd::KernelTable* k : simd::available()) {
    CAPTURE(simd::to_string(k->isa));
    std::vector<double> e(x.size());
    k->exp_neg_scaled(x.data(), 1.0, e.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ref = std::exp(-x[i]);
      CAPTURE(x[i]);
      if (ref == 0.0)
        CHECK(e[i] == 0.0);
      else if (ref < 2.2250738585072014e-308)
        CHECK(std::abs(e[i] - ref) <= 1e-323);  // subnormal: absolute
      else
        CHECK(std::abs(e[i] - ref) <= 4e-16 * ref);
    }
  }
}

TEST_CASE("Cholesky factors agree across kernel tables") {
  Rng rng(5);
  std::vector<double> c(300 * 3);
  for (double& v : c) v = rng.uniform(0, 4);
  const PointCloud cloud(3, c);
  const auto sim = build_similarity(cloud, 2.0);
  const auto ref = CholeskyFactor::factor(sim.entries(), 1e-14, simd::scalar_kernels());
  for (const simd::KernelTable* k : simd::available()) {
    CAPTURE(simd::to_string(k->isa));
    const auto f = CholeskyFactor::factor(sim.entries(), 1e-14, *k);
    double worst = 0;
    for (std::size_t i = 0; i < 300; ++i)
      for (std::size_t j = 0; j <= i; ++j) worst = std::max(worst, std::abs(f.lower()(i, j) - ref.lower()(i, j)));
    CHECK(worst < 1e-12);
    std::vector<double> ones(300, 1.0);
    const auto w = f.solve(ones);
    const auto wref = oracle::weights(cloud, 2.0);
    for (std::size_t i = 0; i < 300; ++i) CHECK(std::abs(w[i] - wref(static_cast<Eigen::Index>(i))) < 1e-9);
  }
}
