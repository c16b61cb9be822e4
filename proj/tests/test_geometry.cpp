#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "maghull/error.hpp"
#include "maghull/geometry.hpp"
#include "maghull/pointcloud_io.hpp"
#include "support.hpp"

using namespace maghull;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("similarity of a single point is [1]") {
  const PointCloud c(3, {0.5, -1.0, 2.0});
  const auto s = build_similarity(c, 7.0);
  CHECK(s.size() == 1);
  CHECK(s(0, 0) == 1.0);
}

TEST_CASE("two points at distance ln 2 have similarity 1/2") {
  const PointCloud c(1, {0.0, std::log(2.0)});
  const auto s = build_similarity(c, 1.0);
  CHECK(s(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s(1, 0) == s(0, 1));
  CHECK(s(1, 1) == 1.0);
}

TEST_CASE("scale t equals scaling the coordinates") {
  Rng rng(1);
  const PointCloud c = testing::random_cloud(rng, 3, 2);
  const auto a = build_similarity(c, 2.0);
  const auto b = build_similarity(scale_coordinates(c, 2.0), 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(a(i, j) == doctest::Approx(b(i, j)).epsilon(1e-14));
}

TEST_CASE("pairwise distances") {
  const PointCloud c(2, {0, 0, 3, 4});
  const Matrix d = pairwise_distances(c);
  CHECK(d(0, 1) == 5.0);
  CHECK(d(1, 0) == 5.0);
  CHECK(d(0, 0) == 0.0);
  CHECK(pairwise_distances(PointCloud(2, {1, 1}))(0, 0) == 0.0);

  Rng rng(2);
  const PointCloud r = testing::random_cloud(rng, 10, 4);
  const Matrix dr = pairwise_distances(r);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += (r.point(i)[k] - r.point(j)[k]) * (r.point(i)[k] - r.point(j)[k]);
      CHECK(dr(i, j) == doctest::Approx(std::sqrt(s)).epsilon(1e-15));
    }
}

TEST_CASE("invalid clouds are rejected") {
  CHECK(code_of([] { PointCloud(2, {0.0, NAN}); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { PointCloud(2, {0.0, INFINITY}); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { PointCloud(2, {0.0, 1.0, 2.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_similarity(PointCloud(2, {0, 0, 1, 1, 0, 0}), 1.0); }) == ErrorCode::DuplicatePoints);
  CHECK(code_of([] { build_similarity(PointCloud(1, {0, 5e-13}), 1.0); }) == ErrorCode::DuplicatePoints);
  CHECK_NOTHROW(build_similarity(PointCloud(1, {0, 2e-12}), 1.0));
  CHECK(code_of([] { build_similarity(PointCloud(1, {0, 1}), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("similarity invariants: symmetric, unit diagonal, (0,1], decaying in t, factorisable") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud c = testing::random_cloud(rng, 25, 1 + trial % 4);
    const auto a = build_similarity(c, 0.5), b = build_similarity(c, 1.5);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(a(i, i) == 1.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        CHECK(a(i, j) == a(j, i));
        CHECK(a(i, j) > 0.0);
        CHECK(a(i, j) <= 1.0);
        if (i != j) CHECK(b(i, j) < a(i, j));
      }
    }
    CHECK_NOTHROW(CholeskyFactor::factor(a.entries()));
  }
}

TEST_CASE("CSV and JSON point files round-trip bit-exactly") {
  Rng rng(9);
  const PointCloud c = testing::random_cloud(rng, 17, 3, 1e3);
  CHECK(parse_csv_points(format_csv_points(c)) == c);
  CHECK(parse_json_points(format_json_points(c)) == c);

  const auto dir = std::filesystem::temp_directory_path() / "maghull_io_test";
  write_points(dir / "p.csv", c);
  write_points(dir / "p.json", c);
  CHECK(read_points(dir / "p.csv") == c);
  CHECK(read_points(dir / "p.json") == c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("CSV reader accepts an optional header and blank lines") {
  const PointCloud c = parse_csv_points("a,b\n1, 2\n\n3,4\n");
  CHECK(c.size() == 2);
  CHECK(c.point(1)[0] == 3.0);
  CHECK(parse_csv_points("1,2\n3,4").size() == 2);
  CHECK(code_of([] { parse_csv_points("1,2\n3\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_csv_points("1,2\nx,4\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_json_points("[[1,2],[3]]"); }) == ErrorCode::Parse);
}
