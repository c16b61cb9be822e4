#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"
#include "maghull/datagen.hpp"
#include "maghull/hull_filter.hpp"
#include "maghull/pointcloud_io.hpp"
#include "maghull/textio.hpp"

using namespace maghull;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "maghull");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_table(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& f : split_csv_line(line)) {
      double v;
      REQUIRE(parse_double(f, v));
      row.push_back(v);
    }
    rows.push_back(row);
  }
  return rows;
}

struct Fixture {
  fs::path dir = fs::temp_directory_path() / "maghull_cli_test";
  fs::path pts = dir / "pts.csv";
  Fixture() {
    fs::remove_all(dir);
    fs::create_directories(dir);
    REQUIRE(run({"datagen", "--kind", "blobs", "--n", "80", "--dim", "2", "--seed", "7", "--out", pts.string()}).code == 0);
  }
  ~Fixture() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "datagen writes the generator's cloud") {
  DatasetSpec s;
  s.count = 80;
  s.dim = 2;
  s.seed = 7;
  CHECK(read_points(pts).coords() == generate(s).coords());
  CHECK(!fs::exists(fs::path(pts) += ".tmp"));
}

TEST_CASE_FIXTURE(Fixture, "weights column sums to the reported magnitude and equals the library") {
  const Run r = run({"weights", "--input", pts.string(), "--t", "1.5"});
  REQUIRE(r.code == 0);
  const auto rows = parse_table(r.out);
  const auto w = solve_weights(build_similarity(read_points(pts), 1.5));
  REQUIRE(rows.size() == 80);
  double sum = 0;
  for (std::size_t i = 0; i < 80; ++i) {
    CHECK(rows[i][2] == w.weights[i]);
    sum += rows[i][2];
  }
  CHECK(sum == doctest::Approx(w.magnitude).epsilon(1e-13));

  const Run j = run({"weights", "--input", pts.string(), "--t", "1.5", "--format", "json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["magnitude"].get<double>() == w.magnitude);
}

TEST_CASE_FIXTURE(Fixture, "moments CSV has mu0 and log(1+mu0) equal to the library") {
  const fs::path out = dir / "m.csv";
  REQUIRE(run({"moments", "--input", pts.string(), "--order", "32", "--out", out.string(), "--moment", "2"}).code == 0);
  const std::string text = read_file(out);
  CHECK(text.rfind("x0,x1,w,mu0,log1p_mu0,mu2\n", 0) == 0);
  const auto rows = parse_table(text);
  const PointCloud c = read_points(pts);
  const auto rule = QuadratureRule::gauss_laguerre(32);
  const auto mv = zeroth_moments(c, rule);
  const auto mu2 = higher_moments(c, 2, rule, {1, false});
  for (std::size_t i = 0; i < 80; ++i) {
    CHECK(rows[i][3] == mv.mu0[i]);
    CHECK(rows[i][4] == std::log1p(mv.mu0[i]));
    CHECK(rows[i][5] == mu2[i]);
  }
}

TEST_CASE_FIXTURE(Fixture, "hull and hull-approx with epsilon 0 report the same volume") {
  const Run h = run({"hull", "--input", pts.string(), "--off", (dir / "h.off").string()});
  REQUIRE(h.code == 0);
  const HullResult lib = convex_hull(read_points(pts));
  CHECK(read_file(dir / "h.off") == format_off(lib));
  std::ostringstream v;
  v.precision(12);
  v << lib.volume;
  CHECK(h.out.find("volume " + v.str() + "\n") != std::string::npos);

  const Run a = run({"hull-approx", "--input", pts.string(), "--epsilon", "0", "--order", "32"});
  REQUIRE(a.code == 0);
  const auto rep = nlohmann::json::parse(a.out);
  CHECK(rep["approxVolume"].get<double>() == lib.volume);
  CHECK(rep["fullVolume"].get<double>() == lib.volume);
  CHECK(rep["removedIndices"].empty());

  const Run inf = run({"hull-approx", "--input", pts.string(), "--epsilon", "inf", "--order", "32",
                       "--threshold-convention", "paper", "--no-error-estimate"});
  REQUIRE(inf.code == 0);
  const auto ri = nlohmann::json::parse(inf.out);
  CHECK(ri["keptIndices"].size() == 3);
  CHECK(ri["thresholdConvention"] == "paper");
}

TEST_CASE_FIXTURE(Fixture, "magfn matches the library") {
  const Run r = run({"magfn", "--input", pts.string(), "--t", "0.5,2,inf"});
  REQUIRE(r.code == 0);
  const auto rows = parse_table(r.out);
  const PointCloud c = read_points(pts);
  const auto lib = magnitude_function(c, std::vector<double>{0.5, 2.0, INFINITY});
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i][1] == lib[i].magnitude);
  CHECK(parse_table(run({"magfn", "--input", pts.string(), "--t-min", "0.1", "--t-max", "10", "--steps", "5"}).out).size() == 5);
}

TEST_CASE_FIXTURE(Fixture, "experiments subcommand writes the results directory") {
  const fs::path cfg = dir / "exp.json";
  write_file_atomic(cfg, R"({"dims": [2], "trialsPerDim": 2, "pointsPerTrial": 60, "quadratureOrder": 24})");
  const Run r = run({"experiments", "table1", "--config", cfg.string(), "--seed", "3", "--out", (dir / "res").string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "res" / "summary.csv"));
  CHECK(fs::exists(dir / "res" / "trials.jsonl"));
  CHECK(fs::exists(dir / "res" / "curves" / "d2_trial001.svg"));
  CHECK(r.out == read_file(dir / "res" / "summary.csv"));
}

TEST_CASE_FIXTURE(Fixture, "exit statuses") {
  // validation: one-line diagnostic, status 2
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"datagen", "--kind", "blobs", "--n", "10", "--out", (dir / "x.csv").string()},
           {"datagen", "--kind", "moons", "--n", "10", "--dim", "3", "--seed", "1", "--out", (dir / "x.csv").string()},
           {"weights", "--input", (dir / "missing.csv").string()},
           {"weights", "--input", pts.string(), "--t", "-1"},
           {"hull-approx", "--input", pts.string(), "--epsilon", "-1"},
           {"experiments", "table1", "--out", (dir / "r").string()},
           {"bogus"},
           {}}) {
    const Run r = run(args);
    CHECK(r.code == 2);
    CHECK(r.err.find('\n') == r.err.size() - 1);
  }
  // numeric failure: status 1, module error verbatim
  write_file_atomic(dir / "close.csv", "0\n1e-9\n2e-9\n");
  const Run r = run({"weights", "--input", (dir / "close.csv").string(), "--t", "1e-6"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("FactorizationFailure", 0) == 0);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"hull", "--help"}).out.find("--off") != std::string::npos);
}
