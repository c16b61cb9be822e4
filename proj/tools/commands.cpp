#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maghull/datagen.hpp"
#include "maghull/error.hpp"
#include "maghull/experiments.hpp"
#include "maghull/hull.hpp"
#include "maghull/hull_filter.hpp"
#include "maghull/magnitude.hpp"
#include "maghull/moments.hpp"
#include "maghull/pointcloud_io.hpp"
#include "maghull/textio.hpp"

namespace maghull::cli {
namespace {

using nlohmann::json;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSpec:
    case ErrorCode::DuplicatePoints:
    case ErrorCode::NonFinite:
    case ErrorCode::Io:
    case ErrorCode::Parse:
      return true;
    default:
      return false;
  }
}

std::string format_12(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

bool wants_json(const std::string& format, const std::string& path) {
  if (!format.empty()) return format == "json";
  return std::filesystem::path(path).extension() == ".json";
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file_atomic(path, text);
}

std::string coordinate_header(std::size_t d) {
  std::string h;
  for (std::size_t j = 0; j < d; ++j) h += "x" + std::to_string(j) + ",";
  return h;
}

std::string coordinate_fields(const PointCloud& cloud, std::size_t i) {
  std::string s;
  for (double x : cloud.point(i)) s += format_double(x) + ",";
  return s;
}

QuadratureRule make_rule(const std::string& kind, std::size_t order) {
  if (kind == "gauss-laguerre") return QuadratureRule::gauss_laguerre(order);
  if (kind == "log-trapezoid") return QuadratureRule::log_trapezoid(order);
  throw Usage("--quadrature must be gauss-laguerre or log-trapezoid");
}

json indices_json(const std::vector<std::size_t>& v) { return json(v); }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnitude, moments and moment-filtered convex hulls of point clouds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "maghull 1.0.0");
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  // datagen
  auto* dg = app.add_subcommand("datagen", "Generate a synthetic point cloud");
  std::string dg_kind, dg_out;
  std::size_t dg_n = 0, dg_dim = 2;
  std::optional<std::uint64_t> dg_seed;
  DatasetSpec dg_spec;
  dg->add_option("--kind", dg_kind, "annulus, square, noisy-moons (moons) or gaussian-blobs (blobs)")->required();
  dg->add_option("--n", dg_n, "Number of points")->required();
  dg->add_option("--dim", dg_dim, "Dimension")->capture_default_str();
  dg->add_option("--seed", dg_seed, "Random seed (required)");
  dg->add_option("--out", dg_out, "Output path (.csv or .json)")->required();
  dg->add_option("--inner", dg_spec.inner_radius, "Annulus inner radius")->capture_default_str();
  dg->add_option("--outer", dg_spec.outer_radius, "Annulus outer radius")->capture_default_str();
  dg->add_option("--side", dg_spec.side, "Square side")->capture_default_str();
  dg->add_option("--noise", dg_spec.noise, "Moons noise sigma")->capture_default_str();
  dg->add_option("--blobs", dg_spec.blob_count, "Number of blobs")->capture_default_str();
  dg->add_option("--sigma", dg_spec.blob_sigma, "Blob sigma")->capture_default_str();
  dg->add_option("--box", dg_spec.center_box, "Blob centers uniform in [-box, box]^d")->capture_default_str();

  // weights
  auto* wt = app.add_subcommand("weights", "Weight vector and magnitude at scale t");
  std::string wt_in, wt_out, wt_format;
  double wt_t = 1.0;
  wt->add_option("--input", wt_in, "Point file (.csv or .json)")->required()->check(CLI::ExistingFile);
  wt->add_option("--t", wt_t, "Scale t > 0")->capture_default_str();
  wt->add_option("--out", wt_out, "Output path (default stdout)");
  wt->add_option("--format", wt_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // moments
  auto* mo = app.add_subcommand("moments", "Per-point zeroth moments");
  std::string mo_in, mo_out, mo_quad = "gauss-laguerre";
  std::size_t mo_order = kDefaultQuadratureOrder;
  std::optional<unsigned> mo_n;
  std::optional<double> mo_laplace;
  bool mo_no_estimate = false;
  mo->add_option("--input", mo_in, "Point file (.csv or .json)")->required()->check(CLI::ExistingFile);
  mo->add_option("--order", mo_order, "Quadrature order")->capture_default_str()->check(CLI::Range(1, 512));
  mo->add_option("--quadrature", mo_quad, "gauss-laguerre or log-trapezoid")->capture_default_str();
  mo->add_option("--moment", mo_n, "Also report mu_n for this n");
  mo->add_option("--laplace", mo_laplace, "Also report the shifted Laplace transform at s >= 0");
  mo->add_flag("--no-error-estimate", mo_no_estimate, "Skip the doubled-order divergence check");
  mo->add_option("--out", mo_out, "Output CSV (default stdout)");

  // hull
  auto* hu = app.add_subcommand("hull", "Exact convex hull");
  std::string hu_in, hu_off;
  hu->add_option("--input", hu_in, "Point file (.csv or .json)")->required()->check(CLI::ExistingFile);
  hu->add_option("--off", hu_off, "Write the hull as OFF text");

  // hull-approx
  auto* ha = app.add_subcommand("hull-approx", "Moment-filtered convex hull");
  std::string ha_in, ha_out, ha_conv = "derived", ha_quad = "gauss-laguerre";
  double ha_eps = 0.0;
  std::size_t ha_order = kDefaultQuadratureOrder;
  bool ha_no_estimate = false;
  ha->add_option("--input", ha_in, "Point file (.csv or .json)")->required()->check(CLI::ExistingFile);
  ha->add_option("--epsilon", ha_eps, "Error budget (inf allowed)")->required();
  ha->add_option("--threshold-convention", ha_conv, "derived or paper")
      ->capture_default_str()
      ->check(CLI::IsMember({"derived", "paper"}));
  ha->add_option("--order", ha_order, "Quadrature order")->capture_default_str()->check(CLI::Range(1, 512));
  ha->add_option("--quadrature", ha_quad, "gauss-laguerre or log-trapezoid")->capture_default_str();
  ha->add_flag("--no-error-estimate", ha_no_estimate, "Skip the doubled-order divergence check");
  ha->add_option("--out", ha_out, "Report JSON (default stdout)");

  // magfn
  auto* mf = app.add_subcommand("magfn", "Magnitude function t -> |tX|");
  std::string mf_in, mf_out;
  std::vector<double> mf_ts;
  double mf_min = 0.0, mf_max = 0.0;
  std::size_t mf_steps = 0;
  mf->add_option("--input", mf_in, "Point file (.csv or .json)")->required()->check(CLI::ExistingFile);
  mf->add_option("--t", mf_ts, "Scales (comma separated; inf allowed)")->delimiter(',');
  mf->add_option("--t-min", mf_min, "Log-spaced grid start");
  mf->add_option("--t-max", mf_max, "Log-spaced grid end");
  mf->add_option("--steps", mf_steps, "Log-spaced grid size");
  mf->add_option("--out", mf_out, "Output CSV (default stdout)");

  // experiments
  auto* ex = app.add_subcommand("experiments", "Table 1 statistics and prefix curves");
  std::string ex_which, ex_config, ex_out;
  std::optional<std::uint64_t> ex_seed;
  ex->add_option("which", ex_which, "table1 or curves")->required()->check(CLI::IsMember({"table1", "curves"}));
  ex->add_option("--config", ex_config, "Experiment config JSON")->check(CLI::ExistingFile);
  ex->add_option("--out", ex_out, "Results directory")->required();
  ex->add_option("--seed", ex_seed, "Base seed (required unless the config lists seeds)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    err << "error: " << msg << "\n";
    return 2;
  }

  try {
    if (*dg) {
      if (!dg_seed) throw Usage("datagen requires --seed");
      dg_spec.kind = parse_dataset_kind(dg_kind);
      dg_spec.count = dg_n;
      dg_spec.dim = dg_dim;
      dg_spec.seed = *dg_seed;
      write_points(dg_out, generate(dg_spec));
      return 0;
    }

    if (*wt) {
      const PointCloud cloud = read_points(wt_in);
      if (!(wt_t > 0.0)) throw Usage("--t must be positive");
      const WeightVector w = std::isinf(wt_t) ? limit_weights(cloud.size()) : solve_weights(build_similarity(cloud, wt_t));
      std::string text;
      if (wants_json(wt_format, wt_out)) {
        text = json{{"t", w.scale}, {"magnitude", w.magnitude}, {"weights", w.weights}}.dump(2) + "\n";
      } else {
        text = coordinate_header(cloud.dim()) + "w\n";
        for (std::size_t i = 0; i < cloud.size(); ++i)
          text += coordinate_fields(cloud, i) + format_double(w.weights[i]) + "\n";
      }
      emit(wt_out, text, out);
      if (!wt_out.empty() && wt_out != "-") out << "magnitude " << format_double(w.magnitude) << "\n";
      return 0;
    }

    if (*mo) {
      const PointCloud cloud = read_points(mo_in);
      const QuadratureRule rule = make_rule(mo_quad, mo_order);
      MomentOptions opts;
      opts.threads = threads;
      opts.estimate_error = !mo_no_estimate;
      const MomentVector mv = zeroth_moments(cloud, rule, opts);
      const WeightVector w1 = solve_weights(build_similarity(cloud, 1.0));
      std::vector<double> mun, lap;
      if (mo_n) mun = higher_moments(cloud, *mo_n, rule, {threads, false});
      if (mo_laplace) {
        if (!(*mo_laplace >= 0.0)) throw Usage("--laplace must be nonnegative");
        lap = laplace_moment(cloud, *mo_laplace, rule, {threads, false});
      }
      std::string text = coordinate_header(cloud.dim()) + "w,mu0,log1p_mu0";
      if (mo_n) text += ",mu" + std::to_string(*mo_n);
      if (mo_laplace) text += ",laplace";
      text += "\n";
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        text += coordinate_fields(cloud, i) + format_double(w1.weights[i]) + "," + format_double(mv.mu0[i]) + "," +
                format_double(std::log1p(mv.mu0[i]));
        if (mo_n) text += "," + format_double(mun[i]);
        if (mo_laplace) text += "," + format_double(lap[i]);
        text += "\n";
      }
      emit(mo_out, text, out);
      return 0;
    }

    if (*hu) {
      const PointCloud cloud = read_points(hu_in);
      const HullResult hull = convex_hull(cloud);
      if (!hu_off.empty()) write_file_atomic(hu_off, format_off(hull));
      out << "vertices " << hull.vertex_indices.size() << "\n";
      out << "facets " << hull.facets.size() << "\n";
      out << "volume " << format_12(hull.volume) << "\n";
      if (hull.degenerate) out << "degenerate\n";
      return 0;
    }

    if (*ha) {
      const PointCloud cloud = read_points(ha_in);
      if (!(ha_eps >= 0.0)) throw Usage("--epsilon must be nonnegative");
      MomentOptions opts;
      opts.threads = threads;
      opts.estimate_error = !ha_no_estimate;
      const ApproximateHull approx =
          approximate_hull(cloud, ha_eps, make_rule(ha_quad, ha_order), parse_threshold_convention(ha_conv), opts);
      const HullResult full = convex_hull(cloud);
      const FilterReport& r = approx.report;
      json curve = json::array();
      for (const ThresholdPoint& p : r.threshold_curve) curve.push_back({p.i, p.mu0, p.threshold});
      json j{{"epsilon", std::isinf(r.epsilon) ? json("inf") : json(r.epsilon)},
             {"thresholdConvention", std::string(to_string(r.convention))},
             {"magnitudeAtOne", r.magnitude_at_one},
             {"keptIndices", indices_json(r.kept)},
             {"removedIndices", indices_json(r.removed)},
             {"thresholdCurve", curve},
             {"approxVolume", approx.hull.volume},
             {"fullVolume", full.volume},
             {"approxVertexIndices", indices_json(approx.hull.vertex_indices)},
             {"fullVertexIndices", indices_json(full.vertex_indices)}};
      emit(ha_out, j.dump(2) + "\n", out);
      if (!ha_out.empty() && ha_out != "-") {
        out << "kept " << r.kept.size() << " removed " << r.removed.size() << "\n";
        out << "volume " << format_12(approx.hull.volume) << " full " << format_12(full.volume) << "\n";
      }
      return 0;
    }

    if (*mf) {
      const PointCloud cloud = read_points(mf_in);
      std::vector<double> ts = mf_ts;
      if (mf_steps > 0) {
        if (!(mf_min > 0.0 && mf_max >= mf_min)) throw Usage("log grid needs 0 < --t-min <= --t-max");
        for (std::size_t k = 0; k < mf_steps; ++k) {
          const double f = mf_steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(mf_steps - 1);
          ts.push_back(mf_min * std::pow(mf_max / mf_min, f));
        }
      }
      if (ts.empty()) throw Usage("magfn needs --t or a --t-min/--t-max/--steps grid");
      for (double t : ts)
        if (!(t > 0.0)) throw Usage("scales must be positive");
      const auto samples = magnitude_function(cloud, ts, {threads, nullptr});
      std::string text = "t,magnitude\n";
      for (const auto& s : samples) text += format_double(s.scale) + "," + format_double(s.magnitude) + "\n";
      emit(mf_out, text, out);
      return 0;
    }

    if (*ex) {
      ExperimentConfig config;
      bool config_has_seeds = false;
      if (!ex_config.empty()) {
        json j;
        try {
          j = json::parse(read_file(ex_config));
        } catch (const json::parse_error& e) {
          fail(ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
        }
        config_has_seeds = j.is_object() && j.contains("seeds");
        config = config_from_json(j);
      }
      if (ex_seed)
        config.seeds = {*ex_seed};
      else if (!config_has_seeds)
        throw Usage("experiments requires --seed or a seeds list in the config");
      config.validate();
      const ExperimentResult result = ex_which == "table1" ? run_table1(config, ex_out, threads)
                                                           : run_prefix_curves(config, ex_out, threads);
      for (const std::string& w : result.warnings) err << "warning: " << w << "\n";
      if (ex_which == "table1") out << format_summary_csv(result.summary);
      return 0;
    }
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  }
  return 2;
}

}  // namespace maghull::cli
