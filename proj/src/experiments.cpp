#include "maghull/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "maghull/error.hpp"
#include "maghull/parallel.hpp"
#include "maghull/textio.hpp"

namespace maghull {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorCode::InvalidSpec, "experiment config: " + msg); }

template <typename T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(std::string("field '") + key + "' has the wrong type");
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) invalid(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) invalid(std::string("unknown field '") + key + "' in " + where);
}

DatasetSpec dataset_from_json(const json& j) {
  check_keys(j, {"kind", "innerRadius", "outerRadius", "side", "noise", "blobCount", "centerBox", "blobSigma", "centers"},
             "datasetSpec");
  DatasetSpec s;
  if (j.contains("kind")) s.kind = parse_dataset_kind(get_field<std::string>(j, "kind"));
  if (j.contains("innerRadius")) s.inner_radius = get_field<double>(j, "innerRadius");
  if (j.contains("outerRadius")) s.outer_radius = get_field<double>(j, "outerRadius");
  if (j.contains("side")) s.side = get_field<double>(j, "side");
  if (j.contains("noise")) s.noise = get_field<double>(j, "noise");
  if (j.contains("blobCount")) s.blob_count = get_field<std::size_t>(j, "blobCount");
  if (j.contains("centerBox")) s.center_box = get_field<double>(j, "centerBox");
  if (j.contains("blobSigma")) s.blob_sigma = get_field<double>(j, "blobSigma");
  if (j.contains("centers")) s.centers = get_field<std::vector<std::vector<double>>>(j, "centers");
  return s;
}

json dataset_to_json(const DatasetSpec& s) {
  json j{{"kind", std::string(to_string(s.kind))}};
  switch (s.kind) {
    case DatasetKind::Annulus:
      j["innerRadius"] = s.inner_radius;
      j["outerRadius"] = s.outer_radius;
      break;
    case DatasetKind::Square: j["side"] = s.side; break;
    case DatasetKind::NoisyMoons: j["noise"] = s.noise; break;
    case DatasetKind::GaussianBlobs:
      j["blobSigma"] = s.blob_sigma;
      if (s.centers.empty()) {
        j["blobCount"] = s.blob_count;
        j["centerBox"] = s.center_box;
      } else {
        j["centers"] = s.centers;
      }
      break;
  }
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void mean_stddev(const std::vector<double>& v, double& mean, double& sd) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (v.empty()) {
    mean = sd = nan;
    return;
  }
  mean = compensated_sum(v) / static_cast<double>(v.size());
  if (v.size() < 2) {
    sd = nan;
    return;
  }
  std::vector<double> sq;
  for (double x : v) sq.push_back((x - mean) * (x - mean));
  sd = std::sqrt(compensated_sum(sq) / static_cast<double>(v.size() - 1));
}

std::string curve_stem(const TrialRecord& r) {
  std::string t = std::to_string(r.trial);
  if (t.size() < 3) t.insert(0, 3 - t.size(), '0');
  return "d" + std::to_string(r.dim) + "_trial" + t;
}

void write_curves(const ExperimentConfig& config, const ExperimentResult& result, const std::filesystem::path& dir) {
  for (const TrialRecord& r : result.trials) {
    if (!r.ok) continue;
    const std::string stem = curve_stem(r);
    write_file_atomic(dir / (stem + ".csv"), format_curve_csv(r.prefix_curve));
    const std::string title = "dim " + std::to_string(r.dim) + ", trial " + std::to_string(r.trial) +
                              ", I90 = " + std::to_string(r.i90);
    write_file_atomic(dir / (stem + ".svg"), format_curve_svg(r.prefix_curve, config.volume_fraction, title));
  }
}

std::string format_trials_jsonl(const std::vector<TrialRecord>& trials) {
  std::string out;
  for (const TrialRecord& r : trials) out += trial_to_json(r).dump() + "\n";
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dims.empty()) invalid("dims is empty");
  for (std::size_t d : dims)
    if (d < 1 || d > kMaxHullDim) invalid("dims must lie in 1..8");
  if (trials_per_dim < 1) invalid("trialsPerDim must be at least 1");
  if (points_per_trial < 1) invalid("pointsPerTrial must be at least 1");
  if (quadrature_order < 1 || quadrature_order > 512) invalid("quadratureOrder must lie in 1..512");
  if (!(volume_fraction > 0.0 && volume_fraction < 1.0)) invalid("volumeFraction must lie in (0, 1)");
  if (seeds.size() != 1 && seeds.size() != trials_per_dim)
    invalid("seeds must hold one base seed or one seed per trial");
  if (!(trial_time_limit > 0.0)) invalid("trialTimeLimit must be positive");
  for (std::size_t d : dims) {
    DatasetSpec s = dataset;
    s.dim = d;
    s.count = points_per_trial;
    s.validate();
  }
}

std::uint64_t ExperimentConfig::trial_seed(std::size_t dim, std::size_t trial) const {
  const std::uint64_t base = seeds.size() == 1 ? derive_seed(seeds[0], trial) : seeds[trial];
  return derive_seed(base, 1000 + dim);
}

ExperimentConfig config_from_json(const json& j) {
  check_keys(j,
             {"dims", "trialsPerDim", "pointsPerTrial", "datasetSpec", "quadratureOrder", "volumeFraction", "seeds",
              "estimateError", "trialTimeLimit", "writeCurves"},
             "config");
  ExperimentConfig c;
  if (j.contains("dims")) c.dims = get_field<std::vector<std::size_t>>(j, "dims");
  if (j.contains("trialsPerDim")) c.trials_per_dim = get_field<std::size_t>(j, "trialsPerDim");
  if (j.contains("pointsPerTrial")) c.points_per_trial = get_field<std::size_t>(j, "pointsPerTrial");
  if (j.contains("datasetSpec")) c.dataset = dataset_from_json(j.at("datasetSpec"));
  if (j.contains("quadratureOrder")) c.quadrature_order = get_field<std::size_t>(j, "quadratureOrder");
  if (j.contains("volumeFraction")) c.volume_fraction = get_field<double>(j, "volumeFraction");
  if (j.contains("seeds")) c.seeds = get_field<std::vector<std::uint64_t>>(j, "seeds");
  if (j.contains("estimateError")) c.estimate_error = get_field<bool>(j, "estimateError");
  if (j.contains("trialTimeLimit")) c.trial_time_limit = get_field<double>(j, "trialTimeLimit");
  if (j.contains("writeCurves")) c.write_curves = get_field<bool>(j, "writeCurves");
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"dims", c.dims},
              {"trialsPerDim", c.trials_per_dim},
              {"pointsPerTrial", c.points_per_trial},
              {"datasetSpec", dataset_to_json(c.dataset)},
              {"quadratureOrder", c.quadrature_order},
              {"volumeFraction", c.volume_fraction},
              {"seeds", c.seeds},
              {"estimateError", c.estimate_error},
              {"trialTimeLimit", c.trial_time_limit},
              {"writeCurves", c.write_curves}};
}

json trial_to_json(const TrialRecord& r) {
  json j{{"dim", r.dim}, {"trial", r.trial}, {"seed", r.seed}, {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
  } else {
    j["I90"] = r.i90;
    j["hullVertexCount"] = r.hull_vertex_count;
    j["fullVolume"] = r.full_volume;
    j["fullMagnitude"] = r.full_magnitude;
    j["quadratureError"] = std::isnan(r.quadrature_error) ? json(nullptr) : json(r.quadrature_error);
    j["epsilonAtI90"] = r.epsilon_at_i90;
    j["volumeLossAtI90"] = r.volume_loss_at_i90;
    j["magnitudeLossAtI90"] = r.magnitude_loss_at_i90;
  }
  j["wallTime"] = r.wall_time;
  return j;
}

TrialRecord analyze_cloud(const PointCloud& cloud, const ExperimentConfig& config, const Deadline& deadline) {
  TrialRecord r;
  r.dim = cloud.dim();
  MomentOptions mopts;
  mopts.estimate_error = config.estimate_error;
  mopts.deadline = deadline;
  const MomentVector moments = zeroth_moments(cloud, QuadratureRule::gauss_laguerre(config.quadrature_order), mopts);
  r.quadrature_error = moments.estimated_error;

  const HullResult hull = convex_hull(cloud);
  r.hull_vertex_count = hull.vertex_indices.size();
  r.prefix_curve = moment_prefix_curve(cloud, moments, deadline);
  r.full_volume = r.prefix_curve.back().volume;
  r.full_magnitude = r.prefix_curve.back().magnitude;
  r.i90 = first_index_reaching(r.prefix_curve, config.volume_fraction);
  if (hull.degenerate || r.i90 == 0) fail(ErrorCode::InvalidArgument, "trial cloud is affinely degenerate");

  const std::size_t removed = cloud.size() - r.i90;
  if (removed > 0) {
    const auto order = ascending_moment_order(moments.mu0);
    r.epsilon_at_i90 = static_cast<double>(r.dim) * static_cast<double>(removed) * r.full_magnitude *
                       moments.mu0[order[removed - 1]];
  }
  r.volume_loss_at_i90 = r.full_volume - r.prefix_curve[r.i90 - 1].volume;
  r.magnitude_loss_at_i90 = r.full_magnitude - r.prefix_curve[r.i90 - 1].magnitude;
  r.ok = true;
  return r;
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t dim, std::size_t trial) {
  TrialRecord r;
  const std::uint64_t seed = config.trial_seed(dim, trial);
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(config.trial_time_limit));
  try {
    DatasetSpec spec = config.dataset;
    spec.dim = dim;
    spec.count = config.points_per_trial;
    spec.seed = seed;
    r = analyze_cloud(generate(spec), config, deadline);
  } catch (const Error& e) {
    r = TrialRecord{};
    r.ok = false;
    r.error = e.what();
  }
  r.dim = dim;
  r.trial = trial;
  r.seed = seed;
  r.wall_time = seconds_since(start);
  return r;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<TrialRecord>& trials) {
  std::vector<SummaryRow> rows;
  for (std::size_t dim : config.dims) {
    std::vector<double> i90, verts;
    std::size_t failed = 0;
    for (const TrialRecord& r : trials) {
      if (r.dim != dim) continue;
      if (!r.ok) {
        ++failed;
        continue;
      }
      i90.push_back(static_cast<double>(r.i90));
      verts.push_back(static_cast<double>(r.hull_vertex_count));
    }
    SummaryRow row{dim, i90.size(), failed, 0, 0, 0, 0};
    mean_stddev(i90, row.mean_i90, row.stddev_i90);
    mean_stddev(verts, row.mean_vertices, row.stddev_vertices);
    rows.push_back(row);
  }
  return rows;
}

ExperimentResult run_experiments(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  struct Job {
    std::size_t dim, trial;
  };
  std::vector<Job> jobs;
  for (std::size_t dim : config.dims)
    for (std::size_t t = 0; t < config.trials_per_dim; ++t) jobs.push_back({dim, t});

  ExperimentResult result;
  result.trials.resize(jobs.size());
  parallel_for(jobs.size(), threads,
               [&](std::size_t k) { result.trials[k] = run_trial(config, jobs[k].dim, jobs[k].trial); });
  for (const TrialRecord& r : result.trials)
    if (!r.ok)
      result.warnings.push_back("trial dim=" + std::to_string(r.dim) + " #" + std::to_string(r.trial) +
                                " excluded: " + r.error);
  result.summary = summarize(config, result.trials);
  return result;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "dim,trials,failed,mean_i90,stddev_i90,mean_vertices,stddev_vertices\n";
  for (const SummaryRow& r : rows) {
    out += std::to_string(r.dim) + "," + std::to_string(r.trials) + "," + std::to_string(r.failed) + "," +
           format_double(r.mean_i90) + "," + format_double(r.stddev_i90) + "," + format_double(r.mean_vertices) +
           "," + format_double(r.stddev_vertices) + "\n";
  }
  return out;
}

std::string format_curve_csv(const std::vector<PrefixPoint>& curve) {
  std::string out = "i,vol,mag\n";
  for (const PrefixPoint& p : curve)
    out += std::to_string(p.i) + "," + format_double(p.volume) + "," + format_double(p.magnitude) + "\n";
  return out;
}

std::string format_curve_svg(const std::vector<PrefixPoint>& curve, double fraction, const std::string& title) {
  constexpr double W = 640, H = 400, left = 60, right = 20, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  const std::size_t n = curve.empty() ? 1 : curve.back().i;
  const double vmax = curve.empty() || curve.back().volume <= 0.0 ? 1.0 : curve.back().volume;
  const double mmax = curve.empty() || curve.back().magnitude <= 0.0 ? 1.0 : curve.back().magnitude;
  auto x = [&](double i) { return left + (n > 1 ? (i - 1.0) / static_cast<double>(n - 1) : 0.0) * pw; };
  auto y = [&](double v) { return top + (1.0 - v) * ph; };
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         title + "</text>\n";
  out += "<g stroke=\"black\" fill=\"none\">\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
         num(top + ph) + "\"/>\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) +
         "\"/>\n";
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = k / 4.0;
    const double i = 1.0 + v * static_cast<double>(n - 1);
    const double ri = std::round(i);
    out += "<line x1=\"" + num(x(ri)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(x(ri)) + "\" y2=\"" +
           num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(x(ri)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" + num(ri) +
           "</text>\n";
    out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(y(v)) + "\" x2=\"" + num(left) + "\" y2=\"" + num(y(v)) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y(v) + 4) + "\" text-anchor=\"end\">" + num(v) +
           "</text>\n";
  }
  out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 8) + "\" text-anchor=\"middle\">i</text>\n";
  out += "</g>\n";

  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(y(fraction)) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
         num(y(fraction)) + "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  std::string vol, mag;
  for (const PrefixPoint& p : curve) {
    vol += num(x(static_cast<double>(p.i))) + "," + num(y(p.volume / vmax)) + " ";
    mag += num(x(static_cast<double>(p.i))) + "," + num(y(p.magnitude / mmax)) + " ";
  }
  out += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"" + vol + "\"/>\n";
  out += "<polyline fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1.5\" points=\"" + mag + "\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<text x=\"" + num(left + pw - 4) + "\" y=\"" + num(top + ph - 24) +
         "\" text-anchor=\"end\" fill=\"#1f77b4\">volume / final volume</text>\n";
  out += "<text x=\"" + num(left + pw - 4) + "\" y=\"" + num(top + ph - 10) +
         "\" text-anchor=\"end\" fill=\"#ff7f0e\">magnitude / final magnitude</text>\n";
  out += "</g>\n</svg>\n";
  return out;
}

ExperimentResult run_table1(const ExperimentConfig& config, const std::filesystem::path& out_dir, unsigned threads) {
  ExperimentResult result = run_experiments(config, threads);
  write_file_atomic(out_dir / "summary.csv", format_summary_csv(result.summary));
  write_file_atomic(out_dir / "trials.jsonl", format_trials_jsonl(result.trials));
  if (config.write_curves) write_curves(config, result, out_dir / "curves");
  return result;
}

ExperimentResult run_prefix_curves(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                   unsigned threads) {
  ExperimentResult result = run_experiments(config, threads);
  write_file_atomic(out_dir / "trials.jsonl", format_trials_jsonl(result.trials));
  write_curves(config, result, out_dir / "curves");
  return result;
}

}  // namespace maghull
