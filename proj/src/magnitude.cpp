#include "maghull/magnitude.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "maghull/error.hpp"
#include "maghull/parallel.hpp"
#include "maghull/textio.hpp"

namespace maghull {

double solve_tolerance(std::size_t n) { return 1e-9 * static_cast<double>(std::max<std::size_t>(n, 1)); }

double residual_inf_norm(const SimilarityMatrix& sim, std::span<const double> weights) {
  const auto zw = multiply(sim.entries(), weights);
  double r = 0.0;
  for (double v : zw) r = std::max(r, std::abs(v - 1.0));
  return r;
}

WeightSolve solve_weights_with_factor(const SimilarityMatrix& sim) {
  require(sim.size() > 0, "solve_weights: empty similarity matrix");
  const std::size_t n = sim.size();
  CholeskyFactor factor = CholeskyFactor::factor(sim.entries());
  std::vector<double> w(n, 1.0);
  factor.solve_in_place(w);

  const double budget = solve_tolerance(n);
  double residual = residual_inf_norm(sim, w);
  if (!(residual <= budget)) {
    auto zw = multiply(sim.entries(), w);
    for (std::size_t i = 0; i < n; ++i) zw[i] = 1.0 - zw[i];
    factor.solve_in_place(zw);
    for (std::size_t i = 0; i < n; ++i) w[i] += zw[i];
    residual = residual_inf_norm(sim, w);
    if (!(residual <= budget)) {
      std::ostringstream os;
      os.precision(17);
      os << "weight residual " << residual << " exceeds " << budget << " after refinement";
      fail(ErrorCode::FactorizationFailure, os.str());
    }
  }
  WeightVector out;
  out.magnitude = compensated_sum(w);
  out.weights = std::move(w);
  out.scale = sim.scale();
  return WeightSolve{std::move(out), std::move(factor)};
}

WeightVector solve_weights(const SimilarityMatrix& sim) { return solve_weights_with_factor(sim).weights; }

WeightVector limit_weights(std::size_t n) {
  return WeightVector{std::vector<double>(n, 1.0), std::numeric_limits<double>::infinity(),
                      static_cast<double>(n)};
}

std::shared_ptr<const WeightSolve> SolveCache::find(std::uint64_t cloud_key, double t) {
  std::lock_guard lock(mutex_);
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->key == cloud_key && it->t == t) {
      entries_.splice(entries_.begin(), entries_, it);
      ++hits_;
      return entries_.front().solve;
    }
  }
  return nullptr;
}

void SolveCache::insert(std::uint64_t cloud_key, double t, std::shared_ptr<const WeightSolve> solve) {
  if (capacity_ == 0) return;
  std::lock_guard lock(mutex_);
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->key == cloud_key && it->t == t) {
      entries_.erase(it);
      break;
    }
  }
  entries_.push_front(Entry{cloud_key, t, std::move(solve)});
  while (entries_.size() > capacity_) entries_.pop_back();
}

std::size_t SolveCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t SolveCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::uint64_t SolveCache::fingerprint(const PointCloud& cloud) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(cloud.dim());
  for (double c : cloud.coords()) mix(std::bit_cast<std::uint64_t>(c));
  return h;
}

std::vector<MagnitudeSample> magnitude_function(const PointCloud& cloud, std::span<const double> scales,
                                                const MagnitudeOptions& options) {
  require(!scales.empty(), "magnitude_function: no scales");
  for (double t : scales) require(t > 0.0 && !std::isnan(t), "magnitude_function: scales must be positive");
  const Matrix distances = pairwise_distances(cloud);
  const std::uint64_t key = options.cache ? SolveCache::fingerprint(cloud) : 0;

  std::vector<MagnitudeSample> out(scales.size());
  parallel_for(scales.size(), options.threads, [&](std::size_t k) {
    const double t = scales[k];
    if (std::isinf(t)) {
      out[k] = {t, static_cast<double>(cloud.size())};
      return;
    }
    try {
      std::shared_ptr<const WeightSolve> solve = options.cache ? options.cache->find(key, t) : nullptr;
      if (!solve) {
        solve = std::make_shared<const WeightSolve>(
            solve_weights_with_factor(SimilarityMatrix::from_distances(distances, t)));
        if (options.cache) options.cache->insert(key, t, solve);
      }
      out[k] = {t, solve->weights.magnitude};
    } catch (const Error& e) {
      throw Error(e.code(), e.message() + " (at t=" + format_double(t) + ")");
    }
  });
  return out;
}

std::vector<double> log_weight_coloring(const WeightVector& weights) {
  std::vector<double> out(weights.weights.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = weights.weights[i];
    if (!(w > -1.0)) {
      fail(ErrorCode::NonRepresentable,
           "weight " + format_double(w) + " of point " + std::to_string(i) + " has no log(1+w)");
    }
    out[i] = std::log1p(w);
  }
  return out;
}

}  // namespace maghull
