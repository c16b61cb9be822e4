#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "maghull/geometry.hpp"
#include "maghull/linalg.hpp"

namespace maghull {

/// Weights w = zeta^{-1} 1 of the scaled space tX and their sum |tX|.
/// A scale of +inf stands for the limit t -> inf where every weight is 1.
struct WeightVector {
  std::vector<double> weights;
  double scale = 1.0;
  double magnitude = 0.0;
};

/// Residual budget for a weight solve of N points: 1e-9 * N in the max norm.
double solve_tolerance(std::size_t n);

/// max_i |(zeta w)_i - 1|
double residual_inf_norm(const SimilarityMatrix& sim, std::span<const double> weights);

struct WeightSolve {
  WeightVector weights;
  CholeskyFactor factor;
};

/// Cholesky solve of zeta w = 1. One step of iterative refinement is applied
/// when the residual exceeds solve_tolerance; if it still does, the solve
/// fails with FactorizationFailure.
WeightSolve solve_weights_with_factor(const SimilarityMatrix& sim);
WeightVector solve_weights(const SimilarityMatrix& sim);

/// Weights for the t -> inf limit: all ones, magnitude N.
WeightVector limit_weights(std::size_t n);

/// Bounded LRU cache of weight solves keyed by (cloud contents, t). Safe to
/// share between threads.
class SolveCache {
 public:
  explicit SolveCache(std::size_t capacity = 8) : capacity_(capacity) {}

  std::shared_ptr<const WeightSolve> find(std::uint64_t cloud_key, double t);
  void insert(std::uint64_t cloud_key, double t, std::shared_ptr<const WeightSolve> solve);

  std::size_t size() const;
  std::size_t hits() const;

  static std::uint64_t fingerprint(const PointCloud& cloud);

 private:
  struct Entry {
    std::uint64_t key;
    double t;
    std::shared_ptr<const WeightSolve> solve;
  };
  mutable std::mutex mutex_;
  std::size_t capacity_;
  std::size_t hits_ = 0;
  std::list<Entry> entries_;
};

struct MagnitudeSample {
  double scale;
  double magnitude;
};

struct MagnitudeOptions {
  unsigned threads = 1;
  SolveCache* cache = nullptr;
};

/// (t, |tX|) for each requested scale, in input order. t = +inf reports N.
std::vector<MagnitudeSample> magnitude_function(const PointCloud& cloud, std::span<const double> scales,
                                                const MagnitudeOptions& options = {});

/// log(1 + w_i); NonRepresentable when some w_i <= -1.
std::vector<double> log_weight_coloring(const WeightVector& weights);

}  // namespace maghull
