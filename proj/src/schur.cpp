#include "maghull/schur.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "maghull/error.hpp"
#include "maghull/parallel.hpp"

namespace maghull {

IndexSplit IndexSplit::from_removed(std::size_t parent_size, std::vector<std::size_t> removed) {
  std::sort(removed.begin(), removed.end());
  require(std::adjacent_find(removed.begin(), removed.end()) == removed.end(), "IndexSplit: repeated index");
  require(removed.empty() || removed.back() < parent_size, "IndexSplit: index out of range");
  IndexSplit split;
  split.parent_size = parent_size;
  split.kept.reserve(parent_size - removed.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < parent_size; ++i) {
    if (r < removed.size() && removed[r] == i)
      ++r;
    else
      split.kept.push_back(i);
  }
  split.removed = std::move(removed);
  return split;
}

double SchurComplement::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) t += matrix(i, i);
  return t;
}

namespace {

struct BlockSchur {
  CholeskyFactor kept_factor;
  Matrix schur;
};

// A/A_K indexed by `removed`, with the factor of A_K kept for further solves.
BlockSchur block_schur(const Matrix& a, std::span<const std::size_t> kept, std::span<const std::size_t> removed) {
  CholeskyFactor lk = CholeskyFactor::factor(a.select(kept, kept));
  const std::size_t np = removed.size();
  const std::size_t nk = kept.size();
  // Row p of `cross` is L_K^{-1} A_{K,p}.
  Matrix cross(np, nk);
  for (std::size_t p = 0; p < np; ++p) {
    auto row = cross.row(p);
    for (std::size_t k = 0; k < nk; ++k) row[k] = a(kept[k], removed[p]);
    lk.forward_in_place(row);
  }
  const auto& kt = simd::active();
  Matrix s(np, np);
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = a(removed[p], removed[q]) - kt.dot(cross.row(p).data(), cross.row(q).data(), nk);
      s(p, q) = v;
      s(q, p) = v;
    }
  }
  return BlockSchur{std::move(lk), std::move(s)};
}

void check_split(const SimilarityMatrix& sim, const IndexSplit& split) {
  require(split.parent_size == sim.size(), "split size does not match the similarity matrix");
  require(split.kept.size() + split.removed.size() == split.parent_size, "split is not a partition");
}

double quadratic_form(const Matrix& s, std::span<const double> v) {
  const auto sv = multiply(s, v);
  double q = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) q += v[i] * sv[i];
  return q;
}

std::vector<double> gather(std::span<const double> v, std::span<const std::size_t> idx) {
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
  return out;
}

}  // namespace

SchurComplement schur_complement(const SimilarityMatrix& sim, const IndexSplit& split) {
  check_split(sim, split);
  require(!split.removed.empty(), "schur_complement: removed set is empty");
  require(!split.kept.empty(), "schur_complement: kept set is empty");
  BlockSchur bs = block_schur(sim.entries(), split.kept, split.removed);
  // Positive definite in exact arithmetic; any positive pivot is accepted.
  const double det = CholeskyFactor::factor(bs.schur, std::numeric_limits<double>::min()).determinant();
  return SchurComplement{std::move(bs.schur), det};
}

double restricted_magnitude(const WeightVector& weights, const SimilarityMatrix& sim, const IndexSplit& split) {
  check_split(sim, split);
  require(weights.weights.size() == sim.size(), "weights do not match the similarity matrix");
  if (split.removed.empty()) return weights.magnitude;
  require(!split.kept.empty(), "restricted_magnitude: kept set is empty");
  const BlockSchur bs = block_schur(sim.entries(), split.kept, split.removed);
  return weights.magnitude - quadratic_form(bs.schur, gather(weights.weights, split.removed));
}

RestrictionBounds restriction_bounds(const WeightVector& weights, const SimilarityMatrix& sim,
                                     const IndexSplit& split) {
  require(weights.weights.size() == sim.size(), "weights do not match the similarity matrix");
  const double mag = weights.magnitude;
  if (split.removed.empty()) return {mag, mag, mag, mag};
  const SchurComplement s = schur_complement(sim, split);
  double wmin = std::numeric_limits<double>::infinity();
  double wmax = 0.0;
  double wsum = 0.0;
  for (std::size_t p : split.removed) {
    const double w2 = weights.weights[p] * weights.weights[p];
    wmin = std::min(wmin, w2);
    wmax = std::max(wmax, w2);
    wsum += w2;
  }
  const double np = static_cast<double>(split.removed.size());
  return {mag, mag - np * s.determinant * wmin, mag - np * wmax, mag - s.trace() * wsum};
}

CloudUnion unite(const PointCloud& x, const PointCloud& y) {
  require(x.dim() == y.dim(), "unite: dimension mismatch");
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  auto key = [](std::span<const double> p) {
    std::vector<std::uint64_t> k(p.size());
    // +0.0 and -0.0 compare equal as coordinates.
    for (std::size_t i = 0; i < p.size(); ++i) k[i] = std::bit_cast<std::uint64_t>(p[i] + 0.0);
    return k;
  };
  for (std::size_t i = 0; i < x.size(); ++i) index.emplace(key(x.point(i)), i);

  CloudUnion u;
  std::vector<double> coords = x.coords();
  u.x_in_z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u.x_in_z[i] = i;
  std::size_t next = x.size();
  for (std::size_t j = 0; j < y.size(); ++j) {
    auto it = index.find(key(y.point(j)));
    if (it != index.end()) {
      u.y_in_z.push_back(it->second);
      continue;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (distance(x.point(i), y.point(j)) < kDuplicateTolerance)
        fail(ErrorCode::OverlapAmbiguity, "point " + std::to_string(j) + " of Y nearly coincides with point " +
                                              std::to_string(i) + " of X");
    }
    auto p = y.point(j);
    coords.insert(coords.end(), p.begin(), p.end());
    u.y_in_z.push_back(next++);
  }
  u.cloud = PointCloud(x.dim(), std::move(coords));
  return u;
}

WeightVector union_weights(const PointCloud& x, const PointCloud& y, const WeightVector& wx,
                           const WeightVector& wy) {
  require(wx.weights.size() == x.size() && wy.weights.size() == y.size(), "union_weights: weight sizes");
  require(wx.scale == wy.scale, "union_weights: weights were solved at different scales");
  const CloudUnion u = unite(x, y);
  const std::size_t nz = u.cloud.size();
  if (nz == x.size()) return wx;

  std::vector<bool> in_y(nz, false);
  for (std::size_t z : u.y_in_z) in_y[z] = true;
  std::vector<std::size_t> w_idx;  // X \ Y, as positions in Z (equal to positions in X)
  std::vector<std::size_t> o_idx;  // X n Y
  for (std::size_t i = 0; i < x.size(); ++i) (in_y[i] ? o_idx : w_idx).push_back(i);

  WeightVector out;
  out.scale = wx.scale;
  out.weights.assign(nz, 0.0);
  if (w_idx.empty()) {
    for (std::size_t j = 0; j < y.size(); ++j) out.weights[u.y_in_z[j]] = wy.weights[j];
    out.magnitude = compensated_sum(out.weights);
    return out;
  }

  const SimilarityMatrix zeta = build_similarity(u.cloud, wx.scale);
  const Matrix& a = zeta.entries();
  const std::span<const std::size_t> yz = u.y_in_z;

  // w_Z[W] = (A / A_Y)^{-1} (1_W - A_{W,Y} w_Y)
  {
    BlockSchur sw = block_schur(a, yz, w_idx);
    std::vector<double> rhs(w_idx.size());
    for (std::size_t p = 0; p < w_idx.size(); ++p) {
      double s = 0.0;
      for (std::size_t j = 0; j < yz.size(); ++j) s += a(w_idx[p], yz[j]) * wy.weights[j];
      rhs[p] = 1.0 - s;
    }
    CholeskyFactor::factor(std::move(sw.schur)).solve_in_place(rhs);
    for (std::size_t p = 0; p < w_idx.size(); ++p) out.weights[w_idx[p]] = rhs[p];
  }

  // w_Z[Y] = (A / A_W)^{-1} (1_Y - A_{W,Y}^T w_W), where the weights of W alone
  // follow from those of X: w_W = w_X[W] + A_W^{-1} A_{W,O} w_X[O].
  {
    BlockSchur sy = block_schur(a, w_idx, yz);
    std::vector<double> ww(w_idx.size());
    for (std::size_t p = 0; p < w_idx.size(); ++p) {
      double s = 0.0;
      for (std::size_t o : o_idx) s += a(w_idx[p], o) * wx.weights[o];
      ww[p] = s;
    }
    if (!o_idx.empty()) sy.kept_factor.solve_in_place(ww);
    for (std::size_t p = 0; p < w_idx.size(); ++p) ww[p] += wx.weights[w_idx[p]];

    std::vector<double> rhs(yz.size());
    for (std::size_t j = 0; j < yz.size(); ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < w_idx.size(); ++p) s += a(w_idx[p], yz[j]) * ww[p];
      rhs[j] = 1.0 - s;
    }
    CholeskyFactor::factor(std::move(sy.schur)).solve_in_place(rhs);
    for (std::size_t j = 0; j < yz.size(); ++j) out.weights[yz[j]] = rhs[j];
  }
  out.magnitude = compensated_sum(out.weights);
  return out;
}

}  // namespace maghull
