#include "geocd/spatial_hash.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geocd/error.hpp"

namespace geocd {

SpatialHash::SpatialHash(std::span<const double> coords, int d, const Metric& metric, double radius)
    : coords_(coords), d_(d), metric_(metric), radius_(radius) {
  if (d < 1 || d > kMaxDim) throw InputError("SpatialHash: unsupported dimension");
  if (coords.size() % static_cast<std::size_t>(d) != 0) throw InputError("SpatialHash: ragged coordinates");
  if (!(radius >= 0.0)) throw InputError("SpatialHash: negative radius");
  bucket_side_ = radius > 0.0 ? radius : 1.0;
  if (metric.is_toroidal()) {
    // At least three buckets per axis keep the 3^d neighbourhood free of
    // duplicates; otherwise the axis collapses to a single bucket.
    auto P = static_cast<std::int64_t>(std::floor(metric.side / bucket_side_));
    if (P < 3) P = 1;
    for (int k = 0; k < d; ++k) per_axis_[static_cast<std::size_t>(k)] = P;
    bucket_side_ = metric.side / static_cast<double>(P);
  }

  const std::size_t n = coords.size() / static_cast<std::size_t>(d);
  std::vector<CellIndex> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = bucket_of(coords.data() + i * static_cast<std::size_t>(d));
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
  buckets_.reserve(n);
  std::uint32_t start = 0;
  for (std::uint32_t p = 1; p <= n; ++p) {
    if (p == n || keys[order_[p]] != keys[order_[start]]) {
      buckets_.emplace(keys[order_[start]], std::make_pair(start, p));
      start = p;
    }
  }
}

std::int64_t SpatialHash::wrap_axis(int k, std::int64_t v) const noexcept {
  const std::int64_t P = per_axis_[static_cast<std::size_t>(k)];
  if (P == 0) return v;
  return ((v % P) + P) % P;
}

CellIndex SpatialHash::bucket_of(const double* x) const noexcept {
  CellIndex z;
  z.dim = d_;
  for (int k = 0; k < d_; ++k) {
    if (per_axis_[static_cast<std::size_t>(k)] != 0) {
      const double shifted = x[k] + 0.5 * metric_.side;
      z[k] = wrap_axis(k, static_cast<std::int64_t>(std::floor(shifted / bucket_side_)));
    } else {
      z[k] = static_cast<std::int64_t>(std::floor(x[k] / bucket_side_));
    }
  }
  return z;
}

}  // namespace geocd
