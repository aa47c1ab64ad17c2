#pragma once

// Fixed-radius neighbour search: points are bucketed into cubes of side at
// least `radius`, so every point within `radius` of a query lies in one of
// the 3^d surrounding buckets.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geocd/geom.hpp"

namespace geocd {

class SpatialHash {
 public:
  /// `coords` is row-major, d values per point.
  SpatialHash(std::span<const double> coords, int d, const Metric& metric, double radius);

  int dim() const noexcept { return d_; }
  double radius() const noexcept { return radius_; }
  const Metric& metric() const noexcept { return metric_; }
  std::size_t size() const noexcept { return order_.size(); }

  /// Calls fn(j) for every indexed point in the buckets around x, each once.
  template <typename Fn>
  void for_each_candidate(const double* x, Fn&& fn) const {
    const CellIndex home = bucket_of(x);
    std::array<int, kMaxDim> off{};
    std::array<int, kMaxDim> span_len{};
    std::int64_t combos = 1;
    for (int k = 0; k < d_; ++k) {
      span_len[static_cast<std::size_t>(k)] = per_axis_[static_cast<std::size_t>(k)] == 1 ? 1 : 3;
      combos *= span_len[static_cast<std::size_t>(k)];
    }
    for (std::int64_t c = 0; c < combos; ++c) {
      std::int64_t rest = c;
      CellIndex key = home;
      for (int k = 0; k < d_; ++k) {
        const auto len = span_len[static_cast<std::size_t>(k)];
        off[static_cast<std::size_t>(k)] = len == 1 ? 0 : static_cast<int>(rest % 3) - 1;
        rest /= len;
        key[k] = wrap_axis(k, home[k] + off[static_cast<std::size_t>(k)]);
      }
      const auto it = buckets_.find(key);
      if (it == buckets_.end()) continue;
      for (std::uint32_t p = it->second.first; p < it->second.second; ++p) fn(order_[p]);
    }
  }

  /// Calls fn(j, dist) for every indexed point with distance <= r (r must not
  /// exceed radius()). Includes the query point itself when it is indexed.
  template <typename Fn>
  void for_each_within(const double* x, double r, Fn&& fn) const {
    const double rsq = r * r;
    for_each_candidate(x, [&](std::uint32_t j) {
      const double dsq = metric_.distance_sq(x, coords_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(d_), d_);
      if (dsq <= rsq) fn(j, std::sqrt(dsq));
    });
  }

 private:
  CellIndex bucket_of(const double* x) const noexcept;
  std::int64_t wrap_axis(int k, std::int64_t v) const noexcept;

  std::span<const double> coords_;
  int d_;
  Metric metric_;
  double radius_;
  double bucket_side_;
  std::array<std::int64_t, kMaxDim> per_axis_{};  // bucket count per axis on a torus, 0 = unbounded
  std::vector<std::uint32_t> order_;
  std::unordered_map<CellIndex, std::pair<std::uint32_t, std::uint32_t>, CellIndexHash> buckets_;
};

}  // namespace geocd
