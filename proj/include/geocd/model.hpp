#pragma once

// Marked Poisson point process on the window B_n = [-s/2, s/2]^d (s^d = n),
// the planted graph G, the null random connection model H, and the
// information graph I coupled to G through shared edge marks.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geocd/connection.hpp"
#include "geocd/geom.hpp"

namespace geocd {

enum class Regime { sparse_euclidean, log_torus };

struct ModelParams {
  double lambda = 1.0;
  int d = 2;
  double n = 1.0;  ///< window volume
  ConnectionFunction f_in = ConnectionFunction::zero();
  ConnectionFunction f_out = ConnectionFunction::zero();
  Regime regime = Regime::sparse_euclidean;

  /// Scaled indicators a·1{r <= log(n)^{1/d}} and b·1{r <= log(n)^{1/d}} on
  /// the torus of volume n.
  static ModelParams log_regime(double lambda, double a, double b, int d, double n);

  /// Throws ValidationError naming the offending field.
  void validate() const;

  double window_side() const;
  Metric metric() const;
};

/// Flat storage: coordinates of node i are coords[i*d .. i*d+d).
struct MarkedPointSet {
  int d = 2;
  std::vector<double> coords;
  std::vector<std::int8_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  const double* data(std::size_t i) const noexcept { return coords.data() + i * static_cast<std::size_t>(d); }
  void push_back(std::span<const double> x, int label);
};

/// A node forced into the sample (Palm convention). Planted nodes get the
/// smallest ids, in the order given.
struct PlantedNode {
  std::vector<double> x;
  int label = 1;
};

/// Compressed symmetric adjacency with sorted neighbour lists.
class Adjacency {
 public:
  Adjacency() = default;
  /// Sorts each list; the caller guarantees symmetry and no self-loops.
  static Adjacency from_lists(std::vector<std::vector<std::uint32_t>> lists);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  bool contains(std::size_t i, std::size_t j) const noexcept;

  friend bool operator==(const Adjacency&, const Adjacency&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

struct SpatialGraph {
  MarkedPointSet points;
  Metric metric;
  double window_side = 1.0;
  Adjacency adjacency;
  std::optional<Adjacency> info;

  std::size_t size() const noexcept { return points.size(); }
  int dim() const noexcept { return points.d; }
  double window_volume() const;
  bool has_edge(std::size_t i, std::size_t j) const noexcept { return adjacency.contains(i, j); }
  double dist(std::size_t i, std::size_t j) const noexcept;
  /// Throws InputError when i is out of range.
  void check_node(std::size_t i) const;
};

/// Poisson(λn) points, uniform locations, uniform ±1 labels. Ids increase
/// with sup-norm distance from the window centre (after any planted nodes).
MarkedPointSet sample_points(const ModelParams& params, std::uint64_t seed,
                             std::span<const PlantedNode> planted = {});

/// G and, when `with_info`, I, from one set of edge marks U_ij:
/// G-edge iff U < f_in (same labels) or U < f_out (opposite labels);
/// I-edge iff f_out <= U < f_in.
SpatialGraph sample_coupled(const ModelParams& params, std::uint64_t seed,
                            std::span<const PlantedNode> planted = {}, bool with_info = true);

/// Builds G (and I) on a fixed point set.
SpatialGraph connect_coupled(MarkedPointSet points, const ModelParams& params, std::uint64_t seed,
                             bool with_info = true);

/// Random connection model with connection function g; labels are carried
/// along but ignored.
SpatialGraph sample_null(MarkedPointSet points, const ConnectionFunction& g, const Metric& metric,
                         double window_side, std::uint64_t seed);

/// Keeps node i iff i < protect or node_uniform(seed, i) < p, returning the
/// induced subgraph. Original ids of kept nodes go to `kept` when given.
SpatialGraph thin(const SpatialGraph& graph, double p, std::uint64_t seed, std::size_t protect = 0,
                  std::vector<std::uint32_t>* kept = nullptr);

}  // namespace geocd
