#pragma once

// Good-Bad-Grid clustering: pairwise classification by common-neighbour
// counts, the A-Good consistency test per cell, and label propagation
// through connected A-Good regions.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "geocd/geom.hpp"
#include "geocd/model.hpp"

namespace geocd {

/// Number of k adjacent to both i and j with dist(k,i) < R and dist(k,j) < R.
/// Throws InputError for i == j or unknown ids.
std::size_t count_common_neighbors(const SpatialGraph& g, std::size_t i, std::size_t j, double R);

/// (λ/4)(M_in + M_out) as a function of distance. Exact for d <= 3; above
/// that the lens integrals are tabulated once and interpolated linearly.
class PairwiseThreshold {
 public:
  PairwiseThreshold(const ModelParams& params, double R);
  double operator()(double dist) const;
  double R() const noexcept { return R_; }

 private:
  ModelParams params_;
  double R_;
  std::vector<double> table_;
};

/// +1 iff the common-neighbour count strictly exceeds the threshold.
int pairwise_classify(const SpatialGraph& g, std::size_t i, std::size_t j, const PairwiseThreshold& threshold);
int pairwise_classify(const SpatialGraph& g, std::size_t i, std::size_t j, const ModelParams& params, double R);

/// Signs for all pairs i < j whose cells lie within sup-norm distance 2.
class PairSignTable {
 public:
  struct Entry {
    std::uint32_t j;
    std::int8_t sign;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit PairSignTable(std::size_t n = 0) : rows_(n) {}

  /// Sign of the unordered pair; 0 when the pair is not tabulated.
  int sign(std::size_t i, std::size_t j) const noexcept;
  std::vector<Entry>& row(std::size_t i) { return rows_[i]; }
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }
  std::size_t node_count() const noexcept { return rows_.size(); }
  std::size_t pair_count() const noexcept;

  friend bool operator==(const PairSignTable&, const PairSignTable&) = default;

 private:
  std::vector<std::vector<Entry>> rows_;
};

/// Occupied cells and their node lists (ids ascending).
struct CellMap {
  GridSpec grid;
  std::vector<CellIndex> node_cell;  ///< cell of each node
  std::unordered_map<CellIndex, std::vector<std::uint32_t>, CellIndexHash> nodes;
  std::vector<CellIndex> occupied;  ///< sorted

  const std::vector<std::uint32_t>& nodes_in(const CellIndex& z) const;
  /// Nodes in the k-thickening of z, ascending.
  std::vector<std::uint32_t> thickening_nodes(const CellIndex& z, int k) const;
};

CellMap bin_nodes(const SpatialGraph& g, const GridSpec& grid);

/// Grid for the graph: periodic on a torus, plain otherwise.
GridSpec grid_for(const SpatialGraph& g, double R);

/// OpenMP kernel: nodes are processed in parallel, candidates come from the
/// 2-thickening of each node's cell.
PairSignTable build_pair_signs(const SpatialGraph& g, const CellMap& cells, const PairwiseThreshold& threshold);

/// Serial reference: every pair i < j is tested against the cell-distance
/// rule directly.
PairSignTable build_pair_signs_reference(const SpatialGraph& g, const CellMap& cells,
                                         const PairwiseThreshold& threshold);

struct GbgConfig {
  double R = 0.0;  ///< tessellation and lens scale; 0 means support(f_in)
  double epsilon = 0.1;
  std::optional<std::uint64_t> traversal_seed;  ///< shuffles start cells, neighbour order and anchors
  bool analysis = false;                        ///< also evaluate T-Good against the graph's labels
  bool parallel = true;
};

/// Everything the per-cell tests need, built once per graph.
class GbgContext {
 public:
  GbgContext(const SpatialGraph& g, const ModelParams& params, const GbgConfig& config = {});

  const SpatialGraph& graph() const noexcept { return *graph_; }
  const CellMap& cells() const noexcept { return cells_; }
  const PairSignTable& signs() const noexcept { return signs_; }
  const PairwiseThreshold& threshold() const noexcept { return threshold_; }
  /// max(λ · cell_volume · (1 - ε), 1).
  double min_count() const noexcept { return min_count_; }

 private:
  const SpatialGraph* graph_;
  PairwiseThreshold threshold_;
  CellMap cells_;
  PairSignTable signs_;
  double min_count_;
};

bool is_a_good(const GbgContext& ctx, const CellIndex& z);
bool is_t_good(const GbgContext& ctx, const CellIndex& z);

struct CellVerdict {
  CellIndex cell;
  bool a_good = false;
  std::optional<bool> t_good;
  std::vector<std::uint32_t> local_nodes;
};

struct GbgStats {
  std::size_t occupied_cells = 0;
  std::size_t a_good_cells = 0;
  std::size_t t_good_cells = 0;
  std::size_t components = 0;
  std::size_t largest_component_nodes = 0;
};

struct GbgResult {
  std::vector<std::int8_t> estimates;
  std::vector<std::int32_t> component_of;  ///< -1 outside every A-Good component
  std::vector<CellVerdict> cell_verdicts;  ///< occupied cells, sorted
  GbgStats stats;
};

GbgResult run_gbg(const GbgContext& ctx, const GbgConfig& config = {});
GbgResult run_gbg(const SpatialGraph& g, const ModelParams& params, const GbgConfig& config = {});

}  // namespace geocd
