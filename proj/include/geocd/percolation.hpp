#pragma once

// Cluster structure of random connection models and a finite-window proxy
// for the percolation probability of a planted origin.

#include <cstdint>
#include <span>
#include <vector>

#include "geocd/connection.hpp"
#include "geocd/model.hpp"

namespace geocd {

struct ClusterStats {
  std::vector<std::size_t> cluster_sizes;  ///< descending
  double largest_fraction = 0.0;
  std::size_t origin_cluster_size = 0;
  bool origin_spans = false;
};

/// Connected components of G (or of I when `use_info`). The origin is node
/// `origin`; it spans when its cluster has a node within `boundary_shell` of
/// the window boundary in sup-norm.
ClusterStats cluster_analysis(const SpatialGraph& g, double boundary_shell, bool use_info = false,
                              std::size_t origin = 0);

/// Component id per node (ids in order of smallest member).
std::vector<std::uint32_t> component_labels(const Adjacency& adj);

struct ThetaEstimate {
  double lambda = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double window = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Fraction of trials in which a node planted at the centre of
/// [-w/2, w/2]^d spans, for the random connection model with intensity λ
/// and connection function g. boundary_shell = 0 means support(g).
ThetaEstimate theta_estimate(double lambda, const ConnectionFunction& g, int d, double window_side,
                             std::size_t trials, std::uint64_t seed, double boundary_shell = 0.0);

/// theta_estimate at every λ in `lambdas`, coupled: each trial is sampled at
/// the largest λ and thinned with retention λ/λ_max, so estimates are
/// nondecreasing in λ on every sample path.
std::vector<ThetaEstimate> theta_sweep(std::span<const double> lambdas, const ConnectionFunction& g, int d,
                                       double window_side, std::size_t trials, std::uint64_t seed,
                                       double boundary_shell = 0.0);

}  // namespace geocd
