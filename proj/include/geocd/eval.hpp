#pragma once

// Outcome metrics and statistical tests: overlap, the data likelihood and
// Flip-Bad certificates, the triangle distinguishability statistic, and the
// information-flow experiment.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geocd/model.hpp"
#include "geocd/moments.hpp"
#include "geocd/spatial_hash.hpp"

namespace geocd {

/// |Σ τ_i Z_i| / N, and 1 for empty input. Throws InputError on length
/// mismatch.
double overlap(std::span<const std::int8_t> estimates, std::span<const std::int8_t> truth);

/// Log-likelihood of (graph, labels) under the model, with per-node partial
/// sums over the pairs within support(f_in). Impossible configurations give
/// -inf. The graph must outlive the context.
class LikelihoodContext {
 public:
  /// Throws CorruptInputError when an edge is longer than the support, when
  /// an edge has f_in = f_out = 0, or a non-edge has f_in = f_out = 1.
  LikelihoodContext(const SpatialGraph& g, std::vector<std::int8_t> labels, const ModelParams& params);

  /// Poisson count and location factors; independent of the labels.
  double prefix() const noexcept { return prefix_; }
  /// Σ_j term(i, j) over pairs within the support.
  double partial(std::size_t i) const { return partial_[i]; }
  /// prefix + (1/2) Σ_i partial(i).
  double log_likelihood() const;
  /// Recomputes every pair term from scratch.
  double log_likelihood_full() const;

  /// partial(i) as it would be with Z_i negated.
  double flipped_partial(std::size_t i) const;
  /// Flipping Z_i does not decrease the likelihood (ties count).
  bool is_flip_bad(std::size_t i) const;
  std::size_t flip_bad_count() const;

  /// Negates Z_i and refreshes the partial sums it touches.
  void flip(std::size_t i);

  const std::vector<std::int8_t>& labels() const noexcept { return labels_; }

 private:
  double node_sum(std::size_t i, int zi) const;
  double pair_term(std::size_t i, std::size_t j, int zi, int zj, double dist) const;

  const SpatialGraph* g_;
  std::vector<std::int8_t> labels_;
  ModelParams params_;
  SpatialHash hash_;
  double prefix_;
  std::vector<double> partial_;
};

/// Convenience: flip-bad count under the graph's own labels.
std::size_t flip_bad_count(const SpatialGraph& g, const ModelParams& params);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// λn · P̂(a planted origin node is Flip-Bad), the first-moment prediction of
/// flip_bad_count. Each trial samples only the ball of radius support(f_in)
/// around the origin.
MeanEstimate campbell_flip_bad(const ModelParams& params, std::size_t trials, std::uint64_t seed);

enum class Decision { planted, null };

struct DistinguishReport {
  double statistic = 0.0;
  double delta_g_ref = 0.0;
  double delta_h_ref = 0.0;
  Decision decision = Decision::null;
  std::size_t nodes = 0;
};

/// h-weighted count of ordered neighbour pairs (j, k), j ~ k, at every node
/// with |X_i| <= L (0 elsewhere). OpenMP kernel.
std::vector<double> triangle_profile(const SpatialGraph& g, double L, const HSpec& h, const ConnectionFunction& f_in,
                                     const ConnectionFunction& f_out);

/// Serial reference: enumerates each triangle once and credits its corners.
std::vector<double> triangle_profile_reference(const SpatialGraph& g, double L, const HSpec& h,
                                               const ConnectionFunction& f_in, const ConnectionFunction& f_out);

/// Average triangle profile over |X_i| <= L, compared with the reference
/// moments. Throws InsufficientDataError when no node lies within L.
DistinguishReport detect_partitions(const SpatialGraph& g, double L, const HSpec& h, const ModelParams& params,
                                    const TriangleDeltas& refs);

struct InfoFlowResult {
  double success = 0.0;
  double success_stderr = 0.0;
  double reach = 0.0;  ///< fraction of trials whose I-component met the revealed region
  double reach_stderr = 0.0;
  double theta = 0.0;
  double theta_stderr = 0.0;
  bool bound_ok = true;  ///< success <= (1 + theta)/2 + 3σ
  std::size_t trials = 0;
};

struct InfoFlowOptions {
  double window_side = 0.0;  ///< sampling window; 0 means 2(r + 2·support)
  std::size_t theta_trials = 0;  ///< 0 means the same as trials
};

/// Labels are revealed outside radius r; the centre label is recovered by
/// propagating along I (G decides equal or opposite), or guessed by a fair
/// coin when the centre's I-component stays inside radius r.
InfoFlowResult info_flow_experiment(const ModelParams& params, double r, std::size_t trials, std::uint64_t seed,
                                    InfoFlowOptions opts = {});

}  // namespace geocd
