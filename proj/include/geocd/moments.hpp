#pragma once

// Analytic quantities of the planted partition model: lens moments,
// common-neighbour means, recovery thresholds and triangle moments.

#include <cstdint>
#include <limits>
#include <span>

#include "geocd/connection.hpp"
#include "geocd/model.hpp"

namespace geocd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MomentPair {
  double m_in = 0.0;
  double m_out = 0.0;
};

/// M_in = ∫_S (f_in f_in + f_out f_out), M_out = ∫_S 2 f_in f_out over the
/// lens S = B(x,R) ∩ B(y,R) with ||x-y|| = dist; the two factors are
/// evaluated at ||z-x|| and ||z-y||.
MomentPair eval_m(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d, double R, double dist);

struct NeighborMeans {
  double mu_same = 0.0;
  double mu_diff = 0.0;
};

/// Mean common-neighbour count (within R of both) for a same-label and an
/// opposite-label pair at distance dist: (λ/2)·M_in and (λ/2)·M_out.
NeighborMeans common_neighbor_means(const ModelParams& params, double R, double dist);

/// Pairwise classification threshold (λ/4)(M_in + M_out).
double pairwise_threshold(const ModelParams& params, double R, double dist);

/// 1 / ∫(f_in - f_out), or +∞ when the integral vanishes.
double lambda_lower(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d);

/// max over t in [0,1] of Σ t μ + (1-t) ν - μ^t ν^(1-t). Throws InputError
/// on length mismatch or negative entries.
double ch_divergence(std::span<const double> mu, std::span<const double> nu);

/// 1 - √(ab) - √((1-a)(1-b)).
double ch_bracket(double a, double b);

/// λ ν_d (1 - √(ab) - √((1-a)(1-b))); exact recovery fails below 1.
double exact_recovery_threshold(double lambda, double a, double b, int d);

/// (1/3) Σ_{k>=M} k x^k with x = 3 q^(1/M), in closed form; +∞ when x >= 1.
double peierls_lhs(double q, int M);

/// Number of cells in the dependence range, ceil(12 d^(1/d)).
int peierls_range(int d);

/// (1+t) log(1+t) - t.
double chernoff_h(double t);

/// Minimum over 64 equally spaced distances in [0, 3R/4] of
/// (M_out > 0 ? M_out : M_in) · h((M_in - M_out) / (2 M_in)).
double chernoff_constant(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d, double R);

/// Upper bound on the probability that a cell is T-Bad at intensity λ.
double t_bad_bound(double lambda, int d, double R, double epsilon, double c);

struct UpperBoundOptions {
  double start = 1e-2;
  double factor = 1.01;
  double cap = 1e9;
};

/// Smallest λ on the grid start·factor^k with peierls_lhs(q(λ)) <= 1/2 - η,
/// or +∞ when the cap is reached. R = 0 means the support of f_in.
double lambda_upper_bound(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d, double epsilon,
                          double eta, double R = 0.0, UpperBoundOptions opts = {});

struct ThresholdReport {
  double lambda_lower = kInfinity;
  double lambda_upper = kInfinity;
  double peierls_lhs_at_upper = kInfinity;
  double chernoff_c = 0.0;
};

ThresholdReport threshold_report(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d,
                                 double epsilon, double eta, double R = 0.0);

/// Test function for the triangle statistic:
/// h(x,y) = 1{|x| <= r_x} 1{|y| <= r_y} 1{|x-y| <= r_xy}, optionally
/// restricted to legs where f_in > f_out.
struct HSpec {
  double r_x = 1.0;
  double r_y = 1.0;
  double r_xy = 1.0;
  bool informative_only = true;

  /// All three radii equal to R, informative legs only.
  static HSpec standard(double R) { return {R, R, R, true}; }

  bool accepts(const ConnectionFunction& f_in, const ConnectionFunction& f_out, double rx, double ry,
               double rxy) const noexcept {
    if (rx > r_x || ry > r_y || rxy > r_xy) return false;
    if (!informative_only) return true;
    return f_in(rx) > f_out(rx) && f_in(ry) > f_out(ry) && f_in(rxy) > f_out(rxy);
  }
};

struct TriangleDeltas {
  double delta_g = 0.0;
  double delta_h = 0.0;
  double stderr_g = 0.0;
  double stderr_h = 0.0;
};

inline constexpr std::size_t kTriangleSamples = 2'000'000;

/// Monte Carlo values of the mean h-weighted triangle count at a typical
/// node in G and in the null model with g = (f_in + f_out)/2. Both use the
/// same samples, so delta_g >= delta_h holds exactly.
TriangleDeltas triangle_deltas(const ConnectionFunction& f_in, const ConnectionFunction& f_out, double lambda, int d,
                               const HSpec& h, std::size_t samples = kTriangleSamples, std::uint64_t seed = 0);

}  // namespace geocd
