#include "geocd/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <boost/pending/disjoint_sets.hpp>

#include "geocd/error.hpp"
#include "geocd/rng.hpp"

namespace geocd {

std::vector<std::uint32_t> component_labels(const Adjacency& adj) {
  const std::size_t n = adj.node_count();
  boost::disjoint_sets_with_storage<> ds(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t j : adj.neighbors(i))
      if (j > i) ds.union_set(i, static_cast<std::size_t>(j));
  std::unordered_map<std::size_t, std::uint32_t> ids;
  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = ds.find_set(i);
    const auto [it, fresh] = ids.emplace(root, static_cast<std::uint32_t>(ids.size()));
    out[i] = it->second;
  }
  return out;
}

ClusterStats cluster_analysis(const SpatialGraph& g, double boundary_shell, bool use_info, std::size_t origin) {
  if (use_info && !g.info) throw InputError("cluster_analysis: graph has no information edges");
  ClusterStats s;
  const std::size_t n = g.size();
  if (n == 0) return s;
  const auto comp = component_labels(use_info ? *g.info : g.adjacency);
  const std::size_t k = *std::max_element(comp.begin(), comp.end()) + 1;
  s.cluster_sizes.assign(k, 0);
  for (auto c : comp) ++s.cluster_sizes[c];
  if (origin < n) {
    s.origin_cluster_size = s.cluster_sizes[comp[origin]];
    const double edge = 0.5 * g.window_side - boundary_shell;
    for (std::size_t i = 0; i < n && !s.origin_spans; ++i) {
      if (comp[i] != comp[origin]) continue;
      for (double x : g.points.point(i))
        if (std::abs(x) >= edge) s.origin_spans = true;
    }
  }
  std::sort(s.cluster_sizes.begin(), s.cluster_sizes.end(), std::greater<>());
  s.largest_fraction = static_cast<double>(s.cluster_sizes.front()) / static_cast<double>(n);
  return s;
}

namespace {

SpatialGraph planted_rcm(double lambda, const ConnectionFunction& g, int d, double window_side, std::uint64_t seed) {
  ModelParams p;
  p.lambda = lambda;
  p.d = d;
  p.n = std::pow(window_side, d);
  p.f_in = g;
  const PlantedNode origin{std::vector<double>(static_cast<std::size_t>(d), 0.0), 1};
  auto pts = sample_points(p, seed, std::span<const PlantedNode>(&origin, 1));
  return sample_null(std::move(pts), g, Metric::euclidean(), window_side, seed);
}

double binomial_stderr(double p, std::size_t trials) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

void check_theta_args(double window_side, std::size_t trials) {
  if (trials == 0) throw ValidationError("trials", "must be >= 1");
  if (!(window_side > 0.0)) throw ValidationError("window", "must be positive");
}

}  // namespace

ThetaEstimate theta_estimate(double lambda, const ConnectionFunction& g, int d, double window_side,
                             std::size_t trials, std::uint64_t seed, double boundary_shell) {
  const double lam[] = {lambda};
  return theta_sweep(lam, g, d, window_side, trials, seed, boundary_shell).front();
}

std::vector<ThetaEstimate> theta_sweep(std::span<const double> lambdas, const ConnectionFunction& g, int d,
                                       double window_side, std::size_t trials, std::uint64_t seed,
                                       double boundary_shell) {
  check_theta_args(window_side, trials);
  if (lambdas.empty()) throw ValidationError("lambda", "list must be nonempty");
  for (double l : lambdas)
    if (!(l >= 0.0) || !std::isfinite(l)) throw ValidationError("lambda", "must be finite and >= 0");
  const double shell = boundary_shell > 0.0 ? boundary_shell : g.support();
  const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
  std::vector<std::vector<char>> spans(trials, std::vector<char>(lambdas.size(), 0));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, t);
    const SpatialGraph full = planted_rcm(lmax, g, d, window_side, ts);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      const double p = lmax > 0.0 ? lambdas[k] / lmax : 1.0;
      const SpatialGraph h = p >= 1.0 ? full : thin(full, p, ts, 1);
      spans[t][k] = cluster_analysis(h, shell).origin_spans ? 1 : 0;
    }
  }
  std::vector<ThetaEstimate> out;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) hits += static_cast<std::size_t>(spans[t][k]);
    const double est = static_cast<double>(hits) / static_cast<double>(trials);
    out.push_back({lambdas[k], est, binomial_stderr(est, trials), window_side, trials, seed});
  }
  return out;
}

}  // namespace geocd
