#pragma once

// Shared fixtures, hand-rolled generators and small statistics helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "geocd/connection.hpp"
#include "geocd/model.hpp"
#include "geocd/rng.hpp"

namespace testing {

using namespace geocd;

/// Random inputs for property tests, driven by the library's own counter RNG.
struct Gen {
  CounterRng rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return rng.uniform(lo, hi); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return rng.sign() > 0; }

  std::vector<double> point(int d, double half) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (auto& v : x) v = uniform(-half, half);
    return x;
  }

  /// Nonincreasing piecewise-constant radial table with `pieces` steps.
  ConnectionFunction radial(int pieces, double max_radius) {
    std::vector<double> br{0.0};
    std::vector<double> val;
    double level = uniform(0.3, 1.0);
    for (int k = 0; k < pieces; ++k) {
      br.push_back(br.back() + uniform(0.05, max_radius / pieces));
      val.push_back(level);
      level *= uniform(0.3, 1.0);
    }
    return ConnectionFunction::radial_table(br, val);
  }

  /// f_in >= f_out with f_out = f_in scaled and truncated.
  std::pair<ConnectionFunction, ConnectionFunction> ordered_pair(int pieces, double max_radius) {
    auto f_in = radial(pieces, max_radius);
    const double scale = uniform(0.0, 1.0);
    const double cut = uniform(0.3, 1.0) * f_in.support();
    std::vector<double> br{0.0};
    std::vector<double> val;
    const auto& b = f_in.breakpoints();
    for (std::size_t k = 0; k + 1 < b.size() && b[k] < cut; ++k) {
      br.push_back(std::min(b[k + 1], cut));
      val.push_back(f_in.values()[k] * scale);
    }
    return {f_in, ConnectionFunction::radial_table(br, val)};
  }

  /// Indicator pair a·1{r<=R}, b·1{r<=R_out}, with b <= a and R_out <= R.
  std::pair<ConnectionFunction, ConnectionFunction> indicator_pair(double max_radius) {
    const double a = uniform(0.2, 1.0);
    const double b = uniform(0.0, a);
    const double R = uniform(0.3, max_radius);
    const double R_out = uniform(0.2, 1.0) * R;
    return {ConnectionFunction::scaled_indicator(a, R), ConnectionFunction::scaled_indicator(b, R_out)};
  }
};

/// Graph built by hand from coordinates, labels and an edge list.
inline SpatialGraph fixture(int d, const std::vector<std::vector<double>>& pts, const std::vector<int>& labels,
                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                            double window_side = 100.0) {
  SpatialGraph g;
  g.points.d = d;
  for (std::size_t i = 0; i < pts.size(); ++i) g.points.push_back(pts[i], labels[i]);
  std::vector<std::vector<std::uint32_t>> lists(pts.size());
  for (auto [i, j] : edges) {
    lists[i].push_back(j);
    lists[j].push_back(i);
  }
  g.adjacency = Adjacency::from_lists(std::move(lists));
  g.metric = Metric::euclidean();
  g.window_side = window_side;
  return g;
}

inline ModelParams sparse_params(double lambda, double a, double R, double b, double R_out, int d, double n) {
  ModelParams p;
  p.lambda = lambda;
  p.d = d;
  p.n = n;
  p.f_in = ConnectionFunction::scaled_indicator(a, R);
  p.f_out = ConnectionFunction::scaled_indicator(b, R_out);
  return p;
}

/// Labels implied on one I-component by a seed label of +1: across an I-edge
/// the labels agree iff the pair is also a G-edge. Returns the component's
/// nodes and whether the implied labels equal the truth up to one global
/// flip.
struct Propagation {
  std::vector<std::uint32_t> nodes;
  bool matches_truth = true;
};

inline Propagation propagate_info(const SpatialGraph& g, std::uint32_t seed, std::vector<std::int8_t>& implied) {
  Propagation out;
  if (implied.size() != g.size()) implied.assign(g.size(), 0);
  implied[seed] = 1;
  out.nodes.push_back(seed);
  for (std::size_t head = 0; head < out.nodes.size(); ++head) {
    const auto u = out.nodes[head];
    for (std::uint32_t v : g.info->neighbors(u)) {
      const auto want = static_cast<std::int8_t>(g.has_edge(u, v) ? implied[u] : -implied[u]);
      if (implied[v] == 0) {
        implied[v] = want;
        out.nodes.push_back(v);
      } else if (implied[v] != want) {
        out.matches_truth = false;
      }
    }
  }
  const int flip = implied[seed] * g.points.labels[seed];
  for (auto v : out.nodes)
    if (implied[v] * flip != g.points.labels[v]) out.matches_truth = false;
  return out;
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
};

inline Moments moments_of(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    m.se = m.sd / std::sqrt(static_cast<double>(v.size()));
  }
  return m;
}

}  // namespace testing
