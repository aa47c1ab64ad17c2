#include "geocd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "geocd/error.hpp"
#include "geocd/percolation.hpp"
#include "geocd/rng.hpp"

namespace geocd {

double overlap(std::span<const std::int8_t> estimates, std::span<const std::int8_t> truth) {
  if (estimates.size() != truth.size()) throw InputError("overlap: length mismatch");
  if (truth.empty()) return 1.0;
  long long s = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) s += estimates[i] * truth[i];
  return static_cast<double>(std::llabs(s)) / static_cast<double>(truth.size());
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_prefix(double lambda, double n, std::size_t N) {
  const double mean = lambda * n;
  if (N == 0) return -mean;
  const double Nd = static_cast<double>(N);
  return -mean + Nd * std::log(mean) - std::lgamma(Nd + 1.0) - Nd * std::log(2.0 * n);
}

double log_pair(const ModelParams& params, bool edge, int zi, int zj, double dist) {
  const double f = zi == zj ? params.f_in(dist) : params.f_out(dist);
  if (edge) return f > 0.0 ? std::log(f) : kNegInf;
  return f < 1.0 ? std::log1p(-f) : kNegInf;
}

// is_flip_bad(0) on a sampled neighbourhood, drawing only the origin's edge
// marks.
bool origin_flip_bad(const MarkedPointSet& pts, const ModelParams& params, std::uint64_t seed) {
  const double support = params.f_in.support();
  const std::uint64_t es = stream_seed(seed, Stream::edges);
  const Metric metric = Metric::euclidean();
  const int z0 = pts.labels[0];
  double keep = 0.0;
  double flipped = 0.0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    const double dist = std::sqrt(metric.distance_sq(pts.data(0), pts.data(j), pts.d));
    if (dist > support) continue;
    const int zj = pts.labels[j];
    const double f = z0 == zj ? params.f_in(dist) : params.f_out(dist);
    const bool edge = edge_uniform(es, 0, j) < f;
    keep += log_pair(params, edge, z0, zj, dist);
    flipped += log_pair(params, edge, -z0, zj, dist);
  }
  return flipped >= keep;
}

}  // namespace

LikelihoodContext::LikelihoodContext(const SpatialGraph& g, std::vector<std::int8_t> labels, const ModelParams& params)
    : g_(&g),
      labels_(std::move(labels)),
      params_(params),
      hash_(g.points.coords, g.dim(), g.metric, params.f_in.support()),
      prefix_(log_prefix(params.lambda, params.n, g.size())) {
  if (labels_.size() != g.size()) throw InputError("LikelihoodContext: one label per node required");
  const double support = params.f_in.support();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::uint32_t j : g.adjacency.neighbors(i)) {
      if (j < i) continue;
      const double dist = g.dist(i, j);
      if (dist > support) throw CorruptInputError("edge longer than the connection support");
      if (params.f_in(dist) == 0.0 && params.f_out(dist) == 0.0)
        throw CorruptInputError("edge where both connection functions vanish");
    }
  }
  partial_.assign(g.size(), 0.0);
  bool corrupt = false;
#pragma omp parallel for schedule(dynamic, 64) reduction(|| : corrupt)
  for (std::size_t i = 0; i < g.size(); ++i) {
    hash_.for_each_within(g.points.data(i), support, [&](std::uint32_t j, double dist) {
      if (j != i && !g.has_edge(i, j) && params_.f_in(dist) == 1.0 && params_.f_out(dist) == 1.0) corrupt = true;
    });
    partial_[i] = node_sum(i, labels_[i]);
  }
  if (corrupt) throw CorruptInputError("missing edge where both connection functions equal 1");
}

double LikelihoodContext::pair_term(std::size_t i, std::size_t j, int zi, int zj, double dist) const {
  return log_pair(params_, g_->has_edge(i, j), zi, zj, dist);
}

double LikelihoodContext::node_sum(std::size_t i, int zi) const {
  double s = 0.0;
  hash_.for_each_within(g_->points.data(i), params_.f_in.support(), [&](std::uint32_t j, double dist) {
    if (j != i) s += pair_term(i, j, zi, labels_[j], dist);
  });
  return s;
}

double LikelihoodContext::log_likelihood() const {
  double s = 0.0;
  for (double p : partial_) s += p;
  return prefix_ + 0.5 * s;
}

double LikelihoodContext::log_likelihood_full() const {
  double s = 0.0;
  for (std::size_t i = 0; i < g_->size(); ++i)
    hash_.for_each_within(g_->points.data(i), params_.f_in.support(), [&](std::uint32_t j, double dist) {
      if (j > i) s += pair_term(i, j, labels_[i], labels_[j], dist);
    });
  return prefix_ + s;
}

double LikelihoodContext::flipped_partial(std::size_t i) const { return node_sum(i, -labels_[i]); }

bool LikelihoodContext::is_flip_bad(std::size_t i) const {
  g_->check_node(i);
  return flipped_partial(i) >= partial_[i];
}

std::size_t LikelihoodContext::flip_bad_count() const {
  std::size_t count = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : count)
  for (std::size_t i = 0; i < g_->size(); ++i)
    if (flipped_partial(i) >= partial_[i]) ++count;
  return count;
}

void LikelihoodContext::flip(std::size_t i) {
  g_->check_node(i);
  labels_[i] = static_cast<std::int8_t>(-labels_[i]);
  partial_[i] = node_sum(i, labels_[i]);
  hash_.for_each_within(g_->points.data(i), params_.f_in.support(), [&](std::uint32_t j, double) {
    if (j != i) partial_[j] = node_sum(j, labels_[j]);
  });
}

std::size_t flip_bad_count(const SpatialGraph& g, const ModelParams& params) {
  return LikelihoodContext(g, g.points.labels, params).flip_bad_count();
}

MeanEstimate campbell_flip_bad(const ModelParams& params, std::size_t trials, std::uint64_t seed) {
  params.validate();
  if (trials == 0) throw ValidationError("trials", "must be >= 1");
  const double support = params.f_in.support();
  ModelParams local = params;
  local.regime = Regime::sparse_euclidean;
  local.n = std::pow(2.0 * support * (1.0 + 1e-9) + 1e-12, params.d);
  std::size_t hits = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : hits)
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, t);
    const int label = CounterRng(stream_seed(ts, Stream::coin)).sign();
    const PlantedNode origin{std::vector<double>(static_cast<std::size_t>(params.d), 0.0), label};
    const auto pts = sample_points(local, ts, std::span<const PlantedNode>(&origin, 1));
    if (origin_flip_bad(pts, local, ts)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  const double scale = params.lambda * params.n;
  return {scale * p, scale * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> triangle_profile(const SpatialGraph& g, double L, const HSpec& h, const ConnectionFunction& f_in,
                                     const ConnectionFunction& f_out) {
  std::vector<double> prof(g.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (norm(g.points.point(i)) > L) continue;
    const auto ni = g.adjacency.neighbors(i);
    double acc = 0.0;
    for (std::uint32_t j : ni) {
      const double dij = g.dist(i, j);
      const auto nj = g.adjacency.neighbors(j);
      auto p = ni.begin();
      auto q = nj.begin();
      while (p != ni.end() && q != nj.end()) {
        if (*p < *q) {
          ++p;
        } else if (*q < *p) {
          ++q;
        } else {
          const std::uint32_t k = *p;
          if (h.accepts(f_in, f_out, dij, g.dist(i, k), g.dist(j, k))) acc += 1.0;
          ++p;
          ++q;
        }
      }
    }
    prof[i] = acc;
  }
  return prof;
}

std::vector<double> triangle_profile_reference(const SpatialGraph& g, double L, const HSpec& h,
                                               const ConnectionFunction& f_in, const ConnectionFunction& f_out) {
  std::vector<double> prof(g.size(), 0.0);
  auto credit = [&](std::size_t c, std::size_t u, std::size_t v) {
    if (norm(g.points.point(c)) > L) return;
    const double du = g.dist(c, u), dv = g.dist(c, v), duv = g.dist(u, v);
    if (h.accepts(f_in, f_out, du, dv, duv)) prof[c] += 1.0;
    if (h.accepts(f_in, f_out, dv, du, duv)) prof[c] += 1.0;
  };
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::uint32_t j : g.adjacency.neighbors(i)) {
      if (j <= i) continue;
      for (std::uint32_t k : g.adjacency.neighbors(j)) {
        if (k <= j || !g.has_edge(i, k)) continue;
        credit(i, j, k);
        credit(j, i, k);
        credit(k, i, j);
      }
    }
  return prof;
}

DistinguishReport detect_partitions(const SpatialGraph& g, double L, const HSpec& h, const ModelParams& params,
                                    const TriangleDeltas& refs) {
  const auto prof = triangle_profile(g, L, h, params.f_in, params.f_out);
  DistinguishReport r;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (norm(g.points.point(i)) > L) continue;
    sum += prof[i];
    ++r.nodes;
  }
  if (r.nodes == 0) throw InsufficientDataError("detect_partitions: no nodes within L");
  r.statistic = sum / static_cast<double>(r.nodes);
  r.delta_g_ref = refs.delta_g;
  r.delta_h_ref = refs.delta_h;
  r.decision = std::abs(r.statistic - refs.delta_g) < std::abs(r.statistic - refs.delta_h) ? Decision::planted
                                                                                            : Decision::null;
  return r;
}

namespace {

struct FlowTrial {
  bool reached = false;
  bool success = false;
};

FlowTrial info_flow_trial(const ModelParams& params, double r, double window, std::uint64_t ts) {
  ModelParams local = params;
  local.regime = Regime::sparse_euclidean;
  local.n = std::pow(window, params.d);
  const int label = CounterRng(stream_seed(ts, Stream::coin)).sign();
  const PlantedNode origin{std::vector<double>(static_cast<std::size_t>(params.d), 0.0), label};
  const SpatialGraph g = sample_coupled(local, ts, std::span<const PlantedNode>(&origin, 1), true);
  const auto& I = *g.info;
  // rel[v] = Z_v / Z_0, fixed along I-edges by whether G has the edge.
  std::vector<std::int8_t> rel(g.size(), 0);
  rel[0] = 1;
  std::deque<std::uint32_t> queue{0};
  FlowTrial out;
  int estimate = 0;
  while (!queue.empty() && estimate == 0) {
    const std::uint32_t u = queue.front();
    queue.pop_front();
    for (std::uint32_t v : I.neighbors(u)) {
      if (rel[v] != 0) continue;
      rel[v] = static_cast<std::int8_t>(g.has_edge(u, v) ? rel[u] : -rel[u]);
      if (norm(g.points.point(v)) > r) {
        estimate = g.points.labels[v] * rel[v];
        break;
      }
      queue.push_back(v);
    }
  }
  out.reached = estimate != 0;
  if (!out.reached) estimate = CounterRng(derive_seed(stream_seed(ts, Stream::coin), 1)).sign();
  out.success = estimate == g.points.labels[0];
  return out;
}

}  // namespace

InfoFlowResult info_flow_experiment(const ModelParams& params, double r, std::size_t trials, std::uint64_t seed,
                                    InfoFlowOptions opts) {
  params.validate();
  if (trials == 0) throw ValidationError("trials", "must be >= 1");
  if (!(r > 0.0)) throw ValidationError("r", "must be positive");
  const double support = params.f_in.support();
  const double window = opts.window_side > 0.0 ? opts.window_side : 2.0 * (r + 2.0 * support);
  std::vector<FlowTrial> res(trials);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t t = 0; t < trials; ++t) res[t] = info_flow_trial(params, r, window, derive_seed(seed, t));

  InfoFlowResult out;
  out.trials = trials;
  std::size_t wins = 0, reached = 0;
  for (const auto& t : res) {
    wins += t.success ? 1 : 0;
    reached += t.reached ? 1 : 0;
  }
  const double T = static_cast<double>(trials);
  out.success = static_cast<double>(wins) / T;
  out.success_stderr = std::sqrt(out.success * (1.0 - out.success) / T);
  out.reach = static_cast<double>(reached) / T;
  out.reach_stderr = std::sqrt(out.reach * (1.0 - out.reach) / T);

  // Window chosen so that reaching radius r forces the origin to span.
  const auto g = difference(params.f_in, params.f_out);
  const double theta_window = 2.0 * (r / std::sqrt(static_cast<double>(params.d)) + g.support());
  const auto theta = theta_estimate(params.lambda, g, params.d, theta_window,
                                    opts.theta_trials ? opts.theta_trials : trials, derive_seed(seed, 0x7468ULL),
                                    g.support());
  out.theta = theta.estimate;
  out.theta_stderr = theta.std_error;
  const double sigma = std::sqrt(out.success_stderr * out.success_stderr + 0.25 * theta.std_error * theta.std_error);
  out.bound_ok = out.success <= 0.5 * (1.0 + out.theta) + 3.0 * sigma;
  return out;
}

}  // namespace geocd
