#include "geocd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "geocd/error.hpp"
#include "geocd/rng.hpp"
#include "geocd/spatial_hash.hpp"

namespace geocd {

ModelParams ModelParams::log_regime(double lambda, double a, double b, int d, double n) {
  if (!(n > 1.0)) throw ValidationError("n", "log regime needs n > 1");
  if (d < 1 || d > kMaxDim) throw ValidationError("d", "unsupported dimension");
  const double support = std::pow(std::log(n), 1.0 / d);
  ModelParams p;
  p.lambda = lambda;
  p.d = d;
  p.n = n;
  p.f_in = ConnectionFunction::scaled_indicator(a, support);
  p.f_out = ConnectionFunction::scaled_indicator(b, support);
  p.regime = Regime::log_torus;
  return p;
}

void ModelParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda", "must be finite and >= 0");
  if (d < 1 || d > kMaxDim) throw ValidationError("d", "must lie in [1, 8]");
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("n", "must be finite and > 0");
  if (!dominates(f_in, f_out)) throw ValidationError("f_out", "f_in must dominate f_out pointwise");
  if (regime == Regime::log_torus) {
    if (!(n > 1.0)) throw ValidationError("n", "log regime needs n > 1");
    const double support = std::pow(std::log(n), 1.0 / d);
    auto ok = [&](const ConnectionFunction& f) {
      return f.kind() == ConnectionFunction::Kind::scaled_indicator &&
             std::abs(f.breakpoints().back() - support) <= 1e-9 * support;
    };
    if (!ok(f_in) || !ok(f_out))
      throw ValidationError("regime", "log regime needs scaled indicators of radius log(n)^(1/d)");
  }
}

double ModelParams::window_side() const { return std::pow(n, 1.0 / d); }

Metric ModelParams::metric() const {
  return regime == Regime::log_torus ? Metric::toroidal(window_side()) : Metric::euclidean();
}

void MarkedPointSet::push_back(std::span<const double> x, int label) {
  if (static_cast<int>(x.size()) != d) throw InputError("MarkedPointSet: dimension mismatch");
  if (label != 1 && label != -1) throw InputError("MarkedPointSet: labels must be +1 or -1");
  coords.insert(coords.end(), x.begin(), x.end());
  labels.push_back(static_cast<std::int8_t>(label));
}

Adjacency Adjacency::from_lists(std::vector<std::vector<std::uint32_t>> lists) {
  Adjacency a;
  a.offsets_.assign(lists.size() + 1, 0);
  for (std::size_t i = 0; i < lists.size(); ++i) a.offsets_[i + 1] = a.offsets_[i] + lists[i].size();
  a.targets_.reserve(a.offsets_.back());
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    a.targets_.insert(a.targets_.end(), l.begin(), l.end());
  }
  return a;
}

bool Adjacency::contains(std::size_t i, std::size_t j) const noexcept {
  if (i >= node_count()) return false;
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(j));
}

double SpatialGraph::window_volume() const { return std::pow(window_side, points.d); }

double SpatialGraph::dist(std::size_t i, std::size_t j) const noexcept {
  return std::sqrt(metric.distance_sq(points.data(i), points.data(j), points.d));
}

void SpatialGraph::check_node(std::size_t i) const {
  if (i >= size()) throw InputError("unknown node id " + std::to_string(i));
}

MarkedPointSet sample_points(const ModelParams& params, std::uint64_t seed, std::span<const PlantedNode> planted) {
  params.validate();
  const int d = params.d;
  const double side = params.window_side();
  MarkedPointSet out;
  out.d = d;
  for (const auto& p : planted) out.push_back(p.x, p.label);

  CounterRng loc(stream_seed(seed, Stream::points));
  CounterRng lab(stream_seed(seed, Stream::labels));
  std::uint64_t count = 0;
  if (params.lambda > 0.0) {
    std::poisson_distribution<std::uint64_t> pois(params.lambda * params.n);
    count = pois(loc);
  }
  std::vector<double> xs(count * static_cast<std::size_t>(d));
  std::vector<std::int8_t> zs(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (int k = 0; k < d; ++k) xs[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] = loc.uniform(-0.5 * side, 0.5 * side);
    zs[i] = static_cast<std::int8_t>(lab.sign());
  }
  std::vector<double> sup(count, 0.0);
  for (std::size_t i = 0; i < count; ++i)
    for (int k = 0; k < d; ++k) sup[i] = std::max(sup[i], std::abs(xs[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)]));
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sup[a] < sup[b]; });

  out.coords.reserve(out.coords.size() + xs.size());
  out.labels.reserve(out.labels.size() + count);
  for (std::size_t i : order) {
    out.coords.insert(out.coords.end(), xs.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(d)),
                      xs.begin() + static_cast<std::ptrdiff_t>((i + 1) * static_cast<std::size_t>(d)));
    out.labels.push_back(zs[i]);
  }
  return out;
}

namespace {

// rule(i, j, dist) returns a bitmask: 1 = edge in the first graph, 2 = edge
// in the second.
template <typename Rule>
void build_lists(const MarkedPointSet& pts, const Metric& metric, double radius, Rule rule,
                 std::vector<std::vector<std::uint32_t>>& first, std::vector<std::vector<std::uint32_t>>* second) {
  const std::size_t N = pts.size();
  first.assign(N, {});
  if (second) second->assign(N, {});
  if (N < 2 || !(radius > 0.0)) return;
  const SpatialHash hash(pts.coords, pts.d, metric, radius);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < N; ++i) {
    hash.for_each_within(pts.data(i), radius, [&](std::uint32_t j, double dist) {
      if (j == i) return;
      const unsigned mask = rule(i, j, dist);
      if (mask & 1u) first[i].push_back(j);
      if (second && (mask & 2u)) (*second)[i].push_back(j);
    });
  }
}

}  // namespace

SpatialGraph connect_coupled(MarkedPointSet points, const ModelParams& params, std::uint64_t seed, bool with_info) {
  params.validate();
  SpatialGraph g;
  g.metric = params.metric();
  g.window_side = params.window_side();
  const std::uint64_t es = stream_seed(seed, Stream::edges);
  const auto& f_in = params.f_in;
  const auto& f_out = params.f_out;
  const auto& labels = points.labels;
  std::vector<std::vector<std::uint32_t>> gl, il;
  build_lists(
      points, g.metric, f_in.support(),
      [&](std::size_t i, std::size_t j, double dist) -> unsigned {
        const double u = edge_uniform(es, i, j);
        const double a = f_in(dist), b = f_out(dist);
        unsigned mask = 0;
        if (u < (labels[i] == labels[j] ? a : b)) mask |= 1u;
        if (b <= u && u < a) mask |= 2u;
        return mask;
      },
      gl, with_info ? &il : nullptr);
  g.points = std::move(points);
  g.adjacency = Adjacency::from_lists(std::move(gl));
  if (with_info) g.info = Adjacency::from_lists(std::move(il));
  return g;
}

SpatialGraph sample_coupled(const ModelParams& params, std::uint64_t seed, std::span<const PlantedNode> planted,
                            bool with_info) {
  return connect_coupled(sample_points(params, seed, planted), params, seed, with_info);
}

SpatialGraph sample_null(MarkedPointSet points, const ConnectionFunction& g, const Metric& metric, double window_side,
                         std::uint64_t seed) {
  SpatialGraph out;
  out.metric = metric;
  out.window_side = window_side;
  const std::uint64_t es = stream_seed(seed, Stream::edges);
  std::vector<std::vector<std::uint32_t>> lists;
  build_lists(
      points, metric, g.support(),
      [&](std::size_t i, std::size_t j, double dist) -> unsigned { return edge_uniform(es, i, j) < g(dist) ? 1u : 0u; },
      lists, nullptr);
  out.points = std::move(points);
  out.adjacency = Adjacency::from_lists(std::move(lists));
  return out;
}

SpatialGraph thin(const SpatialGraph& graph, double p, std::uint64_t seed, std::size_t protect,
                  std::vector<std::uint32_t>* kept) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("thin: p must lie in [0,1]");
  const std::uint64_t ts = stream_seed(seed, Stream::thinning);
  const std::size_t N = graph.size();
  constexpr auto none = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> new_id(N, none);
  std::vector<std::uint32_t> ids;
  SpatialGraph out;
  out.metric = graph.metric;
  out.window_side = graph.window_side;
  out.points.d = graph.points.d;
  for (std::size_t i = 0; i < N; ++i) {
    if (i < protect || node_uniform(ts, i) < p) {
      new_id[i] = static_cast<std::uint32_t>(ids.size());
      ids.push_back(static_cast<std::uint32_t>(i));
      out.points.push_back(graph.points.point(i), graph.points.labels[i]);
    }
  }
  auto induce = [&](const Adjacency& a) {
    std::vector<std::vector<std::uint32_t>> lists(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k)
      for (std::uint32_t j : a.neighbors(ids[k]))
        if (new_id[j] != none) lists[k].push_back(new_id[j]);
    return Adjacency::from_lists(std::move(lists));
  };
  out.adjacency = induce(graph.adjacency);
  if (graph.info) out.info = induce(*graph.info);
  if (kept) *kept = std::move(ids);
  return out;
}

}  // namespace geocd
