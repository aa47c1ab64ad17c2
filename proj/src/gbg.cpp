#include "geocd/gbg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "geocd/error.hpp"
#include "geocd/moments.hpp"
#include "geocd/rng.hpp"

namespace geocd {

std::size_t count_common_neighbors(const SpatialGraph& g, std::size_t i, std::size_t j, double R) {
  g.check_node(i);
  g.check_node(j);
  if (i == j) throw InputError("count_common_neighbors: i == j");
  const auto a = g.adjacency.neighbors(i);
  const auto b = g.adjacency.neighbors(j);
  const double rsq = R * R;
  const int d = g.dim();
  std::size_t count = 0;
  auto p = a.begin();
  auto q = b.begin();
  while (p != a.end() && q != b.end()) {
    if (*p < *q) {
      ++p;
    } else if (*q < *p) {
      ++q;
    } else {
      const double* xk = g.points.data(*p);
      if (g.metric.distance_sq(xk, g.points.data(i), d) < rsq && g.metric.distance_sq(xk, g.points.data(j), d) < rsq)
        ++count;
      ++p;
      ++q;
    }
  }
  return count;
}

namespace {

constexpr std::size_t kThresholdTable = 2049;

double exact_threshold(const ModelParams& params, double R, double dist) {
  return pairwise_threshold(params, R, dist);
}

}  // namespace

PairwiseThreshold::PairwiseThreshold(const ModelParams& params, double R) : params_(params), R_(R) {
  if (!(R > 0.0)) throw InputError("PairwiseThreshold: R must be positive");
  if (params.d > 3) {
    table_.resize(kThresholdTable);
    for (std::size_t k = 0; k < kThresholdTable; ++k)
      table_[k] = exact_threshold(params, R, 2.0 * R * static_cast<double>(k) / (kThresholdTable - 1));
  }
}

double PairwiseThreshold::operator()(double dist) const {
  if (dist >= 2.0 * R_) return 0.0;
  if (table_.empty()) return exact_threshold(params_, R_, dist);
  const double pos = dist / (2.0 * R_) * static_cast<double>(kThresholdTable - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), kThresholdTable - 2);
  const double t = pos - static_cast<double>(k);
  return (1.0 - t) * table_[k] + t * table_[k + 1];
}

int pairwise_classify(const SpatialGraph& g, std::size_t i, std::size_t j, const PairwiseThreshold& threshold) {
  const double count = static_cast<double>(count_common_neighbors(g, i, j, threshold.R()));
  return count > threshold(g.dist(i, j)) ? 1 : -1;
}

int pairwise_classify(const SpatialGraph& g, std::size_t i, std::size_t j, const ModelParams& params, double R) {
  return pairwise_classify(g, i, j, PairwiseThreshold(params, R));
}

int PairSignTable::sign(std::size_t i, std::size_t j) const noexcept {
  if (i > j) std::swap(i, j);
  if (i >= rows_.size()) return 0;
  const auto& r = rows_[i];
  const auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t v) { return e.j < v; });
  return (it != r.end() && it->j == j) ? it->sign : 0;
}

std::size_t PairSignTable::pair_count() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

const std::vector<std::uint32_t>& CellMap::nodes_in(const CellIndex& z) const {
  static const std::vector<std::uint32_t> empty;
  const auto it = nodes.find(z);
  return it == nodes.end() ? empty : it->second;
}

std::vector<std::uint32_t> CellMap::thickening_nodes(const CellIndex& z, int k) const {
  const CellIndex one[] = {z};
  std::vector<std::uint32_t> out;
  for (const auto& w : thickening(grid, one, k)) {
    const auto& v = nodes_in(w);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

GridSpec grid_for(const SpatialGraph& g, double R) {
  if (g.metric.is_toroidal()) return GridSpec::periodic(R, g.dim(), g.metric.side);
  return GridSpec(R, g.dim());
}

CellMap bin_nodes(const SpatialGraph& g, const GridSpec& grid) {
  CellMap m{grid, {}, {}, {}};
  m.node_cell.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    m.node_cell[i] = cell_of(grid, g.points.point(i));
    m.nodes[m.node_cell[i]].push_back(static_cast<std::uint32_t>(i));
  }
  m.occupied.reserve(m.nodes.size());
  for (const auto& [z, v] : m.nodes) m.occupied.push_back(z);
  std::sort(m.occupied.begin(), m.occupied.end());
  return m;
}

PairSignTable build_pair_signs(const SpatialGraph& g, const CellMap& cells, const PairwiseThreshold& threshold) {
  PairSignTable table(g.size());
  const auto& occ = cells.occupied;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t c = 0; c < occ.size(); ++c) {
    const auto cand = cells.thickening_nodes(occ[c], 2);
    for (std::uint32_t i : cells.nodes_in(occ[c])) {
      auto& row = table.row(i);
      for (std::uint32_t j : cand)
        if (j > i) row.push_back({j, static_cast<std::int8_t>(pairwise_classify(g, i, j, threshold))});
    }
  }
  return table;
}

PairSignTable build_pair_signs_reference(const SpatialGraph& g, const CellMap& cells,
                                         const PairwiseThreshold& threshold) {
  PairSignTable table(g.size());
  const auto period = cells.grid.period();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (cell_distance(cells.node_cell[i], cells.node_cell[j], period) <= 2)
        table.row(i).push_back({static_cast<std::uint32_t>(j), static_cast<std::int8_t>(pairwise_classify(g, i, j, threshold))});
  return table;
}

namespace {

double effective_R(const SpatialGraph& g, const ModelParams& params, const GbgConfig& config) {
  const double R = config.R > 0.0 ? config.R : params.f_in.support();
  if (!(R > 0.0)) throw ValidationError("R", "GBG needs a positive tessellation scale");
  return grid_for(g, R).R();
}

}  // namespace

GbgContext::GbgContext(const SpatialGraph& g, const ModelParams& params, const GbgConfig& config)
    : graph_(&g),
      threshold_(params, effective_R(g, params, config)),
      cells_(bin_nodes(g, grid_for(g, effective_R(g, params, config)))),
      signs_(config.parallel ? build_pair_signs(g, cells_, threshold_)
                             : build_pair_signs_reference(g, cells_, threshold_)),
      min_count_(std::max(params.lambda * cells_.grid.cell_volume() * (1.0 - config.epsilon), 1.0)) {
  if (!(config.epsilon > 0.0 && config.epsilon < 0.5)) throw ValidationError("epsilon", "must lie in (0, 1/2)");
}

bool is_a_good(const GbgContext& ctx, const CellIndex& z) {
  if (static_cast<double>(ctx.cells().nodes_in(z).size()) < ctx.min_count()) return false;
  const auto T = ctx.cells().thickening_nodes(z, 1);
  const auto& s = ctx.signs();
  // Complete signed graph: balanced iff the colouring induced by one
  // reference node agrees with every sign.
  std::vector<int> color(T.size(), 1);
  for (std::size_t k = 1; k < T.size(); ++k) color[k] = s.sign(T[0], T[k]);
  for (std::size_t k = 1; k < T.size(); ++k)
    for (std::size_t l = k + 1; l < T.size(); ++l)
      if (s.sign(T[k], T[l]) != color[k] * color[l]) return false;
  return true;
}

bool is_t_good(const GbgContext& ctx, const CellIndex& z) {
  if (static_cast<double>(ctx.cells().nodes_in(z).size()) < ctx.min_count()) return false;
  const auto T = ctx.cells().thickening_nodes(z, 1);
  const auto& labels = ctx.graph().points.labels;
  for (std::size_t k = 0; k < T.size(); ++k)
    for (std::size_t l = k + 1; l < T.size(); ++l)
      if (ctx.signs().sign(T[k], T[l]) != labels[T[k]] * labels[T[l]]) return false;
  return true;
}

GbgResult run_gbg(const GbgContext& ctx, const GbgConfig& config) {
  const auto& g = ctx.graph();
  const auto& cells = ctx.cells();
  const auto& occ = cells.occupied;
  GbgResult res;
  res.estimates.assign(g.size(), 1);
  res.component_of.assign(g.size(), -1);
  res.cell_verdicts.resize(occ.size());
#pragma omp parallel for schedule(dynamic, 8) if (config.parallel)
  for (std::size_t c = 0; c < occ.size(); ++c) {
    auto& v = res.cell_verdicts[c];
    v.cell = occ[c];
    v.a_good = is_a_good(ctx, occ[c]);
    if (config.analysis) v.t_good = is_t_good(ctx, occ[c]);
    v.local_nodes = cells.nodes_in(occ[c]);
  }
  res.stats.occupied_cells = occ.size();
  std::unordered_map<CellIndex, std::size_t, CellIndexHash> index;
  index.reserve(occ.size());
  for (std::size_t c = 0; c < occ.size(); ++c) {
    index.emplace(occ[c], c);
    if (res.cell_verdicts[c].a_good) ++res.stats.a_good_cells;
    if (res.cell_verdicts[c].t_good.value_or(false)) ++res.stats.t_good_cells;
  }

  std::vector<std::size_t> order(occ.size());
  for (std::size_t c = 0; c < occ.size(); ++c) order[c] = c;
  std::optional<CounterRng> rng;
  if (config.traversal_seed) {
    rng.emplace(stream_seed(*config.traversal_seed, Stream::traversal));
    std::shuffle(order.begin(), order.end(), *rng);
  }
  auto pick_anchor = [&](const std::vector<std::uint32_t>& nodes) {
    if (!rng) return nodes.front();
    return nodes[static_cast<std::size_t>((*rng)() % nodes.size())];
  };
  auto checked_sign = [&](std::uint32_t a, std::uint32_t b) {
    const int s = ctx.signs().sign(a, b);
    if (s == 0) throw std::logic_error("run_gbg: pair missing from sign table");
    return s;
  };

  std::vector<char> visited(occ.size(), 0);
  std::vector<std::uint32_t> anchor(occ.size(), 0);
  std::int32_t comp = 0;
  for (std::size_t start : order) {
    if (visited[start] || !res.cell_verdicts[start].a_good) continue;
    std::size_t comp_nodes = 0;
    std::deque<std::size_t> queue;
    auto settle = [&](std::size_t c, std::uint32_t a, int est) {
      visited[c] = 1;
      anchor[c] = a;
      res.estimates[a] = static_cast<std::int8_t>(est);
      for (std::uint32_t k : cells.nodes_in(occ[c])) {
        if (k != a) res.estimates[k] = static_cast<std::int8_t>(est * checked_sign(a, k));
        res.component_of[k] = comp;
        ++comp_nodes;
      }
      queue.push_back(c);
    };
    settle(start, pick_anchor(cells.nodes_in(occ[start])), 1);
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      const CellIndex one[] = {occ[c]};
      auto nbrs = thickening(cells.grid, one, 1);
      if (rng) std::shuffle(nbrs.begin(), nbrs.end(), *rng);
      for (const auto& w : nbrs) {
        const auto it = index.find(w);
        if (it == index.end()) continue;
        const std::size_t u = it->second;
        if (visited[u] || !res.cell_verdicts[u].a_good) continue;
        const std::uint32_t a = pick_anchor(cells.nodes_in(w));
        settle(u, a, res.estimates[anchor[c]] * checked_sign(anchor[c], a));
      }
    }
    res.stats.largest_component_nodes = std::max(res.stats.largest_component_nodes, comp_nodes);
    ++comp;
  }
  res.stats.components = static_cast<std::size_t>(comp);
  return res;
}

GbgResult run_gbg(const SpatialGraph& g, const ModelParams& params, const GbgConfig& config) {
  const GbgContext ctx(g, params, config);
  return run_gbg(ctx, config);
}

}  // namespace geocd
