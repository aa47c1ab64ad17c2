#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "geocd/error.hpp"
#include "geocd/model.hpp"
#include "support.hpp"

using namespace geocd;
using testing::sparse_params;

namespace {

std::size_t coupling_violations(const SpatialGraph& g) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::uint32_t j : g.info->neighbors(i)) {
      const bool same = g.points.labels[i] == g.points.labels[j];
      if (g.has_edge(i, j) != same) ++bad;
    }
  return bad;
}

bool symmetric(const Adjacency& a) {
  for (std::size_t i = 0; i < a.node_count(); ++i)
    for (std::uint32_t j : a.neighbors(i))
      if (j == i || !a.contains(j, i)) return false;
  return true;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("validation names the field") {
  auto p = sparse_params(1.0, 1.0, 1.0, 0.5, 1.0, 2, 100.0);
  CHECK_NOTHROW(p.validate());
  auto bad = p;
  bad.lambda = -1.0;
  try {
    bad.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "lambda");
  }
  bad = p;
  bad.f_out = ConnectionFunction::scaled_indicator(1.0, 2.0);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.regime = Regime::log_torus;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_NOTHROW(ModelParams::log_regime(2.0, 0.9, 0.1, 2, 500.0).validate());
  CHECK_THROWS_AS(ModelParams::log_regime(2.0, 0.1, 0.9, 2, 500.0).validate(), ValidationError);
}

TEST_CASE("point counts follow the Poisson law") {
  auto p = sparse_params(0.0, 1.0, 1.0, 0.0, 1.0, 2, 100.0);
  CHECK(sample_points(p, 1).size() == 0);
  p.lambda = 2.0;
  const std::size_t T = 500;
  std::vector<double> counts, left, right;
  for (std::size_t t = 0; t < T; ++t) {
    const auto pts = sample_points(p, t);
    counts.push_back(static_cast<double>(pts.size()));
    double l = 0, r = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) (pts.point(i)[0] < 0.0 ? l : r) += 1.0;
    left.push_back(l);
    right.push_back(r);
  }
  const auto m = testing::moments_of(counts);
  CHECK(std::abs(m.mean - 200.0) <= 3.0 * std::sqrt(200.0 / T));
  CHECK(m.sd * m.sd == doctest::Approx(200.0).epsilon(0.2));
  const auto ml = testing::moments_of(left), mr = testing::moments_of(right);
  double cov = 0.0;
  for (std::size_t t = 0; t < T; ++t) cov += (left[t] - ml.mean) * (right[t] - mr.mean);
  const double corr = cov / static_cast<double>(T - 1) / (ml.sd * mr.sd);
  CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(T)));
}

TEST_CASE("points lie in the window, ids by sup-norm, labels balanced") {
  const auto p = sparse_params(5.0, 1.0, 1.0, 0.0, 1.0, 2, 400.0);
  const std::vector<PlantedNode> planted{{{3.0, 3.0}, -1}, {{0.0, 0.0}, 1}};
  const auto pts = sample_points(p, 9, planted);
  REQUIRE(pts.size() > 1500);
  CHECK(pts.labels[0] == -1);
  CHECK(pts.point(0)[0] == 3.0);
  CHECK(pts.labels[1] == 1);
  double prev = 0.0;
  long long sum = 0;
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const auto x = pts.point(i);
    const double sup = std::max(std::abs(x[0]), std::abs(x[1]));
    CHECK(sup <= 10.0);
    CHECK(sup >= prev);
    prev = sup;
    sum += pts.labels[i];
  }
  CHECK(std::abs(static_cast<double>(sum)) < 4.0 * std::sqrt(static_cast<double>(pts.size())));
}

TEST_CASE("coupled graphs satisfy the coupling rule") {
  testing::Gen gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [f_in, f_out] = gen.coin() ? gen.indicator_pair(1.5) : gen.ordered_pair(gen.integer(1, 3), 1.5);
    ModelParams p;
    p.lambda = gen.uniform(0.5, 6.0);
    p.d = gen.integer(1, 3);
    p.n = std::pow(gen.uniform(4.0, 8.0), p.d);
    p.f_in = f_in;
    p.f_out = f_out;
    const auto g = sample_coupled(p, static_cast<std::uint64_t>(trial));
    REQUIRE(g.info);
    CHECK(symmetric(g.adjacency));
    CHECK(symmetric(*g.info));
    CHECK(coupling_violations(g) == 0);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::uint32_t j : g.adjacency.neighbors(i)) CHECK(g.dist(i, j) <= f_in.support());
  }
}

TEST_CASE("equal connection functions give an empty information graph") {
  auto p = sparse_params(3.0, 0.6, 1.0, 0.6, 1.0, 2, 100.0);
  const auto g = sample_coupled(p, 4);
  CHECK(g.adjacency.edge_count() > 0);
  CHECK(g.info->edge_count() == 0);
}

TEST_CASE("edge frequencies match the connection functions by distance") {
  const auto f_in = ConnectionFunction::radial_table({0.0, 0.5, 1.0}, {0.9, 0.5});
  const auto f_out = ConnectionFunction::radial_table({0.0, 0.5, 1.0}, {0.3, 0.1});
  ModelParams p;
  p.lambda = 4.0;
  p.n = 400.0;
  p.f_in = f_in;
  p.f_out = f_out;
  // bins: [0,0.5), [0.5,1); counts per (bin, same label)
  double pairs[2][2] = {}, g_edges[2][2] = {}, i_edges[2] = {}, all_pairs[2] = {};
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = sample_coupled(p, s);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        const double r = g.dist(i, j);
        if (r >= 1.0) continue;
        const int bin = r < 0.5 ? 0 : 1;
        const int same = g.points.labels[i] == g.points.labels[j] ? 1 : 0;
        pairs[bin][same] += 1;
        all_pairs[bin] += 1;
        if (g.has_edge(i, j)) g_edges[bin][same] += 1;
        if (g.info->contains(i, j)) i_edges[bin] += 1;
      }
  }
  const double want_in[2] = {0.9, 0.5}, want_out[2] = {0.3, 0.1};
  for (int bin = 0; bin < 2; ++bin) {
    for (int same = 0; same < 2; ++same) {
      const double q = same ? want_in[bin] : want_out[bin];
      const double se = std::sqrt(q * (1 - q) / pairs[bin][same]);
      CHECK(std::abs(g_edges[bin][same] / pairs[bin][same] - q) <= 3.0 * se);
    }
    const double q = want_in[bin] - want_out[bin];
    CHECK(std::abs(i_edges[bin] / all_pairs[bin] - q) <= 3.0 * std::sqrt(q * (1 - q) / all_pairs[bin]));
  }
}

TEST_CASE("mean degree matches the intensity measure") {
  const auto p = sparse_params(3.0, 0.8, 1.0, 0.2, 0.6, 2, 900.0);
  const double want = 0.5 * p.lambda * (radial_integral(p.f_in, 2) + radial_integral(p.f_out, 2));
  std::vector<double> deg;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto g = sample_coupled(p, s, {}, false);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = g.points.point(i);
      if (std::max(std::abs(x[0]), std::abs(x[1])) < 14.0) deg.push_back(static_cast<double>(g.adjacency.degree(i)));
    }
  }
  const auto m = testing::moments_of(deg);
  // Neighbouring degrees are correlated; allow for it with a wider band.
  CHECK(std::abs(m.mean - want) <= 3.0 * 3.0 * m.se);
  CHECK(m.mean == doctest::Approx(want).epsilon(0.03));
}

TEST_CASE("information components admit exactly two labelings") {
  testing::Gen gen(33);
  std::size_t components = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto [f_in, f_out] = gen.indicator_pair(1.2);
    ModelParams p;
    p.lambda = gen.uniform(1.0, 5.0);
    p.n = 100.0;
    p.f_in = f_in;
    p.f_out = f_out;
    const auto g = sample_coupled(p, static_cast<std::uint64_t>(trial) + 100);
    std::vector<std::int8_t> implied(g.size(), 0);
    for (std::uint32_t s = 0; s < g.size(); ++s) {
      if (implied[s] != 0) continue;
      const auto prop = testing::propagate_info(g, s, implied);
      CHECK(prop.matches_truth);
      ++components;
    }
  }
  CHECK(components > 500);
}

TEST_CASE("toroidal sampling wraps edges across the boundary") {
  const auto p = ModelParams::log_regime(3.0, 1.0, 0.0, 2, 200.0);
  const auto g = sample_coupled(p, 2);
  CHECK(g.metric.is_toroidal());
  bool wraps = false;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::uint32_t j : g.adjacency.neighbors(i)) {
      const double raw = std::abs(g.points.point(i)[0] - g.points.point(j)[0]);
      wraps = wraps || raw > 0.5 * g.window_side;
      CHECK(g.dist(i, j) <= p.f_in.support() + 1e-12);
    }
  CHECK(wraps);
  CHECK(coupling_violations(g) == 0);
}

TEST_CASE("sampling is deterministic and thread-count independent") {
  const auto p = sparse_params(4.0, 0.9, 1.0, 0.3, 1.0, 2, 300.0);
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = sample_coupled(p, 77);
  omp_set_num_threads(4);
  const auto b = sample_coupled(p, 77);
  omp_set_num_threads(before);
  CHECK(a.points.coords == b.points.coords);
  CHECK(a.points.labels == b.points.labels);
  CHECK(a.adjacency == b.adjacency);
  CHECK(*a.info == *b.info);
  const auto c = sample_coupled(p, 78);
  CHECK_FALSE(a.adjacency == c.adjacency);
}

TEST_CASE("null model") {
  const auto p = sparse_params(3.0, 1.0, 1.0, 0.0, 1.0, 2, 100.0);
  auto pts = sample_points(p, 5);
  const auto empty = sample_null(pts, ConnectionFunction::zero(), Metric::euclidean(), 10.0, 1);
  CHECK(empty.adjacency.edge_count() == 0);
  const auto full = sample_null(pts, ConnectionFunction::scaled_indicator(1.0, 1.0), Metric::euclidean(), 10.0, 1);
  for (std::size_t i = 0; i < full.size(); ++i)
    for (std::size_t j = i + 1; j < full.size(); ++j) CHECK(full.has_edge(i, j) == (full.dist(i, j) <= 1.0));

  const auto g = ConnectionFunction::scaled_indicator(0.5, 1.0);
  const auto big = sparse_params(3.0, 1.0, 1.0, 0.0, 1.0, 2, 900.0);
  std::vector<double> deg;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto h = sample_null(sample_points(big, s), g, Metric::euclidean(), 30.0, s);
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto x = h.points.point(i);
      if (std::max(std::abs(x[0]), std::abs(x[1])) < 14.0) deg.push_back(static_cast<double>(h.adjacency.degree(i)));
    }
  }
  CHECK(testing::moments_of(deg).mean == doctest::Approx(3.0 * radial_integral(g, 2)).epsilon(0.03));
}

TEST_CASE("thinning") {
  const auto p = sparse_params(3.0, 1.0, 1.0, 0.2, 1.0, 2, 200.0);
  const auto g = sample_coupled(p, 8);
  const auto same = thin(g, 1.0, 3);
  CHECK(same.adjacency == g.adjacency);
  CHECK(same.points.coords == g.points.coords);
  CHECK(thin(g, 0.0, 3).size() == 0);
  CHECK(thin(g, 0.0, 3, 5).size() == 5);

  std::vector<double> kept;
  for (std::uint64_t s = 0; s < 200; ++s) kept.push_back(static_cast<double>(thin(g, 0.3, s).size()));
  const double N = static_cast<double>(g.size());
  CHECK(std::abs(testing::moments_of(kept).mean - 0.3 * N) <= 3.0 * std::sqrt(0.3 * 0.7 * N / 200.0));

  std::vector<std::uint32_t> ids;
  const auto t = thin(g, 0.5, 11, 0, &ids);
  REQUIRE(ids.size() == t.size());
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b) CHECK(t.has_edge(a, b) == g.has_edge(ids[a], ids[b]));
  CHECK(coupling_violations(t) == 0);
}

}
