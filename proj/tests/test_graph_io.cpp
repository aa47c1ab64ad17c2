#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "geocd/error.hpp"
#include "geocd/graph_io.hpp"
#include "support.hpp"

using namespace geocd;

namespace {

SpatialGraph round_trip(const SpatialGraph& g) {
  std::stringstream ss;
  write_graph(ss, g);
  return read_graph(ss);
}

void expect_same(const SpatialGraph& a, const SpatialGraph& b) {
  CHECK(a.dim() == b.dim());
  CHECK(a.points.coords == b.points.coords);
  CHECK(a.points.labels == b.points.labels);
  CHECK(a.adjacency == b.adjacency);
  CHECK(a.metric.kind == b.metric.kind);
  CHECK(a.window_side == doctest::Approx(b.window_side).epsilon(1e-14));
  CHECK(a.info.has_value() == b.info.has_value());
  if (a.info && b.info) CHECK(*a.info == *b.info);
}

SpatialGraph parse(const std::string& text) {
  std::istringstream is(text);
  return read_graph(is);
}

}  // namespace

TEST_SUITE("graph_io") {

TEST_CASE("round trip preserves every field bit for bit") {
  testing::Gen gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto [f_in, f_out] = gen.indicator_pair(1.5);
    ModelParams p;
    p.lambda = gen.uniform(1.0, 4.0);
    p.d = gen.integer(1, 3);
    p.n = std::pow(6.0, p.d);
    p.f_in = f_in;
    p.f_out = f_out;
    const auto g = sample_coupled(p, static_cast<std::uint64_t>(trial), {}, gen.coin());
    if (g.info && g.info->edge_count() == 0) continue;
    expect_same(g, round_trip(g));
  }
  const auto t = sample_coupled(ModelParams::log_regime(2.0, 0.9, 0.1, 2, 100.0), 3);
  expect_same(t, round_trip(t));
}

TEST_CASE("writing is deterministic with sorted records") {
  const auto g = testing::fixture(2, {{0, 0}, {1, 0}, {0, 1}}, {1, -1, 1}, {{2, 0}, {1, 2}});
  std::ostringstream a, b;
  write_graph(a, g);
  write_graph(b, g);
  CHECK(a.str() == b.str());
  CHECK(a.str() == "geograph v1 d=2 n=10000 metric=euclidean\nN 0 0 0 1\nN 1 1 0 -1\nN 2 0 1 1\nE 0 2\nE 1 2\n");
}

TEST_CASE("corrupt input is rejected") {
  const std::string head = "geograph v1 d=2 n=100 metric=euclidean\n";
  CHECK_THROWS_AS(parse(""), CorruptInputError);
  CHECK_THROWS_AS(parse("geograph v2 d=2 n=100 metric=euclidean\n"), CorruptInputError);
  CHECK_THROWS_AS(parse("geograph v1 d=x n=100 metric=euclidean\n"), CorruptInputError);
  CHECK_THROWS_AS(parse("geograph v1 d=2 n=100 metric=hyperbolic\n"), CorruptInputError);
  CHECK_THROWS_AS(parse("geograph v1 d=0 n=100 metric=euclidean\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 1 0 0 1\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 0 0 1\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 0 0 0 2\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 0 0 0 1 7\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 0 0 0 1\nE 0 1\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 0 0 0 1\nE 0 0\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "N 0 0 0 1\nN 1 0 0 1\nE 0 1\nE 1 0\n"), CorruptInputError);
  CHECK_THROWS_AS(parse(head + "X 0 1\n"), CorruptInputError);
  CHECK_NOTHROW(parse(head + "N 0 0 0 1\nN 1 0.5 0 -1\nE 0 1\nI 0 1\n"));
}

TEST_CASE("file errors map to IoError") {
  CHECK_THROWS_AS(read_graph_file("/nonexistent/dir/graph.txt"), IoError);
  const auto g = testing::fixture(1, {{0}}, {1}, {});
  CHECK_THROWS_AS(write_graph_file("/nonexistent/dir/graph.txt", g), IoError);
  const auto path = (std::filesystem::temp_directory_path() / "geocd_io_test.txt").string();
  write_graph_file(path, g);
  expect_same(g, read_graph_file(path));
  std::remove(path.c_str());
}

}
