#include "geocd/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "geocd/error.hpp"

namespace geocd {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_edges(std::ostream& os, char tag, const Adjacency& a) {
  for (std::size_t i = 0; i < a.node_count(); ++i)
    for (std::uint32_t j : a.neighbors(i))
      if (j > i) os << tag << ' ' << i << ' ' << j << '\n';
}

std::string header_value(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw CorruptInputError("graph header: expected " + key + "=");
  return token.substr(key.size() + 1);
}

}  // namespace

void write_graph(std::ostream& os, const SpatialGraph& g) {
  os << "geograph v1 d=" << g.dim() << " n=" << fmt(g.window_volume())
     << " metric=" << (g.metric.is_toroidal() ? "toroidal" : "euclidean") << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << "N " << i;
    for (double x : g.points.point(i)) os << ' ' << fmt(x);
    os << ' ' << static_cast<int>(g.points.labels[i]) << '\n';
  }
  write_edges(os, 'E', g.adjacency);
  if (g.info) write_edges(os, 'I', *g.info);
}

void write_graph_file(const std::string& path, const SpatialGraph& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_graph(os, g);
  if (!os) throw IoError("write failed: " + path);
}

SpatialGraph read_graph(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw CorruptInputError("empty graph file");
  std::istringstream hs(line);
  std::string magic, version, dtok, ntok, mtok;
  if (!(hs >> magic >> version >> dtok >> ntok >> mtok) || magic != "geograph" || version != "v1")
    throw CorruptInputError("bad graph header");
  SpatialGraph g;
  int d = 0;
  double n = 0.0;
  try {
    d = std::stoi(header_value(dtok, "d"));
    n = std::stod(header_value(ntok, "n"));
  } catch (const std::logic_error&) {
    throw CorruptInputError("bad graph header numbers");
  }
  if (d < 1 || d > kMaxDim || !(n > 0.0)) throw CorruptInputError("graph header out of range");
  g.points.d = d;
  g.window_side = std::pow(n, 1.0 / d);
  const std::string metric = header_value(mtok, "metric");
  if (metric == "toroidal")
    g.metric = Metric::toroidal(g.window_side);
  else if (metric == "euclidean")
    g.metric = Metric::euclidean();
  else
    throw CorruptInputError("unknown metric " + metric);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges, info;
  bool has_info = false;
  std::vector<double> x(static_cast<std::size_t>(d));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    char tag = 0;
    ls >> tag;
    auto fail = [&](const char* what) {
      return CorruptInputError("line " + std::to_string(lineno) + ": " + what);
    };
    if (tag == 'N') {
      std::size_t id = 0;
      int label = 0;
      if (!(ls >> id)) throw fail("bad node id");
      if (id != g.size()) throw fail("node ids must be consecutive from 0");
      for (auto& v : x)
        if (!(ls >> v)) throw fail("bad coordinate");
      if (!(ls >> label) || (label != 1 && label != -1)) throw fail("bad label");
      g.points.push_back(x, label);
    } else if (tag == 'E' || tag == 'I') {
      std::uint32_t i = 0, j = 0;
      if (!(ls >> i >> j) || i == j) throw fail("bad edge");
      (tag == 'E' ? edges : info).emplace_back(i, j);
      if (tag == 'I') has_info = true;
    } else {
      throw fail("unknown record");
    }
    std::string extra;
    if (ls >> extra) throw fail("trailing data");
  }
  auto build = [&](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& es) {
    std::vector<std::vector<std::uint32_t>> lists(g.size());
    for (auto [i, j] : es) {
      if (i >= g.size() || j >= g.size()) throw CorruptInputError("edge references unknown node");
      lists[i].push_back(j);
      lists[j].push_back(i);
    }
    for (auto& l : lists) {
      std::sort(l.begin(), l.end());
      if (std::adjacent_find(l.begin(), l.end()) != l.end()) throw CorruptInputError("duplicate edge");
    }
    return Adjacency::from_lists(std::move(lists));
  };
  g.adjacency = build(edges);
  if (has_info) g.info = build(info);
  return g;
}

SpatialGraph read_graph_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_graph(is);
}

}  // namespace geocd
