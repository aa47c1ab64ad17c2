#include "geocd/geom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "geocd/error.hpp"
#include "geocd/rng.hpp"

namespace geocd {

Metric Metric::toroidal(double side) {
  if (!(side > 0.0)) throw InputError("toroidal metric needs a positive side");
  return {MetricKind::toroidal, side};
}

double distance(const Metric& metric, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("distance: dimension mismatch");
  return std::sqrt(metric.distance_sq(x.data(), y.data(), static_cast<int>(x.size())));
}

CellIndex::CellIndex(std::span<const std::int64_t> c) : dim(static_cast<int>(c.size())) {
  if (c.size() > static_cast<std::size_t>(kMaxDim)) throw InputError("CellIndex: dimension too large");
  std::copy(c.begin(), c.end(), coords.begin());
}

CellIndex::CellIndex(std::initializer_list<std::int64_t> c)
    : CellIndex(std::span<const std::int64_t>(c.begin(), c.size())) {}

std::size_t CellIndexHash::operator()(const CellIndex& z) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(z.dim);
  for (int k = 0; k < z.dim; ++k) h = hash_combine(h, static_cast<std::uint64_t>(z[k]));
  return static_cast<std::size_t>(h);
}

std::int64_t cell_distance(const CellIndex& a, const CellIndex& b,
                           std::optional<std::int64_t> period) {
  std::int64_t best = 0;
  for (int k = 0; k < a.dim; ++k) {
    std::int64_t diff = a[k] > b[k] ? a[k] - b[k] : b[k] - a[k];
    if (period) diff = std::min(diff % *period, *period - diff % *period);
    best = std::max(best, diff);
  }
  return best;
}

namespace {

double dth_root(int d) { return std::pow(static_cast<double>(d), 1.0 / d); }

}  // namespace

GridSpec::GridSpec(double R, int d) : R_(R), d_(d) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InputError("GridSpec: R must be positive");
  if (d < 1 || d > kMaxDim) throw InputError("GridSpec: unsupported dimension");
}

GridSpec GridSpec::periodic(double nominal_R, int d, double torus_side) {
  GridSpec g(nominal_R, d);
  if (!(torus_side > 0.0)) throw InputError("GridSpec: torus side must be positive");
  const double nominal_side = g.cell_side();
  const auto cells = static_cast<std::int64_t>(std::ceil(torus_side / nominal_side - 1e-9));
  g.period_ = std::max<std::int64_t>(cells, 1);
  g.R_ = torus_side / static_cast<double>(*g.period_) * 4.0 * dth_root(d);
  return g;
}

double GridSpec::cell_side() const noexcept { return R_ / (4.0 * dth_root(d_)); }

double GridSpec::cell_volume() const noexcept { return std::pow(cell_side(), d_); }

CellIndex GridSpec::canonical(CellIndex z) const noexcept {
  if (!period_) return z;
  const std::int64_t P = *period_;
  const std::int64_t lo = -(P / 2);
  for (int k = 0; k < z.dim; ++k) z[k] = ((z[k] - lo) % P + P) % P + lo;
  return z;
}

CellIndex cell_of(const GridSpec& grid, std::span<const double> x) {
  if (static_cast<int>(x.size()) != grid.dim()) throw InputError("cell_of: dimension mismatch");
  const double s = grid.cell_side();
  CellIndex z;
  z.dim = grid.dim();
  // ceil(t - 1/2) rounds to nearest and breaks exact ties downward.
  for (int k = 0; k < z.dim; ++k)
    z[k] = static_cast<std::int64_t>(std::ceil(x[static_cast<std::size_t>(k)] / s - 0.5));
  return grid.canonical(z);
}

std::vector<double> cell_center(const GridSpec& grid, const CellIndex& z) {
  std::vector<double> c(static_cast<std::size_t>(z.dim));
  for (int k = 0; k < z.dim; ++k) c[static_cast<std::size_t>(k)] = static_cast<double>(z[k]) * grid.cell_side();
  return c;
}

namespace {

template <typename Canon>
std::vector<CellIndex> thicken(std::span<const CellIndex> cells, int k, Canon canon) {
  if (k < 0) throw InputError("thickening: k must be non-negative");
  std::vector<CellIndex> out;
  if (cells.empty()) return out;
  const int d = cells.front().dim;
  const std::int64_t width = 2 * k + 1;
  std::int64_t combos = 1;
  for (int i = 0; i < d; ++i) combos *= width;
  out.reserve(cells.size() * static_cast<std::size_t>(combos));
  for (const auto& z : cells) {
    for (std::int64_t c = 0; c < combos; ++c) {
      CellIndex w = z;
      std::int64_t rest = c;
      for (int i = 0; i < d; ++i) {
        w[i] += rest % width - k;
        rest /= width;
      }
      out.push_back(canon(w));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<CellIndex> thickening(std::span<const CellIndex> cells, int k) {
  return thicken(cells, k, [](const CellIndex& z) { return z; });
}

std::vector<CellIndex> thickening(const GridSpec& grid, std::span<const CellIndex> cells, int k) {
  return thicken(cells, k, [&](const CellIndex& z) { return grid.canonical(z); });
}

double unit_ball_volume(int d) {
  if (d < 1) throw InputError("unit_ball_volume: dimension must be >= 1");
  const double h = 0.5 * d;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

namespace {

double intersection_monte_carlo(int d, double r1, double r2, double dist) {
  // Sample the bounding box of the smaller ball; it contains the intersection.
  if (r2 < r1) std::swap(r1, r2);
  CounterRng rng(derive_seed(stream_seed(0, Stream::monte_carlo), static_cast<std::uint64_t>(d),
                             std::bit_cast<std::uint64_t>(r1), std::bit_cast<std::uint64_t>(r2),
                             std::bit_cast<std::uint64_t>(dist)));
  std::array<double, kMaxDim> p{};
  std::size_t hits = 0;
  const double r1sq = r1 * r1, r2sq = r2 * r2;
  for (std::size_t s = 0; s < kLensMonteCarloSamples; ++s) {
    double n1 = 0.0, n2 = 0.0;
    for (int k = 0; k < d; ++k) {
      p[static_cast<std::size_t>(k)] = rng.uniform(-r1, r1);
      n1 += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
      const double q = k == 0 ? p[0] - dist : p[static_cast<std::size_t>(k)];
      n2 += q * q;
    }
    if (n1 <= r1sq && n2 <= r2sq) ++hits;
  }
  return std::pow(2.0 * r1, d) * static_cast<double>(hits) / static_cast<double>(kLensMonteCarloSamples);
}

}  // namespace

double ball_intersection_volume(int d, double r1, double r2, double dist) {
  if (r1 < 0.0 || r2 < 0.0 || dist < 0.0) throw InputError("ball_intersection_volume: negative input");
  if (r1 == 0.0 || r2 == 0.0) return 0.0;
  if (dist >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (dist <= std::abs(r1 - r2)) return ball_volume(d, rmin);

  switch (d) {
    case 1:
      return r1 + r2 - dist;
    case 2: {
      const double a1 = std::acos(std::clamp((dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist * r1), -1.0, 1.0));
      const double a2 = std::acos(std::clamp((dist * dist + r2 * r2 - r1 * r1) / (2.0 * dist * r2), -1.0, 1.0));
      const double k = (-dist + r1 + r2) * (dist + r1 - r2) * (dist - r1 + r2) * (dist + r1 + r2);
      return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
    }
    case 3: {
      const double t = r1 + r2 - dist;
      return std::numbers::pi * t * t *
             (dist * dist + 2.0 * dist * r2 - 3.0 * r2 * r2 + 2.0 * dist * r1 + 6.0 * r1 * r2 - 3.0 * r1 * r1) /
             (12.0 * dist);
    }
    default:
      return intersection_monte_carlo(d, r1, r2, dist);
  }
}

}  // namespace geocd
