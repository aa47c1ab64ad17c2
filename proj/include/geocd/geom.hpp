#pragma once

// Metrics, the Z^d tessellation used by GBG, and ball/lens volumes.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace geocd {

inline constexpr int kMaxDim = 8;

enum class MetricKind { euclidean, toroidal };

/// Euclidean metric, or the flat torus of edge length `side` whose
/// fundamental domain is [-side/2, side/2]^d.
struct Metric {
  MetricKind kind = MetricKind::euclidean;
  double side = 0.0;

  static Metric euclidean() { return {MetricKind::euclidean, 0.0}; }
  static Metric toroidal(double side);

  bool is_toroidal() const noexcept { return kind == MetricKind::toroidal; }

  /// Per-coordinate displacement after wraparound.
  double delta(double a, double b) const noexcept {
    double dx = a > b ? a - b : b - a;
    if (kind == MetricKind::toroidal && dx > 0.5 * side) dx = side - dx;
    return dx;
  }

  /// Squared distance without dimension checks; the hot-loop variant.
  double distance_sq(const double* x, const double* y, int d) const noexcept {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = delta(x[k], y[k]);
      s += dx * dx;
    }
    return s;
  }
};

/// Throws InputError on dimension mismatch.
double distance(const Metric& metric, std::span<const double> x, std::span<const double> y);

/// Integer coordinates of a tessellation cell.
struct CellIndex {
  int dim = 0;
  std::array<std::int64_t, kMaxDim> coords{};

  CellIndex() = default;
  explicit CellIndex(std::span<const std::int64_t> c);
  CellIndex(std::initializer_list<std::int64_t> c);

  std::int64_t operator[](int k) const noexcept { return coords[static_cast<std::size_t>(k)]; }
  std::int64_t& operator[](int k) noexcept { return coords[static_cast<std::size_t>(k)]; }

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  /// Lexicographic.
  friend std::strong_ordering operator<=>(const CellIndex& a, const CellIndex& b) {
    if (auto c = a.dim <=> b.dim; c != 0) return c;
    for (int k = 0; k < a.dim; ++k)
      if (auto c = a[k] <=> b[k]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

struct CellIndexHash {
  std::size_t operator()(const CellIndex& z) const noexcept;
};

/// Sup-norm distance between two cells (wrapping when `period` is set).
std::int64_t cell_distance(const CellIndex& a, const CellIndex& b,
                           std::optional<std::int64_t> period = std::nullopt);

/// Z^d tessellation with cubes of side R / (4 d^{1/d}) centred at z * side.
///
/// On a torus the grid is periodic: the cell count per axis is rounded up so
/// that cells tile the torus exactly, which lowers the effective R slightly.
/// `R()` always reports the effective scale, so cell_side()*4*d^{1/d} == R().
class GridSpec {
 public:
  GridSpec(double R, int d);

  /// Periodic grid on a torus of edge `torus_side`, scale at most `nominal_R`.
  static GridSpec periodic(double nominal_R, int d, double torus_side);

  double R() const noexcept { return R_; }
  int dim() const noexcept { return d_; }
  double cell_side() const noexcept;
  /// Cell volume cell_side()^d.
  double cell_volume() const noexcept;
  std::optional<std::int64_t> period() const noexcept { return period_; }

  /// Maps an index into the canonical range when the grid is periodic.
  CellIndex canonical(CellIndex z) const noexcept;

 private:
  double R_;
  int d_;
  std::optional<std::int64_t> period_;
};

/// Cell whose centre is nearest x in sup-norm; ties go to the
/// lexicographically smallest index.
CellIndex cell_of(const GridSpec& grid, std::span<const double> x);

std::vector<double> cell_center(const GridSpec& grid, const CellIndex& z);

/// All cells within sup-norm distance k of some input cell. Sorted, unique.
std::vector<CellIndex> thickening(std::span<const CellIndex> cells, int k);

/// Thickening on the grid's own topology (wraps when periodic).
std::vector<CellIndex> thickening(const GridSpec& grid, std::span<const CellIndex> cells, int k);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

inline double ball_volume(int d, double r) {
  double v = unit_ball_volume(d);
  for (int k = 0; k < d; ++k) v *= r;
  return v;
}

/// |B(x, r1) ∩ B(y, r2)| with ||x - y|| = dist. Closed form for d <= 3,
/// seeded Monte Carlo (1e5 samples) above.
double ball_intersection_volume(int d, double r1, double r2, double dist);

/// Volume of the lens S_R(x, y) = B(x, R) ∩ B(y, R).
inline double lens_volume(int d, double R, double dist) {
  return ball_intersection_volume(d, R, R, dist);
}

inline constexpr std::size_t kLensMonteCarloSamples = 100000;

}  // namespace geocd
