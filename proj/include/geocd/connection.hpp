#pragma once

// Radial connection functions f : [0, inf) -> [0, 1] with bounded support.

#include <string>
#include <vector>

namespace geocd {

/// One term of the representation f(r) = sum_k coeff_k * 1{r < radius_k},
/// valid for almost every r. Products of such sums integrate in closed form
/// over ball intersections.
struct BallTerm {
  double radius;
  double coeff;
};

class ConnectionFunction {
 public:
  enum class Kind { scaled_indicator, radial_table };

  /// level * 1{r <= radius}.
  static ConnectionFunction scaled_indicator(double level, double radius);

  /// Piecewise constant and right-continuous: values[k] on
  /// [breakpoints[k], breakpoints[k+1]), zero from breakpoints.back() on.
  /// breakpoints must start at 0 and increase strictly.
  static ConnectionFunction radial_table(std::vector<double> breakpoints, std::vector<double> values);

  static ConnectionFunction zero() { return scaled_indicator(0.0, 0.0); }

  double operator()(double r) const noexcept;

  Kind kind() const noexcept { return kind_; }
  /// Value is zero for every r > support().
  double support() const noexcept { return support_; }

  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Level of a scaled indicator (values().front() otherwise).
  double level() const noexcept { return values_.empty() ? 0.0 : values_.front(); }

  std::vector<BallTerm> ball_terms() const;

  std::string describe() const;

  friend bool operator==(const ConnectionFunction&, const ConnectionFunction&) = default;

 private:
  ConnectionFunction(Kind kind, std::vector<double> breaks, std::vector<double> values);

  Kind kind_;
  std::vector<double> breaks_;
  std::vector<double> values_;
  double support_ = 0.0;
};

/// Pointwise f - g as a radial table (assumes f >= g; negative parts clamp to 0).
ConnectionFunction difference(const ConnectionFunction& f, const ConnectionFunction& g);

/// Pointwise (f + g) / 2 as a radial table.
ConnectionFunction average(const ConnectionFunction& f, const ConnectionFunction& g);

/// f(r) >= g(r) at every breakpoint and every interval midpoint of the merged
/// partition, which is exact for piecewise-constant functions.
bool dominates(const ConnectionFunction& f, const ConnectionFunction& g);

/// Integral over R^d of f(||x||), summed shell by shell.
double radial_integral(const ConnectionFunction& f, int d);

}  // namespace geocd
