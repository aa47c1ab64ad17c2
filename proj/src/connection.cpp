#include "geocd/connection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geocd/error.hpp"
#include "geocd/geom.hpp"

namespace geocd {

ConnectionFunction::ConnectionFunction(Kind kind, std::vector<double> breaks, std::vector<double> values)
    : kind_(kind), breaks_(std::move(breaks)), values_(std::move(values)) {
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("connection function values must lie in [0,1]");
  if (kind_ == Kind::scaled_indicator) {
    support_ = (values_.front() > 0.0) ? breaks_.back() : 0.0;
    return;
  }
  while (!values_.empty() && values_.back() == 0.0) {
    values_.pop_back();
    breaks_.pop_back();
  }
  support_ = values_.empty() ? 0.0 : breaks_.back();
}

ConnectionFunction ConnectionFunction::scaled_indicator(double level, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InputError("scaled_indicator: radius must be finite and >= 0");
  return ConnectionFunction(Kind::scaled_indicator, {0.0, radius}, {level});
}

ConnectionFunction ConnectionFunction::radial_table(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size() + 1) throw InputError("radial_table: need one more breakpoint than values");
  if (breakpoints.front() != 0.0) throw InputError("radial_table: first breakpoint must be 0");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1]) || !std::isfinite(breakpoints[k]))
      throw InputError("radial_table: breakpoints must increase strictly");
  return ConnectionFunction(Kind::radial_table, std::move(breakpoints), std::move(values));
}

double ConnectionFunction::operator()(double r) const noexcept {
  if (kind_ == Kind::scaled_indicator) return r <= breaks_.back() ? values_.front() : 0.0;
  if (values_.empty() || r >= breaks_.back() || r < 0.0) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  return values_[static_cast<std::size_t>(it - breaks_.begin() - 1)];
}

std::vector<BallTerm> ConnectionFunction::ball_terms() const {
  std::vector<BallTerm> terms;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double next = k + 1 < values_.size() ? values_[k + 1] : 0.0;
    const double coeff = values_[k] - next;
    if (coeff != 0.0 && breaks_[k + 1] > 0.0) terms.push_back({breaks_[k + 1], coeff});
  }
  return terms;
}

std::string ConnectionFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::scaled_indicator) {
    os << "indicator(level=" << values_.front() << ",radius=" << breaks_.back() << ")";
    return os.str();
  }
  os << "table(";
  for (std::size_t k = 0; k < values_.size(); ++k)
    os << (k ? ";" : "") << "[" << breaks_[k] << "," << breaks_[k + 1] << "):" << values_[k];
  os << ")";
  return os.str();
}

namespace {

std::vector<double> merged_breaks(const ConnectionFunction& f, const ConnectionFunction& g) {
  std::vector<double> b = f.breakpoints();
  b.insert(b.end(), g.breakpoints().begin(), g.breakpoints().end());
  b.push_back(0.0);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

template <typename Op>
ConnectionFunction combine(const ConnectionFunction& f, const ConnectionFunction& g, Op op) {
  auto b = merged_breaks(f, g);
  if (b.size() < 2) return ConnectionFunction::zero();
  std::vector<double> v;
  v.reserve(b.size() - 1);
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double mid = 0.5 * (b[k] + b[k + 1]);
    v.push_back(std::clamp(op(f(mid), g(mid)), 0.0, 1.0));
  }
  return ConnectionFunction::radial_table(std::move(b), std::move(v));
}

}  // namespace

ConnectionFunction difference(const ConnectionFunction& f, const ConnectionFunction& g) {
  return combine(f, g, [](double x, double y) { return x - y; });
}

ConnectionFunction average(const ConnectionFunction& f, const ConnectionFunction& g) {
  return combine(f, g, [](double x, double y) { return 0.5 * (x + y); });
}

bool dominates(const ConnectionFunction& f, const ConnectionFunction& g) {
  const auto b = merged_breaks(f, g);
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (f(b[k]) < g(b[k])) return false;
    if (k + 1 < b.size()) {
      const double mid = 0.5 * (b[k] + b[k + 1]);
      if (f(mid) < g(mid)) return false;
    }
  }
  const double beyond = b.back() + 1.0;
  return f(beyond) >= g(beyond);
}

double radial_integral(const ConnectionFunction& f, int d) {
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    total += v[k] * (ball_volume(d, b[k + 1]) - ball_volume(d, b[k]));
  return total;
}

}  // namespace geocd
