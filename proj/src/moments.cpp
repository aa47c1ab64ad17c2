#include "geocd/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "geocd/error.hpp"
#include "geocd/geom.hpp"
#include "geocd/rng.hpp"

namespace geocd {

namespace {

// ∫_{B(x,R) ∩ B(y,R)} f(|z-x|) g(|z-y|) dz via the ball-term expansion.
double lens_product(const ConnectionFunction& f, const ConnectionFunction& g, int d, double R, double dist) {
  double total = 0.0;
  for (const auto& s : f.ball_terms())
    for (const auto& t : g.ball_terms())
      total += s.coeff * t.coeff * ball_intersection_volume(d, std::min(s.radius, R), std::min(t.radius, R), dist);
  return total;
}

}  // namespace

MomentPair eval_m(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d, double R, double dist) {
  if (!(R > 0.0) || !(dist >= 0.0)) throw InputError("eval_m: need R > 0 and dist >= 0");
  if (dist >= 2.0 * R) return {};
  const double in = lens_product(f_in, f_in, d, R, dist) + lens_product(f_out, f_out, d, R, dist);
  const double out = 2.0 * lens_product(f_in, f_out, d, R, dist);
  return {std::max(in, 0.0), std::max(out, 0.0)};
}

NeighborMeans common_neighbor_means(const ModelParams& params, double R, double dist) {
  const auto m = eval_m(params.f_in, params.f_out, params.d, R, dist);
  return {0.5 * params.lambda * m.m_in, 0.5 * params.lambda * m.m_out};
}

double pairwise_threshold(const ModelParams& params, double R, double dist) {
  const auto m = eval_m(params.f_in, params.f_out, params.d, R, dist);
  return 0.25 * params.lambda * (m.m_in + m.m_out);
}

double lambda_lower(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d) {
  const double gap = radial_integral(difference(f_in, f_out), d);
  return gap > 0.0 ? 1.0 / gap : kInfinity;
}

double ch_divergence(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw InputError("ch_divergence: length mismatch");
  for (std::size_t k = 0; k < mu.size(); ++k)
    if (!(mu[k] >= 0.0) || !(nu[k] >= 0.0)) throw InputError("ch_divergence: entries must be >= 0");
  auto F = [&](double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k)
      s += t * mu[k] + (1.0 - t) * nu[k] - std::pow(mu[k], t) * std::pow(nu[k], 1.0 - t);
    return s;
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = 1.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = F(x1), f2 = F(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = F(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = F(x1);
    }
  }
  return std::max({F(0.5 * (lo + hi)), F(0.0), F(1.0), 0.0});
}

double ch_bracket(double a, double b) {
  if (!(0.0 <= b && b <= a && a <= 1.0)) throw InputError("need 0 <= b <= a <= 1");
  return 1.0 - std::sqrt(a * b) - std::sqrt((1.0 - a) * (1.0 - b));
}

double exact_recovery_threshold(double lambda, double a, double b, int d) {
  return lambda * unit_ball_volume(d) * ch_bracket(a, b);
}

double peierls_lhs(double q, int M) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("peierls_lhs: q must lie in [0,1]");
  if (M < 1) throw InputError("peierls_lhs: M must be >= 1");
  if (q == 0.0) return 0.0;
  const double x = 3.0 * std::pow(q, 1.0 / M);
  if (x >= 1.0) return kInfinity;
  const double m = static_cast<double>(M);
  return std::pow(x, m) * (m - (m - 1.0) * x) / (3.0 * (1.0 - x) * (1.0 - x));
}

int peierls_range(int d) { return static_cast<int>(std::ceil(12.0 * std::pow(static_cast<double>(d), 1.0 / d))); }

double chernoff_h(double t) { return (1.0 + t) * std::log1p(t) - t; }

double chernoff_constant(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d, double R) {
  constexpr int kGrid = 64;
  double best = kInfinity;
  for (int k = 0; k < kGrid; ++k) {
    const double dist = 0.75 * R * k / (kGrid - 1);
    const auto m = eval_m(f_in, f_out, d, R, dist);
    double v = 0.0;
    if (m.m_in > 0.0) v = (m.m_out > 0.0 ? m.m_out : m.m_in) * chernoff_h((m.m_in - m.m_out) / (2.0 * m.m_in));
    best = std::min(best, v);
  }
  return best;
}

double t_bad_bound(double lambda, int d, double R, double epsilon, double c) {
  const double side = R / (4.0 * std::pow(static_cast<double>(d), 1.0 / d));
  return std::exp(-lambda * std::pow(side, d) * chernoff_h(epsilon)) +
         lambda * lambda * std::pow(0.75 * R, d) / d * std::exp(-c * lambda);
}

namespace {

void check_eps_eta(double epsilon, double eta) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ValidationError("epsilon", "must lie in (0, 1/2)");
  if (!(eta > 0.0 && eta < 0.5)) throw ValidationError("eta", "must lie in (0, 1/2)");
}

}  // namespace

double lambda_upper_bound(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d, double epsilon,
                          double eta, double R, UpperBoundOptions opts) {
  check_eps_eta(epsilon, eta);
  if (R <= 0.0) R = f_in.support();
  if (!(R > 0.0)) return kInfinity;
  const double c = chernoff_constant(f_in, f_out, d, R);
  const int M = peierls_range(d);
  const double target = 0.5 - eta;
  for (double lambda = opts.start; lambda <= opts.cap; lambda *= opts.factor) {
    const double q = std::min(t_bad_bound(lambda, d, R, epsilon, c), 1.0);
    if (peierls_lhs(q, M) <= target) return lambda;
  }
  return kInfinity;
}

ThresholdReport threshold_report(const ConnectionFunction& f_in, const ConnectionFunction& f_out, int d,
                                 double epsilon, double eta, double R) {
  check_eps_eta(epsilon, eta);
  if (R <= 0.0) R = f_in.support();
  ThresholdReport r;
  r.lambda_lower = lambda_lower(f_in, f_out, d);
  if (!(R > 0.0)) return r;
  r.chernoff_c = chernoff_constant(f_in, f_out, d, R);
  r.lambda_upper = lambda_upper_bound(f_in, f_out, d, epsilon, eta, R);
  if (std::isfinite(r.lambda_upper))
    r.peierls_lhs_at_upper =
        peierls_lhs(std::min(t_bad_bound(r.lambda_upper, d, R, epsilon, r.chernoff_c), 1.0), peierls_range(d));
  return r;
}

namespace {

void uniform_in_ball(CounterRng& rng, int d, double r, double* out) {
  for (;;) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      out[k] = rng.uniform(-r, r);
      s += out[k] * out[k];
    }
    if (s <= r * r) return;
  }
}

}  // namespace

TriangleDeltas triangle_deltas(const ConnectionFunction& f_in, const ConnectionFunction& f_out, double lambda, int d,
                               const HSpec& h, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("triangle_deltas: need at least one sample");
  if (d < 1 || d > kMaxDim) throw InputError("triangle_deltas: unsupported dimension");
  constexpr std::size_t kChunks = 64;
  struct Acc {
    double g = 0, g2 = 0, h = 0, h2 = 0;
  };
  std::array<Acc, kChunks> acc{};
  const std::uint64_t base = stream_seed(seed, Stream::monte_carlo);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < kChunks; ++c) {
    const std::size_t count = samples / kChunks + (c < samples % kChunks ? 1 : 0);
    CounterRng rng(derive_seed(base, 0x747269ULL, c));
    std::array<double, kMaxDim> x{}, y{};
    Acc a;
    for (std::size_t s = 0; s < count; ++s) {
      uniform_in_ball(rng, d, h.r_x, x.data());
      uniform_in_ball(rng, d, h.r_y, y.data());
      double nx = 0, ny = 0, nxy = 0;
      for (int k = 0; k < d; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        nx += x[kk] * x[kk];
        ny += y[kk] * y[kk];
        nxy += (x[kk] - y[kk]) * (x[kk] - y[kk]);
      }
      nx = std::sqrt(nx);
      ny = std::sqrt(ny);
      nxy = std::sqrt(nxy);
      if (!h.accepts(f_in, f_out, nx, ny, nxy)) continue;
      const double p1 = f_in(nx), q1 = f_out(nx), p2 = f_in(ny), q2 = f_out(ny), p3 = f_in(nxy), q3 = f_out(nxy);
      const double wh = 0.125 * (p1 + q1) * (p2 + q2) * (p3 + q3);
      const double wg = wh + 0.125 * (p1 - q1) * (p2 - q2) * (p3 - q3);
      a.g += wg;
      a.g2 += wg * wg;
      a.h += wh;
      a.h2 += wh * wh;
    }
    acc[c] = a;
  }
  Acc tot;
  for (const auto& a : acc) {
    tot.g += a.g;
    tot.g2 += a.g2;
    tot.h += a.h;
    tot.h2 += a.h2;
  }
  const double N = static_cast<double>(samples);
  const double scale = lambda * lambda * ball_volume(d, h.r_x) * ball_volume(d, h.r_y);
  auto se = [&](double s, double s2) {
    const double mean = s / N;
    const double var = std::max(s2 / N - mean * mean, 0.0);
    return scale * std::sqrt(var / N);
  };
  return {scale * tot.g / N, scale * tot.h / N, se(tot.g, tot.g2), se(tot.h, tot.h2)};
}

}  // namespace geocd
