#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geocd/connection.hpp"
#include "geocd/error.hpp"
#include "geocd/geom.hpp"
#include "support.hpp"

using namespace geocd;

namespace {

double from_terms(const std::vector<BallTerm>& terms, double r) {
  double s = 0.0;
  for (const auto& t : terms)
    if (r < t.radius) s += t.coeff;
  return s;
}

// Midpoint rule in the radial variable: ∫ f(|x|) dx = d ν_d ∫ r^{d-1} f(r) dr.
double radial_quadrature(const ConnectionFunction& f, int d) {
  const int steps = 200000;
  const double top = f.support() * 1.01 + 1e-9;
  const double h = top / steps;
  double s = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double r = (k + 0.5) * h;
    s += std::pow(r, d - 1) * f(r);
  }
  return d * unit_ball_volume(d) * s * h;
}

}  // namespace

TEST_SUITE("connection") {

TEST_CASE("scaled indicator") {
  const auto f = ConnectionFunction::scaled_indicator(0.7, 1.5);
  CHECK(f(0.0) == 0.7);
  CHECK(f(1.5) == 0.7);
  CHECK(f(1.5000001) == 0.0);
  CHECK(f.support() == 1.5);
  CHECK(f.level() == 0.7);
  CHECK(ConnectionFunction::zero()(0.0) == 0.0);
  CHECK_THROWS_AS(ConnectionFunction::scaled_indicator(1.2, 1.0), InputError);
  CHECK_THROWS_AS(ConnectionFunction::scaled_indicator(0.5, -1.0), InputError);
}

TEST_CASE("radial table is right-continuous with bounded support") {
  const auto f = ConnectionFunction::radial_table({0.0, 0.5, 1.0}, {0.9, 0.4});
  CHECK(f(0.25) == 0.9);
  CHECK(f(0.5) == 0.4);
  CHECK(f(0.99) == 0.4);
  CHECK(f(1.0) == 0.0);
  CHECK(f(7.0) == 0.0);
  CHECK(f.support() == 1.0);
  CHECK_THROWS_AS(ConnectionFunction::radial_table({0.0, 0.5}, {0.9, 0.4}), InputError);
  CHECK_THROWS_AS(ConnectionFunction::radial_table({0.1, 0.5}, {0.9}), InputError);
  CHECK_THROWS_AS(ConnectionFunction::radial_table({0.0, 0.5, 0.5}, {0.9, 0.4}), InputError);
  CHECK_THROWS_AS(ConnectionFunction::radial_table({0.0, 0.5}, {-0.1}), InputError);
}

TEST_CASE("ball terms reproduce the function") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = gen.coin() ? gen.radial(gen.integer(1, 5), 2.0) : ConnectionFunction::scaled_indicator(gen.uniform(0, 1), gen.uniform(0.1, 2));
    const auto terms = f.ball_terms();
    for (int k = 0; k < 50; ++k) {
      const double r = gen.uniform(0.0, 2.5);
      bool at_break = false;
      for (double b : f.breakpoints()) at_break = at_break || std::abs(r - b) < 1e-12;
      if (!at_break) CHECK(from_terms(terms, r) == doctest::Approx(f(r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("difference, average and dominance are pointwise") {
  testing::Gen gen(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [f, g] = gen.ordered_pair(gen.integer(1, 4), 2.0);
    REQUIRE(dominates(f, g));
    const auto diff = difference(f, g);
    const auto avg = average(f, g);
    for (int k = 0; k < 50; ++k) {
      const double r = gen.uniform(0.0, 2.5);
      CHECK(diff(r) == doctest::Approx(f(r) - g(r)).epsilon(1e-12));
      CHECK(avg(r) == doctest::Approx(0.5 * (f(r) + g(r))).epsilon(1e-12));
    }
    if (g.support() > 0.0 && f(0.0) > g(0.0)) CHECK_FALSE(dominates(g, f));
  }
  const auto a = ConnectionFunction::scaled_indicator(1.0, 1.0);
  const auto b = ConnectionFunction::scaled_indicator(0.5, 2.0);
  CHECK_FALSE(dominates(a, b));
  CHECK_FALSE(dominates(b, a));
}

TEST_CASE("radial integral") {
  CHECK(radial_integral(ConnectionFunction::scaled_indicator(1.0, 1.0), 2) == doctest::Approx(std::numbers::pi));
  CHECK(radial_integral(ConnectionFunction::scaled_indicator(0.5, 2.0), 3) ==
        doctest::Approx(0.5 * 4.0 / 3.0 * std::numbers::pi * 8.0));
  CHECK(radial_integral(ConnectionFunction::zero(), 2) == 0.0);
  testing::Gen gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = gen.radial(gen.integer(1, 4), 2.0);
    const int d = gen.integer(1, 3);
    CHECK(radial_integral(f, d) == doctest::Approx(radial_quadrature(f, d)).epsilon(1e-4));
  }
}

}
