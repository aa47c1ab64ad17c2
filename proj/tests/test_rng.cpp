#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "geocd/error.hpp"
#include "geocd/rng.hpp"

using namespace geocd;

TEST_SUITE("rng") {

TEST_CASE("edge_uniform is symmetric and in range") {
  for (std::uint64_t s : {0ULL, 1ULL, 0xdeadbeefULL}) {
    CHECK(edge_uniform(s, 3, 7) == edge_uniform(s, 7, 3));
    for (std::uint64_t i = 0; i < 50; ++i)
      for (std::uint64_t j = i + 1; j < 50; ++j) {
        const double u = edge_uniform(s, i, j);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
      }
  }
}

TEST_CASE("edge_uniform rejects self pairs") { CHECK_THROWS_AS(edge_uniform(1, 4, 4), InputError); }

TEST_CASE("edge_uniform passes Kolmogorov-Smirnov on a million pairs") {
  std::vector<double> u;
  u.reserve(1'000'000);
  for (std::uint64_t i = 0; i < 1000; ++i)
    for (std::uint64_t j = 1000; j < 2000; ++j) u.push_back(edge_uniform(42, i, j));
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double dmax = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double lo = static_cast<double>(k) / n;
    const double hi = static_cast<double>(k + 1) / n;
    dmax = std::max({dmax, std::abs(u[k] - lo), std::abs(hi - u[k])});
  }
  // 1% critical value of the KS statistic.
  CHECK(dmax < 1.628 / std::sqrt(n));
}

TEST_CASE("derive_seed separates tags and is deterministic") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 10000; ++t) seen.insert(derive_seed(7, t));
  CHECK(seen.size() == 10000);
}

TEST_CASE("stream seeds differ per purpose") {
  CHECK(stream_seed(5, Stream::points) != stream_seed(5, Stream::edges));
  CHECK(stream_seed(5, Stream::thinning) != stream_seed(5, Stream::coin));
}

TEST_CASE("CounterRng is reproducible with balanced signs") {
  CounterRng a(99), b(99);
  for (int k = 0; k < 100; ++k) CHECK(a() == b());
  CounterRng c(3);
  int sum = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) sum += c.sign();
  CHECK(std::abs(sum) < 4 * std::sqrt(static_cast<double>(n)));
  double mean = 0.0;
  for (int k = 0; k < n; ++k) mean += c.uniform(2.0, 4.0);
  CHECK(mean / n == doctest::Approx(3.0).epsilon(0.01));
}

}
