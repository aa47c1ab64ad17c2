#pragma once

// Counter-based randomness. Every random quantity in the library is a pure
// function of (seed, counters), so samples are reproducible regardless of
// thread count or evaluation order.

#include <cstdint>
#include <limits>

namespace geocd {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ mix64(v ^ 0x632be59bd9b4e019ULL));
}

/// Folds any number of integer tags into a sub-seed.
template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Tags... tags) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = hash_combine(h, static_cast<std::uint64_t>(tags))), ...);
  return h;
}

/// Top 53 bits mapped to [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Domain tags keep streams for different purposes disjoint.
enum class Stream : std::uint64_t {
  points = 0x706f696e,
  labels = 0x6c61626c,
  edges = 0x65646765,
  thinning = 0x7468696e,
  traversal = 0x74726176,
  monte_carlo = 0x6d6f6e74,
  coin = 0x636f696e,
};

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream s) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(s));
}

/// Shared mark U_ij = U_ji of an unordered node pair. Throws InputError when
/// i == j.
double edge_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j);

/// Uniform on [0,1) keyed by a single node id (thinning marks, coins).
inline double node_uniform(std::uint64_t seed, std::uint64_t i) noexcept {
  return to_unit(derive_seed(seed, i));
}

/// Counter-mode generator satisfying UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return hash_combine(key_, counter_++); }

  double uniform() noexcept { return to_unit((*this)()); }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// +1 or -1 with equal probability.
  int sign() noexcept { return ((*this)() >> 63) ? 1 : -1; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace geocd
