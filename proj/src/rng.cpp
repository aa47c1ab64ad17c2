#include "geocd/rng.hpp"

#include <algorithm>

#include "geocd/error.hpp"

namespace geocd {

double edge_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  if (i == j) throw InputError("edge_uniform: self-pair has no edge mark");
  return to_unit(derive_seed(seed, std::min(i, j), std::max(i, j)));
}

}  // namespace geocd
