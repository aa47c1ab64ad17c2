#pragma once

// Plain-text graph format:
//   geograph v1 d=<d> n=<n> metric=<euclidean|toroidal>
//   N <id> <x1..xd> <label>
//   E <i> <j>        (i < j)
//   I <i> <j>        (information graph, optional)

#include <iosfwd>
#include <string>

#include "geocd/model.hpp"

namespace geocd {

void write_graph(std::ostream& os, const SpatialGraph& g);
/// Throws IoError on failure.
void write_graph_file(const std::string& path, const SpatialGraph& g);

/// Throws CorruptInputError on malformed content.
SpatialGraph read_graph(std::istream& is);
/// Throws IoError when the file cannot be opened.
SpatialGraph read_graph_file(const std::string& path);

}  // namespace geocd
