#pragma once

#include <tuple>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

/// Maximum-weight matching on a general graph (blossoms, exact rational
/// duals); O(n^3). Returns mate[v] = partner vertex or -1. Weights may be
/// arbitrary rationals; vertices left unmatched when that is optimal.
std::vector<int> max_weight_matching(
    int n, const std::vector<std::tuple<int, int, Rat>>& edges);

/// Minimum-length perfect matching on an even subset of instance vertices.
/// Because lengths are metric, the result is also a minimum-length join for
/// that parity set. Reduces to max_weight_matching with weights
/// (1 + max length) - length, which are strictly positive, so a maximum
/// matching on the complete subgraph is perfect.
std::vector<VertexPair> min_weight_perfect_matching(
    const MetricInstance& inst, const std::vector<int>& verts);

}  // namespace pathtsp
