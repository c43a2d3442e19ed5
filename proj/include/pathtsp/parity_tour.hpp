#pragma once

#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

struct SpanningTree {
  std::vector<VertexPair> edges;  // n-1 edges, connected, spanning
};

Rat tree_length(const MetricInstance& inst, const SpanningTree& t);

/// Minimum spanning tree restricted to supp(y); deterministic tie-break by
/// (length, a, b). A disconnected support certifies y is not a Held-Karp
/// point and raises InvariantError.
SpanningTree mst_on_support(const MetricInstance& inst, const EdgeVector& y);

/// Minimum spanning tree of the complete graph (the baseline's first step).
SpanningTree mst_complete(const MetricInstance& inst);

/// Q_T = odd(T) symmetric-difference {s,t}; always of even size.
std::vector<int> parity_target(const MetricInstance& inst,
                               const SpanningTree& t);

/// Minimum-length join fixing the parity of q: a minimum-weight perfect
/// matching on q under the metric lengths.
std::vector<VertexPair> min_q_join(const MetricInstance& inst,
                                   const std::vector<int>& q);

/// Walks an Eulerian s-t trail of the multigraph T + J and shortcuts it by
/// keeping the first occurrence of every vertex except t, then appending t.
/// Errors if the odd-degree set is not exactly {s, t}, which certifies a
/// parity-target bug upstream.
HamiltonianPath euler_shortcut(const MetricInstance& inst,
                               const SpanningTree& t,
                               const std::vector<VertexPair>& join);

/// Tree plus parity correction on the complete graph; the 5/3 baseline.
HamiltonianPath hoogeveen_baseline(const MetricInstance& inst);

}  // namespace pathtsp
