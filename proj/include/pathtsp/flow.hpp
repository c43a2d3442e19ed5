#pragma once

#include <cstdint>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

/// Undirected capacitated graph. Parallel edges are allowed and their
/// capacities add for cut purposes; self-loops are rejected.
struct CapGraph {
  int n = 0;
  std::vector<std::tuple<int, int, Rat>> edges;

  void add_edge(int u, int v, Rat capacity);
};

/// Support graph of an edge vector restricted to the vertices in `mask`
/// (vertex ids are preserved; @p n is the ambient vertex count).
CapGraph support_graph(int n, const EdgeVector& x);

struct MinCutResult {
  Rat value;
  std::uint64_t side;  // the side containing the first argument vertex
};

/// Exact minimum a-b cut via augmenting-path max-flow. The returned side is
/// the set of vertices reachable from a in the final residual graph, which
/// is the inclusion-minimal minimum cut side containing a.
MinCutResult min_st_cut(const CapGraph& g, int a, int b);

/// Exact global minimum cut: n-1 min_st_cut calls from a fixed root.
MinCutResult global_min_cut(const CapGraph& g);

}  // namespace pathtsp
