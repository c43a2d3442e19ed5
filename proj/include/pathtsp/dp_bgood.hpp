#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

enum class Polarity { Plus, Minus };

/// Node of the auxiliary digraph: a cut paired with a vertex. Plus nodes
/// carry a vertex outside the cut (or the source sentinel (empty, s)),
/// minus nodes a vertex inside (or the sink sentinel (V, t)).
struct AuxNode {
  Cut cut;
  int vertex = -1;
  Polarity polarity = Polarity::Plus;

  bool operator==(const AuxNode&) const = default;
};

/// Arc kinds: HK arcs step from a plus node to a minus node of a strictly
/// larger cut and carry a sub-relaxation optimum; E arcs cross one cut on a
/// single edge and connect the minus and plus nodes of that cut.
struct AuxArc {
  int tail = -1;
  int head = -1;
  bool hk = false;
};

struct AuxDigraph {
  const MetricInstance* inst = nullptr;
  std::vector<Cut> b_family;           // deduplicated, sorted by (size, bits)
  std::vector<AuxNode> nodes;          // in topological order
  std::vector<AuxArc> arcs;
  std::vector<std::vector<int>> out_arcs;  // node -> arc ids
  int source = -1;                     // (empty, s) plus
  int sink = -1;                       // (V, t) minus
};

/// Nodes and structural arcs per the set-builder definitions; lengths are
/// not computed here. Acyclicity under the (|cut|, polarity, bits, vertex)
/// order is asserted.
AuxDigraph build_aux_graph(const MetricInstance& inst,
                           const std::vector<Cut>& b_family);

struct ArcLength {
  bool finite = false;
  Rat length = 0;
  EdgeVector witness;  // optimal sub-relaxation point for HK arcs
};

/// E arcs have closed-form length; HK arcs delegate to the sub-relaxation
/// on head.cut minus tail.cut with the inherited >=3 side constraints.
/// Infeasible sub-relaxations yield an infinite length.
ArcLength arc_length(const AuxDigraph& h, const AuxArc& arc);

struct BGoodResult {
  EdgeVector y;
  std::vector<std::pair<Cut, VertexPair>> integral_one_cuts;  // chain order
  Rat d_star = 0;
  std::vector<AuxNode> path_nodes;
  long lp_solves = 0;  // sub-relaxation solves actually performed
};

/// Shortest (empty,s)-(V,t) path in the auxiliary digraph, assembled into
/// the shortest b_family-good Held-Karp point. Arc lengths are evaluated
/// lazily for arcs leaving reached nodes into sink-coreachable nodes; ties
/// between equal-length paths break toward the lexicographically smallest
/// node sequence. ell(y) = d_star exactly.
BGoodResult shortest_bgood_point(const MetricInstance& inst,
                                 const std::vector<Cut>& b_family,
                                 int threads = 1);

/// Plain-text adjacency listing with arc lengths, for fixtures.
std::string dump_aux_graph(const AuxDigraph& h);

}  // namespace pathtsp
