#include "pathtsp/flow.hpp"

#include <deque>

#include "pathtsp/errors.hpp"

namespace pathtsp {

void CapGraph::add_edge(int u, int v, Rat capacity) {
  capacity.canonicalize();
  if (u == v) throw InvariantError("CapGraph rejects self-loops");
  if (capacity <= 0) throw InvariantError("CapGraph capacities must be > 0");
  edges.emplace_back(u, v, std::move(capacity));
}

CapGraph support_graph(int n, const EdgeVector& x) {
  CapGraph g;
  g.n = n;
  for (const auto& [e, v] : x.entries()) g.add_edge(e.a, e.b, v);
  return g;
}

namespace {

// Residual arc pair per undirected edge: arcs 2k (a->b) and 2k+1 (b->a),
// each starting with the full capacity.
struct FlowNetwork {
  int n;
  std::vector<int> head;                 // arc -> target vertex
  std::vector<Rat> residual;             // arc -> remaining capacity
  std::vector<std::vector<int>> out;     // vertex -> incident arcs

  explicit FlowNetwork(const CapGraph& g) : n(g.n), out(g.n) {
    head.reserve(2 * g.edges.size());
    residual.reserve(2 * g.edges.size());
    for (const auto& [u, v, cap] : g.edges) {
      out[u].push_back(static_cast<int>(head.size()));
      head.push_back(v);
      residual.push_back(cap);
      out[v].push_back(static_cast<int>(head.size()));
      head.push_back(u);
      residual.push_back(cap);
    }
  }
};

}  // namespace

MinCutResult min_st_cut(const CapGraph& g, int a, int b) {
  if (a == b) throw InvariantError("min_st_cut requires distinct endpoints");
  FlowNetwork net(g);
  Rat flow_value = 0;

  std::vector<int> parent_arc(net.n);
  while (true) {
    // BFS for a shortest augmenting path (Edmonds-Karp).
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    parent_arc[a] = -2;
    std::deque<int> queue{a};
    while (!queue.empty() && parent_arc[b] == -1) {
      int u = queue.front();
      queue.pop_front();
      for (int arc : net.out[u]) {
        int v = net.head[arc];
        if (parent_arc[v] == -1 && net.residual[arc] > 0) {
          parent_arc[v] = arc;
          queue.push_back(v);
        }
      }
    }
    if (parent_arc[b] == -1) break;

    Rat bottleneck = -1;
    for (int v = b; v != a;) {
      int arc = parent_arc[v];
      if (bottleneck < 0 || net.residual[arc] < bottleneck)
        bottleneck = net.residual[arc];
      v = net.head[arc ^ 1];
    }
    for (int v = b; v != a;) {
      int arc = parent_arc[v];
      net.residual[arc] -= bottleneck;
      net.residual[arc ^ 1] += bottleneck;
      v = net.head[arc ^ 1];
    }
    flow_value += bottleneck;
  }

  // Source side = residual-reachable set.
  std::uint64_t side = 0;
  {
    std::vector<bool> seen(net.n, false);
    std::deque<int> queue{a};
    seen[a] = true;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      side |= 1ULL << u;
      for (int arc : net.out[u]) {
        int v = net.head[arc];
        if (!seen[v] && net.residual[arc] > 0) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
  }

  // Max-flow / min-cut certificate: the returned flow value must equal the
  // capacity across the returned side.
  Rat cut_load = 0;
  for (const auto& [u, v, cap] : g.edges) {
    bool iu = (side >> u) & 1ULL;
    bool iv = (side >> v) & 1ULL;
    if (iu != iv) cut_load += cap;
  }
  if (cut_load != flow_value)
    throw InvariantError("max-flow value does not match min-cut load");

  return {std::move(flow_value), side};
}

MinCutResult global_min_cut(const CapGraph& g) {
  if (g.n < 2) throw InvariantError("global_min_cut requires n >= 2");
  MinCutResult best{Rat(-1), 0};
  for (int b = 1; b < g.n; ++b) {
    MinCutResult cur = min_st_cut(g, 0, b);
    if (best.value < 0 || cur.value < best.value) best = std::move(cur);
  }
  return best;
}

}  // namespace pathtsp
