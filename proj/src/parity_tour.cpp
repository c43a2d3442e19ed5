#include "pathtsp/parity_tour.hpp"

#include <algorithm>
#include <numeric>

#include "pathtsp/errors.hpp"
#include "pathtsp/matching.hpp"

namespace pathtsp {

Rat tree_length(const MetricInstance& inst, const SpanningTree& t) {
  Rat total = 0;
  for (const VertexPair& e : t.edges) total += inst.length(e);
  return total;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

SpanningTree kruskal(const MetricInstance& inst,
                     std::vector<VertexPair> candidates,
                     const char* disconnected_msg) {
  std::sort(candidates.begin(), candidates.end(),
            [&inst](const VertexPair& x, const VertexPair& y) {
              const Rat& lx = inst.length(x);
              const Rat& ly = inst.length(y);
              if (lx != ly) return lx < ly;
              if (x.a != y.a) return x.a < y.a;
              return x.b < y.b;
            });
  UnionFind uf(inst.n());
  SpanningTree t;
  for (const VertexPair& e : candidates)
    if (uf.unite(e.a, e.b)) t.edges.push_back(e);
  if (static_cast<int>(t.edges.size()) != inst.n() - 1)
    throw InvariantError(disconnected_msg);
  return t;
}

}  // namespace

SpanningTree mst_on_support(const MetricInstance& inst, const EdgeVector& y) {
  std::vector<VertexPair> candidates;
  candidates.reserve(y.entries().size());
  for (const auto& [e, v] : y.entries()) {
    candidates.push_back(e);
    (void)v;
  }
  return kruskal(inst, std::move(candidates),
                 "support is disconnected, certifying the point is not a "
                 "Held-Karp solution");
}

SpanningTree mst_complete(const MetricInstance& inst) {
  std::vector<VertexPair> candidates;
  candidates.reserve(inst.n() * (inst.n() - 1) / 2);
  for (int u = 0; u < inst.n(); ++u)
    for (int v = u + 1; v < inst.n(); ++v) candidates.emplace_back(u, v);
  return kruskal(inst, std::move(candidates),
                 "complete graph unexpectedly disconnected");
}

std::vector<int> parity_target(const MetricInstance& inst,
                               const SpanningTree& t) {
  std::vector<int> degree(inst.n(), 0);
  for (const VertexPair& e : t.edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  std::vector<int> q;
  for (int v = 0; v < inst.n(); ++v) {
    bool odd = degree[v] % 2 == 1;
    if (v == inst.source() || v == inst.sink()) odd = !odd;
    if (odd) q.push_back(v);
  }
  if (q.size() % 2 != 0)
    throw InvariantError("parity target has odd size");
  return q;
}

std::vector<VertexPair> min_q_join(const MetricInstance& inst,
                                   const std::vector<int>& q) {
  if (q.size() % 2 != 0)
    throw InvariantError("join parity set must have even size");
  if (q.empty()) return {};
  return min_weight_perfect_matching(inst, q);
}

HamiltonianPath euler_shortcut(const MetricInstance& inst,
                               const SpanningTree& t,
                               const std::vector<VertexPair>& join) {
  int n = inst.n();
  std::vector<VertexPair> multi = t.edges;
  multi.insert(multi.end(), join.begin(), join.end());

  std::vector<int> degree(n, 0);
  for (const VertexPair& e : multi) {
    ++degree[e.a];
    ++degree[e.b];
  }
  for (int v = 0; v < n; ++v) {
    bool want_odd = v == inst.source() || v == inst.sink();
    if ((degree[v] % 2 == 1) != want_odd)
      throw InvariantError(
          "odd-degree set of tree plus join is not {s, t}; the parity "
          "target was computed wrongly");
  }

  // Hierholzer from s; the trail ends at t.
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t id = 0; id < multi.size(); ++id) {
    adj[multi[id].a].emplace_back(multi[id].b, static_cast<int>(id));
    adj[multi[id].b].emplace_back(multi[id].a, static_cast<int>(id));
  }
  std::vector<bool> used(multi.size(), false);
  std::vector<std::size_t> next(n, 0);
  std::vector<int> stack{inst.source()};
  std::vector<int> trail;
  while (!stack.empty()) {
    int v = stack.back();
    while (next[v] < adj[v].size() && used[adj[v][next[v]].second]) ++next[v];
    if (next[v] == adj[v].size()) {
      trail.push_back(v);
      stack.pop_back();
    } else {
      auto [w, id] = adj[v][next[v]];
      used[id] = true;
      stack.push_back(w);
    }
  }
  std::reverse(trail.begin(), trail.end());
  if (trail.size() != multi.size() + 1)
    throw InvariantError("tree plus join is not connected");
  if (trail.front() != inst.source() || trail.back() != inst.sink())
    throw InvariantError("Eulerian trail does not run from s to t");

  HamiltonianPath path;
  std::vector<bool> seen(n, false);
  for (int v : trail) {
    if (v == inst.sink() || seen[v]) continue;
    seen[v] = true;
    path.order.push_back(v);
  }
  path.order.push_back(inst.sink());
  validate_path(inst, path);
  return path;
}

HamiltonianPath hoogeveen_baseline(const MetricInstance& inst) {
  SpanningTree t = mst_complete(inst);
  std::vector<VertexPair> join = min_q_join(inst, parity_target(inst, t));
  return euler_shortcut(inst, t, join);
}

}  // namespace pathtsp
