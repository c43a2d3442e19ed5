#include "pathtsp/dp_bgood.hpp"

#include <algorithm>
#include <deque>
#include <atomic>
#include <mutex>
#include <cstdlib>
#include <sstream>
#include <tuple>

#include "pathtsp/errors.hpp"
#include "pathtsp/held_karp.hpp"
#include "pathtsp/parallel.hpp"

namespace pathtsp {

namespace {

// topological / tie-break key
std::tuple<int, int, std::uint64_t, int> node_key(const AuxNode& n) {
  return {n.cut.size(), n.polarity == Polarity::Plus ? 1 : 0, n.cut.members,
          n.vertex};
}

std::vector<Cut> normalize_family(const MetricInstance& inst,
                                  const std::vector<Cut>& b_family) {
  std::uint64_t all = inst.all_vertices_mask();
  std::vector<Cut> family = b_family;
  for (const Cut& b : family) {
    if (!b.contains(inst.source()) || b.contains(inst.sink()))
      throw InvariantError("family cut must contain s and miss t");
    if ((b.members & ~all) != 0)
      throw InvariantError("family cut outside the vertex set");
  }
  std::sort(family.begin(), family.end(),
            [](const Cut& a, const Cut& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a.members < b.members;
            });
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

// Extra side constraints inherited by an HK arc: cuts of the family nested
// between the endpoints' cuts that separate u from v.
std::vector<Cut> arc_extra_cuts(const AuxDigraph& h, const AuxNode& tail,
                                const AuxNode& head) {
  std::vector<Cut> extras;
  for (const Cut& b : h.b_family) {
    if (!tail.cut.subset_of(b) || !b.subset_of(head.cut)) continue;
    if (!b.contains(tail.vertex) || b.contains(head.vertex)) continue;
    extras.push_back(b);
  }
  return extras;
}

// An arc is structurally infinite when its sub-relaxation is empty for
// reasons visible without solving: equal endpoints on a multi-vertex world,
// or an inherited cut whose trace pins a degree-1 endpoint.
bool structurally_infinite(const AuxDigraph& h, const AuxArc& arc) {
  if (!arc.hk) return false;
  const AuxNode& tail = h.nodes[arc.tail];
  const AuxNode& head = h.nodes[arc.head];
  std::uint64_t world = head.cut.members & ~tail.cut.members;
  int size = __builtin_popcountll(world);
  if (tail.vertex == head.vertex) return size >= 2;
  std::uint64_t u_only = 1ULL << tail.vertex;
  std::uint64_t all_but_v = world & ~(1ULL << head.vertex);
  for (const Cut& b : h.b_family) {
    if (!tail.cut.subset_of(b) || !b.subset_of(head.cut)) continue;
    if (!b.contains(tail.vertex) || b.contains(head.vertex)) continue;
    std::uint64_t trace = b.members & world;
    if (trace == u_only || trace == all_but_v) return true;
  }
  return false;
}

}  // namespace

AuxDigraph build_aux_graph(const MetricInstance& inst,
                           const std::vector<Cut>& b_family) {
  AuxDigraph h;
  h.inst = &inst;
  h.b_family = normalize_family(inst, b_family);
  int n = inst.n();
  std::uint64_t all = inst.all_vertices_mask();

  h.nodes.push_back({Cut{0}, inst.source(), Polarity::Plus});
  h.nodes.push_back({Cut{all}, inst.sink(), Polarity::Minus});
  for (const Cut& b : h.b_family)
    for (int v = 0; v < n; ++v)
      h.nodes.push_back(
          {b, v, b.contains(v) ? Polarity::Minus : Polarity::Plus});

  std::sort(h.nodes.begin(), h.nodes.end(),
            [](const AuxNode& a, const AuxNode& b) {
              return node_key(a) < node_key(b);
            });
  for (std::size_t i = 0; i < h.nodes.size(); ++i) {
    if (h.nodes[i].cut.members == 0) h.source = static_cast<int>(i);
    if (h.nodes[i].cut.members == all &&
        h.nodes[i].polarity == Polarity::Minus &&
        h.nodes[i].vertex == inst.sink())
      h.sink = static_cast<int>(i);
  }

  h.out_arcs.assign(h.nodes.size(), {});
  for (std::size_t ti = 0; ti < h.nodes.size(); ++ti) {
    const AuxNode& tail = h.nodes[ti];
    for (std::size_t hi = 0; hi < h.nodes.size(); ++hi) {
      if (ti == hi) continue;
      const AuxNode& head = h.nodes[hi];
      bool arc_exists = false;
      bool hk = false;
      if (tail.polarity == Polarity::Plus &&
          head.polarity == Polarity::Minus) {
        std::uint64_t diff = head.cut.members & ~tail.cut.members;
        arc_exists = tail.cut.subset_of(head.cut) &&
                     ((diff >> tail.vertex) & 1ULL) &&
                     ((diff >> head.vertex) & 1ULL);
        hk = true;
      } else if (tail.polarity == Polarity::Minus &&
                 head.polarity == Polarity::Plus) {
        arc_exists = tail.cut == head.cut;
      }
      if (!arc_exists) continue;
      if (node_key(tail) >= node_key(head))
        throw InvariantError("auxiliary digraph is not acyclic under the "
                             "topological key");
      h.out_arcs[ti].push_back(static_cast<int>(h.arcs.size()));
      h.arcs.push_back({static_cast<int>(ti), static_cast<int>(hi), hk});
    }
  }
  return h;
}

ArcLength arc_length(const AuxDigraph& h, const AuxArc& arc) {
  const AuxNode& tail = h.nodes[arc.tail];
  const AuxNode& head = h.nodes[arc.head];
  if (!arc.hk) {
    ArcLength len;
    len.finite = true;
    len.length = h.inst->length(tail.vertex, head.vertex);
    return len;
  }
  HeldKarpSpec spec;
  spec.inst = h.inst;
  spec.world = head.cut.members & ~tail.cut.members;
  spec.u = tail.vertex;
  spec.v = head.vertex;
  spec.extra_cuts = arc_extra_cuts(h, tail, head);
  HeldKarpResult sub = solve_held_karp(spec);
  ArcLength len;
  if (!sub.feasible) return len;
  len.finite = true;
  len.length = std::move(sub.value);
  len.witness = std::move(sub.x);
  return len;
}

namespace {

struct PathState {
  std::vector<char> reached;
  std::vector<Rat> dist;
  std::vector<int> parent_arc;
};

// Node sequence of the tentative path into `node`, as node indices.
std::vector<int> collect_path(const AuxDigraph& h,
                              const std::vector<int>& parent_arc, int node) {
  std::vector<int> seq;
  for (int cur = node; cur >= 0;) {
    seq.push_back(cur);
    int arc = parent_arc[cur];
    cur = arc < 0 ? -1 : h.arcs[arc].tail;
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

// Lexicographic order of node sequences under (|cut|, bits, vertex).
bool sequence_less(const AuxDigraph& h, const std::vector<int>& a,
                   const std::vector<int>& b) {
  auto tie_key = [&](int node) {
    const AuxNode& n = h.nodes[node];
    return std::tuple{n.cut.size(), n.cut.members, n.vertex};
  };
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [&](int x, int y) { return tie_key(x) < tie_key(y); });
}

}  // namespace

// A cheap Hamiltonian path: greedy nearest unvisited vertex, sink last. Its
// vector is good for any family, so its length upper-bounds d*.
Rat greedy_path_length(const MetricInstance& inst) {
  int n = inst.n();
  std::vector<bool> seen(n, false);
  seen[inst.source()] = true;
  seen[inst.sink()] = true;
  int cur = inst.source();
  Rat total = 0;
  for (int step = 0; step < n - 2; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (seen[v]) continue;
      if (best < 0 || inst.length(cur, v) < inst.length(cur, best)) best = v;
    }
    total += inst.length(cur, best);
    seen[best] = true;
    cur = best;
  }
  total += inst.length(cur, inst.sink());
  return total;
}

// Double-precision degree bounds used only to skip arcs that certainly
// cannot lie on a shortest path; a conservative margin keeps ties intact.
struct PruneBounds {
  const MetricInstance* inst;
  std::vector<double> nearest;  // min length to any other vertex
  double ub = 0;
  double margin = 0;

  PruneBounds(const MetricInstance& instance, const Rat& upper)
      : inst(&instance) {
    int n = instance.n();
    nearest.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
      double best = -1;
      for (int w = 0; w < n; ++w) {
        if (w == v) continue;
        double d = rat_to_double(instance.length(v, w));
        if (best < 0 || d < best) best = d;
      }
      nearest[v] = best < 0 ? 0 : best;
    }
    ub = rat_to_double(upper);
    margin = 1e-6 * (1.0 + ub);
  }

  // Degree mass still owed by the suffix of a path standing at a node with
  // this cut: every vertex outside the cut other than t needs two suffix
  // half-edges, t needs one; a plus node's own vertex already got one.
  double cost_to_go(const AuxNode& node) const {
    double total = 0;
    int n = inst->n();
    for (int w = 0; w < n; ++w) {
      if (node.cut.contains(w)) continue;
      double share = nearest[w];
      if (node.polarity == Polarity::Plus && w == node.vertex) {
        // a plus node's own vertex already has one incident prefix edge; at
        // the sink its degree is complete and the suffix owes nothing
        share = w == inst->sink() ? 0.0 : share / 2;
      } else if (w == inst->sink()) {
        share /= 2;
      }
      total += share;
    }
    return total;
  }

  // Lower bound on an HK arc's length from its world's degree requirements.
  double arc_bound(const AuxNode& tail, const AuxNode& head) const {
    std::uint64_t world = head.cut.members & ~tail.cut.members;
    int size = __builtin_popcountll(world);
    if (size <= 1) return 0;
    double total = 0;
    for (int w = 0; w < inst->n(); ++w) {
      if (!((world >> w) & 1ULL)) continue;
      double best = -1;
      for (int x = 0; x < inst->n(); ++x) {
        if (x == w || !((world >> x) & 1ULL)) continue;
        double d = rat_to_double(inst->length(w, x));
        if (best < 0 || d < best) best = d;
      }
      if (best < 0) best = 0;
      if (w == tail.vertex || w == head.vertex) best /= 2;
      total += best;
    }
    return total;
  }
};

BGoodResult shortest_bgood_point(const MetricInstance& inst,
                                 const std::vector<Cut>& b_family,
                                 int threads) {
  AuxDigraph h = build_aux_graph(inst, b_family);
  std::size_t node_count = h.nodes.size();

  // nodes that can still reach the sink once structurally infinite arcs are
  // removed
  std::vector<char> coreach(node_count, 0);
  {
    std::vector<std::vector<int>> in_arcs(node_count);
    for (std::size_t a = 0; a < h.arcs.size(); ++a)
      if (!structurally_infinite(h, h.arcs[a]))
        in_arcs[h.arcs[a].head].push_back(static_cast<int>(a));
    std::deque<int> queue{h.sink};
    coreach[h.sink] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int a : in_arcs[v]) {
        int tail = h.arcs[a].tail;
        if (!coreach[tail]) {
          coreach[tail] = 1;
          queue.push_back(tail);
        }
      }
    }
  }

  PathState st;
  st.reached.assign(node_count, 0);
  st.dist.assign(node_count, Rat(0));
  st.parent_arc.assign(node_count, -1);
  st.reached[h.source] = 1;

  std::vector<std::optional<ArcLength>> lengths(h.arcs.size());
  std::atomic<long> lp_solves{0};

  // Any Hamiltonian path is good for any family, so a greedy path bounds d*
  // from above; arcs that certainly cannot beat it are skipped.
  PruneBounds bounds(inst, greedy_path_length(inst));

  // Identical sub-relaxations occur on different arcs once the family has
  // incomparable cuts; their results are shared.
  struct SubKey {
    std::uint64_t world;
    int u, v;
    std::vector<std::uint64_t> traces;
    auto operator<=>(const SubKey&) const = default;
  };
  std::map<SubKey, ArcLength> memo;
  std::mutex memo_mutex;
  auto make_key = [&](const AuxArc& arc) {
    const AuxNode& tail = h.nodes[arc.tail];
    const AuxNode& head = h.nodes[arc.head];
    SubKey key{head.cut.members & ~tail.cut.members, tail.vertex,
               head.vertex,
               {}};
    for (const Cut& b : arc_extra_cuts(h, tail, head))
      key.traces.push_back(b.members & key.world);
    std::sort(key.traces.begin(), key.traces.end());
    key.traces.erase(std::unique(key.traces.begin(), key.traces.end()),
                     key.traces.end());
    return key;
  };
  auto solve_arc = [&](int a) {
    SubKey key = make_key(h.arcs[a]);
    {
      std::lock_guard<std::mutex> guard(memo_mutex);
      auto it = memo.find(key);
      if (it != memo.end()) {
        lengths[a] = it->second;
        return;
      }
    }
    ArcLength len = arc_length(h, h.arcs[a]);
    ++lp_solves;
    {
      std::lock_guard<std::mutex> guard(memo_mutex);
      memo.emplace(std::move(key), len);
    }
    lengths[a] = std::move(len);
  };

  // Nodes are already topologically sorted, so a single sweep relaxes every
  // arc whose tail is settled; lengths of candidate HK arcs are solved in
  // parallel per tail node.
  for (std::size_t i = 0; i < node_count; ++i) {
    if (!st.reached[i]) continue;
    double dist_i = rat_to_double(st.dist[i]);
    if (dist_i + bounds.cost_to_go(h.nodes[i]) > bounds.ub + bounds.margin)
      continue;
    std::vector<int> candidates;
    for (int a : h.out_arcs[i]) {
      const AuxArc& arc = h.arcs[a];
      if (!coreach[arc.head]) continue;
      if (structurally_infinite(h, arc)) continue;
      double lower =
          arc.hk ? bounds.arc_bound(h.nodes[arc.tail], h.nodes[arc.head])
                 : rat_to_double(
                       inst.length(h.nodes[arc.tail].vertex,
                                   h.nodes[arc.head].vertex));
      if (dist_i + lower + bounds.cost_to_go(h.nodes[arc.head]) >
          bounds.ub + bounds.margin)
        continue;
      candidates.push_back(a);
    }
    std::vector<int> to_solve;
    for (int a : candidates)
      if (h.arcs[a].hk && !lengths[a]) to_solve.push_back(a);
    parallel_for(to_solve.size(), threads,
                 [&](std::size_t k) { solve_arc(to_solve[k]); });
    for (int a : candidates) {
      if (!lengths[a]) lengths[a] = arc_length(h, h.arcs[a]);
      const ArcLength& len = *lengths[a];
      if (!len.finite) continue;
      int head = h.arcs[a].head;
      Rat cand = st.dist[i] + len.length;
      if (!st.reached[head] || cand < st.dist[head]) {
        st.reached[head] = 1;
        st.dist[head] = std::move(cand);
        st.parent_arc[head] = a;
      } else if (cand == st.dist[head]) {
        int old_parent = st.parent_arc[head];
        std::vector<int> with_old = collect_path(h, st.parent_arc, head);
        st.parent_arc[head] = a;
        std::vector<int> with_new = collect_path(h, st.parent_arc, head);
        if (!sequence_less(h, with_new, with_old))
          st.parent_arc[head] = old_parent;
      }
    }
  }

  if (!st.reached[h.sink])
    throw InvariantError(
        "no good point found in the auxiliary digraph; the family or the "
        "relaxation solver is inconsistent");

  BGoodResult res;
  res.d_star = st.dist[h.sink];
  res.lp_solves = lp_solves;

  std::vector<int> arc_seq;
  for (int cur = h.sink; st.parent_arc[cur] >= 0;
       cur = h.arcs[st.parent_arc[cur]].tail)
    arc_seq.push_back(st.parent_arc[cur]);
  std::reverse(arc_seq.begin(), arc_seq.end());

  res.path_nodes.push_back(h.nodes[h.source]);
  for (int a : arc_seq) res.path_nodes.push_back(h.nodes[h.arcs[a].head]);

  for (int a : arc_seq) {
    const AuxArc& arc = h.arcs[a];
    const AuxNode& tail = h.nodes[arc.tail];
    const AuxNode& head = h.nodes[arc.head];
    if (arc.hk) {
      res.y += lengths[a]->witness;
    } else {
      res.y.add(VertexPair(tail.vertex, head.vertex), 1);
      res.integral_one_cuts.emplace_back(
          tail.cut, VertexPair(tail.vertex, head.vertex));
    }
  }

  if (vector_length(inst, res.y) != res.d_star)
    throw InvariantError("assembled point length differs from the shortest "
                         "path length");
  for (std::size_t i = 1; i < res.integral_one_cuts.size(); ++i) {
    const Cut& prev = res.integral_one_cuts[i - 1].first;
    const Cut& cur = res.integral_one_cuts[i].first;
    if (!(prev.subset_of(cur) && prev != cur))
      throw InvariantError("integral one-cuts do not form a strict chain");
  }
  return res;
}

std::string dump_aux_graph(const AuxDigraph& h) {
  std::ostringstream os;
  for (std::size_t i = 0; i < h.nodes.size(); ++i) {
    const AuxNode& n = h.nodes[i];
    os << i << " " << (n.polarity == Polarity::Plus ? "+" : "-") << " cut="
       << n.cut.members << " v=" << n.vertex << "\n";
    for (int a : h.out_arcs[i]) {
      const AuxArc& arc = h.arcs[a];
      ArcLength len = arc_length(h, arc);
      os << "  -> " << arc.head << " " << (arc.hk ? "HK" : "E") << " ";
      if (len.finite) os << rat_to_string(len.length);
      else os << "inf";
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace pathtsp
