#include "pathtsp/oracle.hpp"

#include <algorithm>

#include "pathtsp/errors.hpp"

namespace pathtsp {

ExactPathResult exact_path_tsp(const MetricInstance& inst) {
  int n = inst.n();
  if (n > 18)
    throw ResourceError("exact Path TSP oracle is limited to 18 vertices");
  int s = inst.source();
  int t = inst.sink();

  // Bitmask DP over the vertices other than s; cost[mask][v] is the length
  // of a shortest path from s through exactly {s} + mask, ending at v.
  std::vector<int> others;
  for (int v = 0; v < n; ++v)
    if (v != s) others.push_back(v);
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < others.size(); ++i)
    slot[others[i]] = static_cast<int>(i);

  std::size_t masks = 1ULL << others.size();
  const Rat unreached = -1;
  std::vector<std::vector<Rat>> cost(masks, std::vector<Rat>(n, unreached));
  std::vector<std::vector<signed char>> parent(
      masks, std::vector<signed char>(n, -1));
  cost[0][s] = 0;

  for (std::size_t mask = 0; mask < masks; ++mask) {
    for (int v = 0; v < n; ++v) {
      if (cost[mask][v] < 0) continue;
      for (int w : others) {
        int b = slot[w];
        if ((mask >> b) & 1ULL) continue;
        std::size_t next = mask | (1ULL << b);
        Rat cand = cost[mask][v] + inst.length(v, w);
        if (cost[next][w] < 0 || cand < cost[next][w]) {
          cost[next][w] = std::move(cand);
          parent[next][w] = static_cast<signed char>(v);
        }
      }
    }
  }

  std::size_t full = masks - 1;
  if (cost[full][t] < 0)
    throw InvariantError("exact DP found no Hamiltonian path");

  ExactPathResult res;
  res.length = cost[full][t];
  std::size_t mask = full;
  int v = t;
  while (v != s || mask != 0) {
    res.path.order.push_back(v);
    int p = parent[mask][v];
    mask &= ~(1ULL << slot[v]);
    v = p;
  }
  res.path.order.push_back(s);
  std::reverse(res.path.order.begin(), res.path.order.end());
  validate_path(inst, res.path);
  return res;
}

std::optional<BGoodViolation> verify_bgood(const EdgeVector& y,
                                           const std::vector<Cut>& b_family) {
  for (const Cut& b : b_family) {
    Rat load = y.load(b.members);
    if (load >= 3) continue;
    int crossing = 0;
    bool integral_one = true;
    for (const auto& [e, v] : y.entries()) {
      bool ia = b.contains(e.a);
      bool ib = b.contains(e.b);
      if (ia == ib) continue;
      ++crossing;
      if (v != 1) integral_one = false;
    }
    if (load == 1 && crossing == 1 && integral_one) continue;
    return BGoodViolation{b, std::move(load), crossing};
  }
  return std::nullopt;
}

namespace {

// iterates all nonempty submasks of `world`
template <typename Fn>
void for_each_submask(std::uint64_t world, Fn&& fn) {
  std::uint64_t sub = world;
  while (sub) {
    fn(sub);
    sub = (sub - 1) & world;
  }
}

std::optional<PhkViolation> check_cut_description(const MetricInstance& inst,
                                                  const EdgeVector& x,
                                                  std::uint64_t world, int u,
                                                  int v) {
  (void)inst;
  for (int w = 0; w < kMaxVertices; ++w) {
    if (!((world >> w) & 1ULL)) continue;
    Rat degree = 0;
    for (const auto& [e, val] : x.entries())
      if (e.a == w || e.b == w) degree += val;
    Rat want = (w == u || w == v) ? 1 : 2;
    if (degree != want)
      return PhkViolation{"degree at vertex " + std::to_string(w)};
  }
  std::optional<PhkViolation> bad;
  for_each_submask(world, [&](std::uint64_t side) {
    if (bad || side == world) return;
    int meet = static_cast<int>((side >> u) & 1ULL) +
               static_cast<int>((side >> v) & 1ULL);
    Rat need = meet == 1 ? 1 : 2;
    if (x.load(side) < need)
      bad = PhkViolation{"cut " + std::to_string(side) + " below " +
                         rat_to_string(need)};
  });
  return bad;
}

std::optional<PhkViolation> check_tree_description(const MetricInstance& inst,
                                                   const EdgeVector& x,
                                                   std::uint64_t world, int u,
                                                   int v) {
  (void)inst;
  int size = __builtin_popcountll(world);
  for (int w = 0; w < kMaxVertices; ++w) {
    if (!((world >> w) & 1ULL)) continue;
    Rat degree = 0;
    for (const auto& [e, val] : x.entries())
      if (e.a == w || e.b == w) degree += val;
    // u == v plays the role of a closed tour; every degree is 2 then
    Rat want = (u != v && (w == u || w == v)) ? 1 : 2;
    if (degree != want)
      return PhkViolation{"tree-form degree at vertex " + std::to_string(w)};
  }
  auto inside_sum = [&x](std::uint64_t side) {
    Rat total = 0;
    for (const auto& [e, val] : x.entries())
      if (((side >> e.a) & 1ULL) && ((side >> e.b) & 1ULL)) total += val;
    return total;
  };
  if (inside_sum(world) != size - 1)
    return PhkViolation{"tree-form total is not |W| - 1"};
  std::optional<PhkViolation> bad;
  for_each_submask(world, [&](std::uint64_t side) {
    if (bad || side == world) return;
    if (inside_sum(side) > __builtin_popcountll(side) - 1)
      bad = PhkViolation{"tree-form subset bound at " + std::to_string(side)};
  });
  return bad;
}

}  // namespace

std::optional<PhkViolation> verify_in_phk(const MetricInstance& inst,
                                          const EdgeVector& x,
                                          std::uint64_t world, int u, int v) {
  int size = __builtin_popcountll(world);
  if (size > 14)
    throw ResourceError("exhaustive relaxation check is limited to 14 "
                        "vertices");
  if (!((world >> u) & 1ULL) || !((world >> v) & 1ULL))
    throw InvariantError("endpoints must lie in the world");
  for (const auto& [e, val] : x.entries()) {
    if (!((world >> e.a) & 1ULL) || !((world >> e.b) & 1ULL))
      return PhkViolation{"support outside the induced edge set"};
    (void)val;
  }

  if (u == v) {
    // single vertex: only the zero vector; larger worlds: empty polytope
    if (size == 1)
      return x.empty() ? std::nullopt
                       : std::optional<PhkViolation>{
                             PhkViolation{"nonzero on a single vertex"}};
    std::optional<PhkViolation> tree =
        check_tree_description(inst, x, world, u, v);
    if (!tree)
      throw InvariantError(
          "tree description accepted a point of an empty polytope");
    return tree;
  }

  std::optional<PhkViolation> by_cuts =
      check_cut_description(inst, x, world, u, v);
  std::optional<PhkViolation> by_tree =
      check_tree_description(inst, x, world, u, v);
  if (by_cuts.has_value() != by_tree.has_value())
    throw InvariantError(
        "the two relaxation descriptions disagree: cut form says " +
        (by_cuts ? by_cuts->constraint : std::string("feasible")) +
        ", tree form says " +
        (by_tree ? by_tree->constraint : std::string("feasible")));
  return by_cuts;
}

std::optional<std::uint64_t> verify_join_dominant(const MetricInstance& inst,
                                                  const EdgeVector& x,
                                                  const std::vector<int>& q) {
  if (inst.n() > 14)
    throw ResourceError("join-dominant check is limited to 14 vertices");
  if (q.size() % 2 != 0) throw InvariantError("parity set must be even");
  if (q.empty()) return std::nullopt;  // no odd cuts at all

  std::uint64_t qmask = 0;
  for (int v : q) qmask |= 1ULL << v;
  std::uint64_t all = inst.all_vertices_mask();
  // complements give the same constraint, so pin one q-vertex inside
  std::uint64_t pin = 1ULL << q.front();
  for (std::uint64_t side = 0; side <= all; ++side) {
    if (!(side & pin) || (side & ~all)) continue;
    if (__builtin_popcountll(side & qmask) % 2 == 0) continue;
    if (x.load(side) < 1) return side;
  }
  return std::nullopt;
}

}  // namespace pathtsp
