#pragma once

#include <random>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/lp.hpp"

namespace pathtsp::testing {

/// 2-vertex instance with ell(s,t) = 5.
inline MetricInstance two_vertex() {
  return MetricInstance::from_lengths(2, {Rat(0), Rat(5), Rat(5), Rat(0)}, 0,
                                      1, "two-vertex");
}

/// Four collinear Euclidean points at 0,1,2,3 with s=0, t=3.
inline MetricInstance collinear4() {
  std::vector<Rat> d(16, Rat(0));
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) d[u * 4 + v] = Rat(std::abs(u - v));
  return MetricInstance::from_lengths(4, std::move(d), 0, 3, "collinear-4");
}

/// Midpoint of the two Hamiltonian path vectors (0,1,2,3) and (0,2,1,3).
inline EdgeVector collinear4_half_half() {
  EdgeVector z;
  z.set(VertexPair(0, 1), Rat(1, 2));
  z.set(VertexPair(1, 2), Rat(1));
  z.set(VertexPair(2, 3), Rat(1, 2));
  z.set(VertexPair(0, 2), Rat(1, 2));
  z.set(VertexPair(1, 3), Rat(1, 2));
  return z;
}

/// The Held-Karp path relaxation with every cut row materialized
/// (exponentially many); the independent cross-check for row generation.
LinearProgram materialized_held_karp(const MetricInstance& inst);

/// All s-t cut masks (s inside, t outside) of an n-vertex instance.
inline std::vector<std::uint64_t> all_st_cuts(int n, int s, int t) {
  std::vector<std::uint64_t> out;
  std::uint64_t all = n == 64 ? ~0ULL : ((1ULL << n) - 1);
  std::uint64_t rest = all & ~(1ULL << s) & ~(1ULL << t);
  std::vector<int> free_verts;
  for (int v = 0; v < n; ++v)
    if ((rest >> v) & 1ULL) free_verts.push_back(v);
  std::uint64_t limit = 1ULL << free_verts.size();
  for (std::uint64_t pick = 0; pick < limit; ++pick) {
    std::uint64_t mask = 1ULL << s;
    for (std::size_t i = 0; i < free_verts.size(); ++i)
      if ((pick >> i) & 1ULL) mask |= 1ULL << free_verts[i];
    out.push_back(mask);
  }
  return out;
}

inline LinearProgram materialized_held_karp(const MetricInstance& inst) {
  int n = inst.n();
  std::vector<VertexPair> vars;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) vars.emplace_back(u, v);

  LinearProgram lp;
  lp.var_count = static_cast<int>(vars.size());
  for (const VertexPair& e : vars) lp.objective.push_back(inst.length(e));

  for (int w = 0; w < n; ++w) {
    LpRow row;
    row.rel = Relation::Equal;
    row.rhs = (w == inst.source() || w == inst.sink()) ? 1 : 2;
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (vars[j].a == w || vars[j].b == w)
        row.terms.emplace_back(static_cast<int>(j), Rat(1));
    lp.rows.push_back(std::move(row));
  }

  std::uint64_t all = inst.all_vertices_mask();
  for (std::uint64_t side = 1; side < all; ++side) {
    int meet = static_cast<int>((side >> inst.source()) & 1ULL) +
               static_cast<int>((side >> inst.sink()) & 1ULL);
    LpRow row;
    row.rel = Relation::GreaterEqual;
    row.rhs = meet == 1 ? 1 : 2;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      bool ia = (side >> vars[j].a) & 1ULL;
      bool ib = (side >> vars[j].b) & 1ULL;
      if (ia != ib) row.terms.emplace_back(static_cast<int>(j), Rat(1));
    }
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

}  // namespace pathtsp::testing
