#include <algorithm>

#include "doctest.h"
#include "pathtsp/cut_enum.hpp"
#include "pathtsp/errors.hpp"
#include "pathtsp/dp_bgood.hpp"
#include "pathtsp/held_karp.hpp"
#include "pathtsp/oracle.hpp"
#include "test_helpers.hpp"

using namespace pathtsp;
using pathtsp::testing::collinear4;
using pathtsp::testing::two_vertex;

TEST_CASE("hand-expanded graph for the smallest instance") {
  MetricInstance inst = two_vertex();
  AuxDigraph h = build_aux_graph(inst, {Cut{0b01}});
  // nodes: (empty,s)+, ({s},s)-, ({s},t)+, (V,t)-
  REQUIRE(h.nodes.size() == 4);
  REQUIRE(h.source >= 0);
  REQUIRE(h.sink >= 0);

  int hk_arcs = 0, e_arcs = 0;
  for (const AuxArc& arc : h.arcs) (arc.hk ? hk_arcs : e_arcs)++;
  // HK: source->({s},s), ({s},t)->sink, source->sink; E: ({s},s)->({s},t)
  CHECK(hk_arcs == 3);
  CHECK(e_arcs == 1);

  for (const AuxArc& arc : h.arcs) {
    if (arc.hk) continue;
    CHECK(h.nodes[arc.tail].cut == h.nodes[arc.head].cut);
    Rat len = arc_length(h, arc).length;
    CHECK(len == Rat(5));
  }

  std::string dump = dump_aux_graph(h);
  CHECK(dump.find("inf") != std::string::npos);  // the direct source->sink arc

  BGoodResult res = shortest_bgood_point(inst, {Cut{0b01}});
  CHECK(res.d_star == Rat(5));
  CHECK(res.y.value(VertexPair(0, 1)) == Rat(1));
  REQUIRE(res.integral_one_cuts.size() == 1);
  CHECK(res.integral_one_cuts[0].first.members == 0b01);
  CHECK(res.integral_one_cuts[0].second == VertexPair(0, 1));
  CHECK(res.path_nodes.size() == 4);
}

TEST_CASE("empty family degenerates to one relaxation solve") {
  MetricInstance inst = collinear4();
  AuxDigraph h = build_aux_graph(inst, {});
  CHECK(h.nodes.size() == 2);
  CHECK(h.arcs.size() == 1);
  CHECK(h.arcs[0].hk);

  BGoodResult res = shortest_bgood_point(inst, {});
  HeldKarpResult hk = solve_held_karp(HeldKarpSpec::top_level(inst));
  CHECK(res.d_star == hk.value);
  CHECK(res.y == hk.x);
  CHECK(res.integral_one_cuts.empty());
}

TEST_CASE("arc length conventions") {
  MetricInstance inst = collinear4();
  AuxDigraph h = build_aux_graph(inst, {Cut{0b0001}, Cut{0b0111}});
  for (const AuxArc& arc : h.arcs) {
    const AuxNode& tail = h.nodes[arc.tail];
    const AuxNode& head = h.nodes[arc.head];
    if (!arc.hk) continue;
    std::uint64_t world = head.cut.members & ~tail.cut.members;
    ArcLength len = arc_length(h, arc);
    if (tail.vertex == head.vertex) {
      if (__builtin_popcountll(world) == 1) {
        CHECK(len.finite);
        CHECK(len.length == Rat(0));
        CHECK(len.witness.empty());
      } else {
        CHECK_FALSE(len.finite);
      }
    }
  }
}

TEST_CASE("node count bound") {
  MetricInstance inst = collinear4();
  std::vector<Cut> family{Cut{0b0001}, Cut{0b0011}, Cut{0b0111},
                          Cut{0b0101}};
  AuxDigraph h = build_aux_graph(inst, family);
  CHECK(h.nodes.size() <= family.size() * inst.n() + 2);
}

TEST_CASE("collinear-4 with its own cut family returns the optimum") {
  MetricInstance inst = collinear4();
  HeldKarpResult hk = solve_held_karp(HeldKarpSpec::top_level(inst));
  auto cuts = enumerate_b_cuts(inst, hk.x, CutEnumMethod::Brute);
  std::vector<Cut> family;
  for (const auto& c : cuts) family.push_back(c.cut);

  BGoodResult res = shortest_bgood_point(inst, family);
  CHECK(res.d_star == Rat(3));
  CHECK(res.y == hk.x);
  // the family holds {s} and V-{t}, so the chain starts and ends there
  REQUIRE_FALSE(res.integral_one_cuts.empty());
  CHECK(res.integral_one_cuts.front().first.members == 0b0001);
  CHECK(res.integral_one_cuts.back().first.members == 0b0111);
}

TEST_CASE("result is reproducible and certified on random instances") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    int n = 5 + static_cast<int>(seed % 4);
    MetricInstance inst = MetricInstance::generate(
        seed % 2 ? InstanceFamily::RandomEuclidean
                 : InstanceFamily::GraphMetric,
        n, seed);
    HeldKarpSpec top = HeldKarpSpec::top_level(inst);
    HeldKarpResult hk = solve_held_karp(top);
    auto cuts = enumerate_b_cuts(inst, hk.x, CutEnumMethod::Brute);
    std::vector<Cut> family;
    for (const auto& c : cuts) family.push_back(c.cut);

    BGoodResult res = shortest_bgood_point(inst, family, 2);
    BGoodResult rerun = shortest_bgood_point(inst, family, 1);
    CHECK(res.y == rerun.y);
    CHECK(res.d_star == rerun.d_star);

    CHECK(vector_length(inst, res.y) == res.d_star);
    CHECK_FALSE(separate_point(top, res.y).has_value());
    CHECK_FALSE(verify_bgood(res.y, family).has_value());
    CHECK_FALSE(verify_in_phk(inst, res.y, inst.all_vertices_mask(),
                              inst.source(), inst.sink())
                    .has_value());
    long bound = static_cast<long>(family.size() * n + 2);
    CHECK(res.lp_solves <= bound * bound);

    // the shortest good point is at most any Hamiltonian path
    std::vector<int> mid;
    for (int v = 1; v + 1 < n; ++v) mid.push_back(v);
    do {
      HamiltonianPath p;
      p.order.push_back(0);
      p.order.insert(p.order.end(), mid.begin(), mid.end());
      p.order.push_back(n - 1);
      CHECK(res.d_star <= path_length(inst, p));
    } while (std::next_permutation(mid.begin(), mid.end()));

    // sandwich: hk optimum <= d_star <= OPT
    CHECK(hk.value <= res.d_star);
    CHECK(res.d_star <= exact_path_tsp(inst).length);
  }
}

TEST_CASE("family orientation is validated") {
  MetricInstance inst = collinear4();
  CHECK_THROWS_AS(build_aux_graph(inst, {Cut{0b1000}}),
                  pathtsp::InvariantError);
  CHECK_THROWS_AS(build_aux_graph(inst, {Cut{0b1111}}),
                  pathtsp::InvariantError);
}
