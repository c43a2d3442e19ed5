#include <algorithm>
#include <random>

#include "doctest.h"
#include "pathtsp/errors.hpp"
#include "pathtsp/held_karp.hpp"
#include "test_helpers.hpp"

using namespace pathtsp;
using pathtsp::testing::all_st_cuts;
using pathtsp::testing::collinear4;
using pathtsp::testing::collinear4_half_half;
using pathtsp::testing::materialized_held_karp;
using pathtsp::testing::two_vertex;

namespace {

// Exhaustive feasibility audit over every cut constraint of the relaxation.
bool brute_feasible(const MetricInstance& inst, const HeldKarpSpec& spec,
                    const EdgeVector& x) {
  std::vector<int> verts;
  for (int v = 0; v < inst.n(); ++v)
    if ((spec.world >> v) & 1ULL) verts.push_back(v);
  for (int w : verts) {
    Rat deg = 0;
    for (const auto& [e, val] : x.entries())
      if (e.a == w || e.b == w) deg += val;
    Rat want = (w == spec.u || w == spec.v) ? 1 : 2;
    if (deg != want) return false;
  }
  std::uint64_t limit = 1ULL << verts.size();
  for (std::uint64_t pick = 1; pick + 1 < limit; ++pick) {
    std::uint64_t side = 0;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if ((pick >> i) & 1ULL) side |= 1ULL << verts[i];
    int meet = static_cast<int>((side >> spec.u) & 1ULL) +
               static_cast<int>((side >> spec.v) & 1ULL);
    Rat need = meet == 1 ? 1 : 2;
    if (x.load(side) < need) return false;
  }
  for (const Cut& b : spec.extra_cuts)
    if (x.load(b.members) < 3) return false;
  return true;
}

}  // namespace

TEST_CASE("two vertex relaxation is the single edge") {
  MetricInstance inst = two_vertex();
  HeldKarpResult r = solve_held_karp(HeldKarpSpec::top_level(inst));
  REQUIRE(r.feasible);
  CHECK(r.value == Rat(5));
  CHECK(r.x.support_size() == 1);
  CHECK(r.x.value(VertexPair(0, 1)) == Rat(1));
}

TEST_CASE("degenerate endpoint conventions") {
  MetricInstance inst = collinear4();
  HeldKarpSpec singleton{&inst, 1ULL << 2, 2, 2, {}};
  HeldKarpResult r = solve_held_karp(singleton);
  REQUIRE(r.feasible);
  CHECK(r.value == Rat(0));
  CHECK(r.x.empty());

  HeldKarpSpec same_endpoints{&inst, 0b0110, 1, 1, {}};
  CHECK_FALSE(solve_held_karp(same_endpoints).feasible);
}

TEST_CASE("collinear-4 optimum is the integral path") {
  MetricInstance inst = collinear4();
  HeldKarpResult r = solve_held_karp(HeldKarpSpec::top_level(inst));
  REQUIRE(r.feasible);
  CHECK(r.value == Rat(3));
  CHECK(r.x.value(VertexPair(0, 1)) == Rat(1));
  CHECK(r.x.value(VertexPair(1, 2)) == Rat(1));
  CHECK(r.x.value(VertexPair(2, 3)) == Rat(1));
  CHECK(r.x.support_size() == 3);

  LpSolution direct = solve(materialized_held_karp(inst));
  REQUIRE(direct.status == LpStatus::Optimal);
  CHECK(direct.value == r.value);
}

TEST_CASE("separation value equals the materialized LP on random instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    MetricInstance inst = MetricInstance::generate(
        seed % 2 ? InstanceFamily::RandomEuclidean
                 : InstanceFamily::GraphMetric,
        5 + static_cast<int>(seed % 3), seed);
    HeldKarpResult lazy = solve_held_karp(HeldKarpSpec::top_level(inst));
    LpSolution direct = solve(materialized_held_karp(inst));
    REQUIRE(lazy.feasible);
    REQUIRE(direct.status == LpStatus::Optimal);
    CHECK(lazy.value == direct.value);
  }
}

TEST_CASE("optima pass the exhaustive cut audit") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    MetricInstance inst = MetricInstance::generate(
        InstanceFamily::RandomEuclidean, 4 + static_cast<int>(seed), seed);
    HeldKarpSpec spec = HeldKarpSpec::top_level(inst);
    HeldKarpResult r = solve_held_karp(spec);
    REQUIRE(r.feasible);
    CHECK(brute_feasible(inst, spec, r.x));
    CHECK_FALSE(separate_point(spec, r.x).has_value());
    // vertex solutions of the relaxation stay sparse
    CHECK(r.x.support_size() <= 2 * inst.n() - 3);
  }
}

TEST_CASE("zero vector violates a degree row first") {
  MetricInstance inst = collinear4();
  auto violation = separate_point(HeldKarpSpec::top_level(inst), EdgeVector{});
  REQUIRE(violation.has_value());
  CHECK(violation->kind == "degree");
}

TEST_CASE("midpoint of two Hamiltonian paths is feasible") {
  MetricInstance inst = collinear4();
  EdgeVector z = collinear4_half_half();
  HeldKarpSpec spec = HeldKarpSpec::top_level(inst);
  CHECK_FALSE(separate_point(spec, z).has_value());
  CHECK(brute_feasible(inst, spec, z));
}

TEST_CASE("every Hamiltonian path vector is feasible") {
  for (int n : {3, 5, 8}) {
    MetricInstance inst =
        MetricInstance::generate(InstanceFamily::RandomEuclidean, n, 17);
    HeldKarpSpec spec = HeldKarpSpec::top_level(inst);
    std::vector<int> mid;
    for (int v = 1; v + 1 < n; ++v) mid.push_back(v);
    do {
      HamiltonianPath p;
      p.order = {0};
      p.order.insert(p.order.end(), mid.begin(), mid.end());
      p.order.push_back(n - 1);
      CHECK_FALSE(separate_point(spec, path_vector(p)).has_value());
    } while (std::next_permutation(mid.begin(), mid.end()));
  }
}

TEST_CASE("extra cuts raise the optimum or make it infeasible") {
  MetricInstance inst = collinear4();
  // {s} intersected with the world is {u}: unsatisfiable
  HeldKarpSpec spec = HeldKarpSpec::top_level(inst);
  spec.extra_cuts.push_back(Cut{0b0001});
  CHECK_FALSE(solve_held_karp(spec).feasible);

  // load >= 3 on {0,1} forces extra crossings
  HeldKarpSpec spec2 = HeldKarpSpec::top_level(inst);
  spec2.extra_cuts.push_back(Cut{0b0011});
  HeldKarpResult r = solve_held_karp(spec2);
  REQUIRE(r.feasible);
  CHECK(r.value > Rat(3));
  CHECK(r.x.load(0b0011) >= Rat(3));
  CHECK(brute_feasible(inst, spec2, r.x));
}

TEST_CASE("extra cut orientation is validated") {
  MetricInstance inst = collinear4();
  HeldKarpSpec spec = HeldKarpSpec::top_level(inst);
  spec.extra_cuts.push_back(Cut{0b1000});  // contains t, misses s
  CHECK_THROWS_AS(solve_held_karp(spec), InvariantError);
}

TEST_CASE("sub-relaxation stays inside its world") {
  MetricInstance inst =
      MetricInstance::generate(InstanceFamily::RandomEuclidean, 8, 5);
  HeldKarpSpec spec{&inst, 0b00111100, 2, 5, {}};
  HeldKarpResult r = solve_held_karp(spec);
  REQUIRE(r.feasible);
  for (const auto& [e, val] : r.x.entries()) {
    CHECK(((spec.world >> e.a) & 1ULL) == 1ULL);
    CHECK(((spec.world >> e.b) & 1ULL) == 1ULL);
    (void)val;
  }
  CHECK(brute_feasible(inst, spec, r.x));
}
