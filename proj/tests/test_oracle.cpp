#include <algorithm>
#include <random>

#include "doctest.h"
#include "pathtsp/errors.hpp"
#include "pathtsp/oracle.hpp"
#include "test_helpers.hpp"

using namespace pathtsp;
using pathtsp::testing::collinear4;
using pathtsp::testing::collinear4_half_half;
using pathtsp::testing::two_vertex;

namespace {

Rat brute_opt(const MetricInstance& inst) {
  std::vector<int> mid;
  for (int v = 0; v < inst.n(); ++v)
    if (v != inst.source() && v != inst.sink()) mid.push_back(v);
  std::sort(mid.begin(), mid.end());
  Rat best = -1;
  do {
    HamiltonianPath p;
    p.order.push_back(inst.source());
    p.order.insert(p.order.end(), mid.begin(), mid.end());
    p.order.push_back(inst.sink());
    Rat len = path_length(inst, p);
    if (best < 0 || len < best) best = len;
  } while (std::next_permutation(mid.begin(), mid.end()));
  return best;
}

}  // namespace

TEST_CASE("exact oracle on fixtures") {
  ExactPathResult two = exact_path_tsp(two_vertex());
  CHECK(two.length == Rat(5));
  CHECK(two.path.order == std::vector<int>{0, 1});

  ExactPathResult line = exact_path_tsp(collinear4());
  CHECK(line.length == Rat(3));
  CHECK(line.path.order == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("exact oracle agrees with permutation scan") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 25; ++round) {
    int n = 4 + static_cast<int>(rng() % 6);  // up to 9
    MetricInstance inst = MetricInstance::generate(
        round % 3 ? InstanceFamily::RandomEuclidean
                  : InstanceFamily::GraphMetric,
        n, rng());
    ExactPathResult res = exact_path_tsp(inst);
    CHECK(res.length == brute_opt(inst));
    CHECK(path_length(inst, res.path) == res.length);
  }
}

TEST_CASE("bgood verdicts") {
  // a Hamiltonian path vector is good for any family
  EdgeVector path = path_vector(HamiltonianPath{{0, 1, 2, 3}});
  std::vector<Cut> family{Cut{0b0001}, Cut{0b0011}, Cut{0b0111},
                          Cut{0b0101}};
  CHECK_FALSE(verify_bgood(path, family).has_value());

  EdgeVector z = collinear4_half_half();
  auto violation = verify_bgood(z, {Cut{0b0011}});  // load 2
  REQUIRE(violation.has_value());
  CHECK(violation->cut.members == 0b0011);
  CHECK(violation->load == Rat(2));
  // crossing edges are (0,2), (1,2) and (1,3)
  CHECK(violation->crossing_support_edges == 3);

  // load exactly 1 but split across two fractional edges is not good
  EdgeVector split;
  split.set(VertexPair(0, 1), Rat(1, 2));
  split.set(VertexPair(0, 2), Rat(1, 2));
  split.set(VertexPair(1, 2), Rat(1, 2));
  split.set(VertexPair(1, 3), Rat(1, 2));
  split.set(VertexPair(2, 3), Rat(1, 2));
  CHECK(verify_bgood(split, {Cut{0b0001}}).has_value());
}

TEST_CASE("relaxation membership, both descriptions") {
  MetricInstance inst = collinear4();
  std::uint64_t all = inst.all_vertices_mask();

  EdgeVector path = path_vector(HamiltonianPath{{0, 1, 2, 3}});
  CHECK_FALSE(verify_in_phk(inst, path, all, 0, 3).has_value());
  CHECK_FALSE(
      verify_in_phk(inst, collinear4_half_half(), all, 0, 3).has_value());

  CHECK(verify_in_phk(inst, EdgeVector{}, all, 0, 3).has_value());

  // tour-like point is not a path point (degree 2 at the endpoints)
  EdgeVector tour;
  tour.set(VertexPair(0, 1), Rat(1));
  tour.set(VertexPair(1, 2), Rat(1));
  tour.set(VertexPair(2, 3), Rat(1));
  tour.set(VertexPair(0, 3), Rat(1));
  CHECK(verify_in_phk(inst, tour, all, 0, 3).has_value());

  // degenerate worlds
  CHECK_FALSE(verify_in_phk(inst, EdgeVector{}, 0b0100, 2, 2).has_value());
  EdgeVector non_zero;
  non_zero.set(VertexPair(1, 2), Rat(1));
  CHECK(verify_in_phk(inst, non_zero, 0b0110, 1, 1).has_value());
  CHECK(verify_in_phk(inst, EdgeVector{}, 0b0110, 1, 1).has_value());
}

TEST_CASE("sub-world membership") {
  MetricInstance inst = collinear4();
  EdgeVector x;
  x.set(VertexPair(1, 2), Rat(1));
  CHECK_FALSE(verify_in_phk(inst, x, 0b0110, 1, 2).has_value());
  CHECK(verify_in_phk(inst, x, 0b0111, 1, 2).has_value());  // 0 isolated
}

TEST_CASE("join dominant membership") {
  MetricInstance inst = collinear4();
  // no parity defect: everything is a member
  CHECK_FALSE(verify_join_dominant(inst, EdgeVector{}, {}).has_value());

  // half-integral square, parity at two opposite corners
  EdgeVector half_square;
  half_square.set(VertexPair(0, 1), Rat(1, 2));
  half_square.set(VertexPair(1, 3), Rat(1, 2));
  half_square.set(VertexPair(3, 2), Rat(1, 2));
  half_square.set(VertexPair(2, 0), Rat(1, 2));
  CHECK_FALSE(
      verify_join_dominant(inst, half_square, {0, 3}).has_value());

  // dropping one side of the square exposes an odd cut of load 1/2
  EdgeVector broken = half_square;
  broken.set(VertexPair(0, 1), Rat(0));
  auto violation = verify_join_dominant(inst, broken, {0, 3});
  REQUIRE(violation.has_value());
  CHECK(broken.load(*violation) < 1);
}

TEST_CASE("oracle size guards") {
  MetricInstance big =
      MetricInstance::generate(InstanceFamily::GraphMetric, 20, 1);
  CHECK_THROWS_AS(exact_path_tsp(big), ResourceError);
  CHECK_THROWS_AS(
      verify_in_phk(big, EdgeVector{}, big.all_vertices_mask(), 0, 19),
      ResourceError);
  CHECK_THROWS_AS(verify_join_dominant(big, EdgeVector{}, {0, 1}),
                  ResourceError);
}
