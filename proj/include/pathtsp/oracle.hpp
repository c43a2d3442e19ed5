#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

// Ground-truth oracles for tests and the certification layer. These are
// deliberately independent of the solver modules: no shared LP, separation
// or cut-enumeration code, so agreement between the two sides is evidence
// rather than tautology.

struct ExactPathResult {
  Rat length;
  HamiltonianPath path;
};

/// Exact Path TSP by Bellman-Held-Karp bitmask DP; n <= 18.
ExactPathResult exact_path_tsp(const MetricInstance& inst);

struct BGoodViolation {
  Cut cut;
  Rat load;
  int crossing_support_edges = 0;
};

/// A point is good for a cut family when each member cut either carries load
/// at least 3 or carries load exactly 1 on a single integral edge. Returns
/// the first offending cut, or nullopt.
std::optional<BGoodViolation> verify_bgood(const EdgeVector& y,
                                           const std::vector<Cut>& b_family);

struct PhkViolation {
  std::string constraint;
};

/// Exhaustive membership test for the Held-Karp path relaxation on the
/// world, run against both of its descriptions -- the cut form and the
/// degree-bounded spanning-tree form -- which must agree (anything else is
/// an internal error). |world| <= 14.
std::optional<PhkViolation> verify_in_phk(const MetricInstance& inst,
                                          const EdgeVector& x,
                                          std::uint64_t world, int u, int v);

/// Membership in the dominant of the q-join polytope: load >= 1 on every
/// cut with odd intersection with q. Returns a violating side, or nullopt.
/// |q| even; n <= 14.
std::optional<std::uint64_t> verify_join_dominant(const MetricInstance& inst,
                                                  const EdgeVector& x,
                                                  const std::vector<int>& q);

}  // namespace pathtsp
