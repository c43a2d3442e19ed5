#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/lp.hpp"

namespace pathtsp {

/// Describes the Held-Karp path relaxation on the induced subgraph of the
/// vertices in `world`, with endpoints u, v in `world`, plus side
/// constraints x(delta(B)) >= 3 for each extra cut. The top-level relaxation
/// is world = V, u = s, v = t, no extra cuts.
struct HeldKarpSpec {
  const MetricInstance* inst = nullptr;
  std::uint64_t world = 0;
  int u = -1;
  int v = -1;
  std::vector<Cut> extra_cuts;  // each satisfies u in B, v not in B

  static HeldKarpSpec top_level(const MetricInstance& inst);
};

struct HeldKarpResult {
  bool feasible = false;
  EdgeVector x;  // support within the induced edge set
  Rat value = 0;
};

/// Exact optimum of the relaxation via row generation: explicit degree
/// equalities plus separation for the two exponential cut families and the
/// listed extra cuts. Degenerate endpoint cases follow the convention for
/// u = v: a single vertex admits only the zero vector (value 0); two or more
/// vertices make the polytope empty.
HeldKarpResult solve_held_karp(const HeldKarpSpec& spec,
                               const SimplexOptions& opts = {});

struct HeldKarpViolation {
  std::string kind;  // "degree" | "extra-cut" | "uv-cut" | "nonsep-cut" | ...
  LpRow row;         // in edge-variable indices of `edge_variables(spec)`
};

/// The complete-graph edges within spec.world, in canonical order; this is
/// the variable indexing used by LP rows for the spec.
std::vector<VertexPair> edge_variables(const HeldKarpSpec& spec);

/// Checks a candidate point against every constraint class and returns the
/// first strict violation in the order: degree, extra cuts, u-v cuts,
/// non-separating cuts. nullopt certifies feasibility.
std::optional<HeldKarpViolation> separate_point(const HeldKarpSpec& spec,
                                                const EdgeVector& x);

}  // namespace pathtsp
