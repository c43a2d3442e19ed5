#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pathtsp/rational.hpp"

namespace pathtsp {

enum class Relation { GreaterEqual, Equal };

/// One constraint: sum of terms (var index, coefficient) REL rhs.
struct LpRow {
  std::vector<std::pair<int, Rat>> terms;
  Relation rel = Relation::GreaterEqual;
  Rat rhs = 0;
};

/// Minimization LP over nonnegative variables.
struct LinearProgram {
  int var_count = 0;
  std::vector<Rat> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> point;  // structural variables; a vertex of the polyhedron
  Rat value = 0;
};

struct SimplexOptions {
  /// Abort with ResourceError if any tableau rational outgrows this.
  std::size_t max_rational_bits = kDefaultRationalBitLimit;
};

Rat evaluate_terms(const std::vector<std::pair<int, Rat>>& terms,
                   const std::vector<Rat>& point);

/// True if `point` strictly violates `row` (exact comparison).
bool row_violated(const LpRow& row, const std::vector<Rat>& point);

/// Two-phase primal simplex with Bland's rule over exact rationals. The
/// returned point is a basic solution, i.e. a vertex of the constraint
/// polyhedron.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Given a candidate point, returns a strictly violated row or nullopt for
/// "feasible". Oracles must accept every point satisfying all rows they can
/// emit.
using SeparationOracle =
    std::function<std::optional<LpRow>(const std::vector<Rat>&)>;

/// Row generation: solve, query oracles in order on the optimum, add the
/// first violated row (warm-starting from the previous basis), repeat until
/// every oracle reports feasible. An oracle returning a row that the current
/// point does not violate is a contract breach and aborts.
LpSolution solve_with_separation(const LinearProgram& lp,
                                 const std::vector<SeparationOracle>& oracles,
                                 const SimplexOptions& opts = {});

}  // namespace pathtsp
