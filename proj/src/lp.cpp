#include "pathtsp/lp.hpp"

#include <algorithm>
#include <cassert>

#include "pathtsp/errors.hpp"

namespace pathtsp {

Rat evaluate_terms(const std::vector<std::pair<int, Rat>>& terms,
                   const std::vector<Rat>& point) {
  Rat total = 0;
  for (const auto& [var, coef] : terms) total += coef * point[var];
  return total;
}

bool row_violated(const LpRow& row, const std::vector<Rat>& point) {
  Rat lhs = evaluate_terms(row.terms, point);
  if (row.rel == Relation::GreaterEqual) return lhs < row.rhs;
  return lhs != row.rhs;
}

namespace {

// Full-tableau two-phase simplex, Bland's rule in both phases. Supports
// appending a violated row after an optimal solve and re-feasibilizing via a
// single fresh artificial, which is what makes row generation cheap.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts)
      : opts_(opts), struct_count_(lp.var_count) {
    cost_.assign(lp.objective.begin(), lp.objective.end());
    // mpq arithmetic silently misbehaves on non-canonical input, so
    // normalize everything that crosses the API boundary.
    for (Rat& c : cost_) c.canonicalize();
    if (static_cast<int>(cost_.size()) != struct_count_)
      throw InvariantError("objective size does not match variable count");
    cols_ = struct_count_;
    artificial_.assign(struct_count_, false);
    for (const auto& row : lp.rows) append_raw_row(row);
  }

  LpSolution solve() {
    if (!phase_one()) return {LpStatus::Infeasible, {}, 0};
    build_objective_row();
    if (!phase_two()) return {LpStatus::Unbounded, {}, 0};
    return extract();
  }

  // Precondition: the previous call returned Optimal.
  LpSolution add_row_and_resolve(const LpRow& row) {
    int r = append_reduced_row(row);
    if (r < 0) return {LpStatus::Infeasible, {}, 0};
    if (basis_[r] >= 0 && artificial_[basis_[r]]) {
      // Minimize the one new artificial to regain feasibility.
      phase_obj_.assign(cols_ + 1, Rat(0));
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) phase_obj_[j] = -tab_[r][j];
      phase_obj_[basis_[r]] = 0;
      if (!run_simplex(phase_obj_, /*allow_artificial=*/false))
        throw InvariantError("phase-1 subproblem unbounded");
      if (sgn(phase_obj_[cols_]) != 0) return {LpStatus::Infeasible, {}, 0};
      if (!drive_out_artificials()) {
        // dead row; nothing else to do
      }
    }
    if (!phase_two()) return {LpStatus::Unbounded, {}, 0};
    return extract();
  }

 private:
  // ---- construction ---------------------------------------------------

  int new_column(bool artificial) {
    for (auto& row : tab_) row.insert(row.end() - 1, Rat(0));
    if (!obj_.empty()) obj_.insert(obj_.end() - 1, Rat(0));
    artificial_.push_back(artificial);
    return cols_++;
  }

  // Appends an input row verbatim (used before the first solve).
  void append_raw_row(const LpRow& row) {
    std::vector<Rat> dense(cols_ + 1, Rat(0));
    for (const auto& [var, coef] : row.terms) {
      if (var < 0 || var >= struct_count_)
        throw InvariantError("row references undeclared variable");
      Rat c = coef;
      c.canonicalize();
      dense[var] += c;
    }
    dense[cols_] = row.rhs;
    dense[cols_].canonicalize();
    tab_.push_back(std::move(dense));
    basis_.push_back(-1);
    dead_.push_back(false);
    finish_row(static_cast<int>(tab_.size()) - 1, row.rel);
  }

  // Appends a row after solves have happened: expresses it in the current
  // basis first. Returns the row index, or -1 if it is an immediately
  // infeasible all-zero row.
  int append_reduced_row(const LpRow& row) {
    std::vector<Rat> dense(cols_ + 1, Rat(0));
    for (const auto& [var, coef] : row.terms) {
      if (var < 0 || var >= struct_count_)
        throw InvariantError("row references undeclared variable");
      Rat c = coef;
      c.canonicalize();
      dense[var] += c;
    }
    dense[cols_] = row.rhs;
    dense[cols_].canonicalize();
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (dead_[r] || basis_[r] < 0) continue;
      const Rat& factor = dense[basis_[r]];
      if (sgn(factor) == 0) continue;
      Rat f = factor;
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) dense[j] -= f * tab_[r][j];
      dense[basis_[r]] = 0;
    }
    bool all_zero = true;
    for (int j = 0; j < cols_ && all_zero; ++j)
      if (sgn(dense[j]) != 0) all_zero = false;
    if (all_zero) {
      // The row is a combination of existing ones: either implied or an
      // outright contradiction.
      bool satisfied = row.rel == Relation::Equal ? sgn(dense[cols_]) == 0
                                                  : sgn(dense[cols_]) <= 0;
      return satisfied ? append_trivial_row() : -1;
    }
    tab_.push_back(std::move(dense));
    basis_.push_back(-1);
    dead_.push_back(false);
    finish_row(static_cast<int>(tab_.size()) - 1, row.rel);
    return static_cast<int>(tab_.size()) - 1;
  }

  // A satisfied row that reduced to 0 = 0; keep shape consistent by adding a
  // dead placeholder so callers get a valid index.
  int append_trivial_row() {
    tab_.emplace_back(cols_ + 1, Rat(0));
    basis_.push_back(-1);
    dead_.push_back(true);
    return static_cast<int>(tab_.size()) - 1;
  }

  // Gives row r its surplus / artificial columns and an initial basic
  // variable. Normalizes rhs >= 0.
  void finish_row(int r, Relation rel) {
    if (rel == Relation::GreaterEqual) {
      int s = new_column(false);
      tab_[r][s] = -1;
    }
    if (sgn(tab_[r][cols_]) < 0)
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) tab_[r][j] = -tab_[r][j];

    // A +1 column that is zero in every other row can serve as the basis.
    if (rel == Relation::GreaterEqual) {
      int s = cols_ - 1;
      if (sgn(tab_[r][s]) > 0) {
        basis_[r] = s;
        return;
      }
    }
    int a = new_column(true);
    tab_[r][a] = 1;
    basis_[r] = a;
  }

  // ---- pivoting --------------------------------------------------------

  void pivot(int r, int s) {
    ++pivots_;
    Rat piv = tab_[r][s];
    if (sgn(piv) == 0) throw InvariantError("pivot on zero element");
    if (piv != 1)
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) tab_[r][j] /= piv;
    tab_[r][s] = 1;
    auto eliminate = [&](std::vector<Rat>& row) {
      const Rat& factor = row[s];
      if (sgn(factor) == 0) return;
      Rat f = factor;
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) row[j] -= f * tab_[r][j];
      row[s] = 0;
    };
    for (std::size_t i = 0; i < tab_.size(); ++i)
      if (static_cast<int>(i) != r && !dead_[i]) eliminate(tab_[i]);
    if (!phase_obj_.empty()) eliminate(phase_obj_);
    if (!obj_.empty()) eliminate(obj_);
    basis_[r] = s;
    check_bit_guard();
  }

  void check_bit_guard() const {
    for (const auto& row : tab_)
      if (rat_bits(row[cols_]) > opts_.max_rational_bits)
        throw ResourceError("LP rational bit-size guard exceeded (" +
                            std::to_string(opts_.max_rational_bits) +
                            " bits)");
  }

  // Bland: entering = lowest-numbered column with negative reduced cost;
  // leaving = min ratio, ties broken by lowest basic variable index.
  bool run_simplex(std::vector<Rat>& objrow, bool allow_artificial) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!allow_artificial && artificial_[j]) continue;
        if (sgn(objrow[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      Rat best_ratio = 0;
      for (std::size_t r = 0; r < tab_.size(); ++r) {
        if (dead_[r]) continue;
        if (sgn(tab_[r][enter]) <= 0) continue;
        Rat ratio = tab_[r][cols_] / tab_[r][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = static_cast<int>(r);
          best_ratio = std::move(ratio);
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  bool phase_one() {
    bool any_artificial = false;
    for (std::size_t r = 0; r < tab_.size(); ++r)
      if (!dead_[r] && artificial_[basis_[r]]) any_artificial = true;
    if (!any_artificial) return true;

    phase_obj_.assign(cols_ + 1, Rat(0));
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (dead_[r] || !artificial_[basis_[r]]) continue;
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) phase_obj_[j] -= tab_[r][j];
      phase_obj_[basis_[r]] = 0;
    }
    if (!run_simplex(phase_obj_, /*allow_artificial=*/true))
      throw InvariantError("phase 1 unbounded");
    if (sgn(phase_obj_[cols_]) != 0) return false;  // infeasible
    drive_out_artificials();
    phase_obj_.clear();
    return true;
  }

  // Pivots basic artificials (at value zero) out of the basis; rows that
  // cannot be repaired are redundant and get marked dead.
  bool drive_out_artificials() {
    bool all_out = true;
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (dead_[r] || !artificial_[basis_[r]]) continue;
      int enter = -1;
      for (int j = 0; j < cols_; ++j)
        if (!artificial_[j] && sgn(tab_[r][j]) != 0) {
          enter = j;
          break;
        }
      if (enter >= 0) {
        pivot(static_cast<int>(r), enter);
      } else {
        dead_[r] = true;
        std::fill(tab_[r].begin(), tab_[r].end(), Rat(0));
        all_out = false;
      }
    }
    return all_out;
  }

  void build_objective_row() {
    obj_.assign(cols_ + 1, Rat(0));
    for (int j = 0; j < struct_count_; ++j) obj_[j] = cost_[j];
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (dead_[r]) continue;
      int b = basis_[r];
      if (b >= struct_count_ || sgn(cost_[b]) == 0) continue;
      Rat f = cost_[b];
      for (int j = 0; j <= cols_; ++j)
        if (sgn(tab_[r][j]) != 0) obj_[j] -= f * tab_[r][j];
      obj_[b] = 0;
    }
  }

  bool phase_two() {
    if (obj_.empty()) build_objective_row();
    phase_obj_.clear();
    return run_simplex(obj_, /*allow_artificial=*/false);
  }

  LpSolution extract() const {
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.point.assign(struct_count_, Rat(0));
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (dead_[r]) continue;
      int b = basis_[r];
      if (b >= 0 && b < struct_count_) sol.point[b] = tab_[r][cols_];
    }
    sol.value = 0;
    for (int j = 0; j < struct_count_; ++j)
      sol.value += cost_[j] * sol.point[j];
    return sol;
  }

  SimplexOptions opts_;
  int struct_count_;
  int cols_ = 0;
  std::vector<Rat> cost_;
  std::vector<std::vector<Rat>> tab_;  // rows, each cols_+1 wide (rhs last)
  std::vector<int> basis_;
  std::vector<bool> dead_;
  std::vector<bool> artificial_;
  std::vector<Rat> phase_obj_;
  std::vector<Rat> obj_;
  long pivots_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts) {
  Simplex spx(lp, opts);
  return spx.solve();
}

LpSolution solve_with_separation(const LinearProgram& lp,
                                 const std::vector<SeparationOracle>& oracles,
                                 const SimplexOptions& opts) {
  Simplex spx(lp, opts);
  LpSolution sol = spx.solve();
  while (sol.status == LpStatus::Optimal) {
    std::optional<LpRow> cut;
    for (const auto& oracle : oracles) {
      cut = oracle(sol.point);
      if (cut) break;
    }
    if (!cut) return sol;
    if (!row_violated(*cut, sol.point))
      throw InvariantError(
          "separation oracle returned a row the candidate does not violate");
    sol = spx.add_row_and_resolve(*cut);
  }
  return sol;
}

}  // namespace pathtsp
