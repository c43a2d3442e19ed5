#include "pathtsp/held_karp.hpp"

#include <algorithm>
#include <map>

#include "pathtsp/errors.hpp"
#include "pathtsp/flow.hpp"

namespace pathtsp {

namespace {

std::vector<int> mask_vertices(std::uint64_t mask) {
  std::vector<int> out;
  for (int v = 0; v < kMaxVertices; ++v)
    if ((mask >> v) & 1ULL) out.push_back(v);
  return out;
}

void validate_spec(const HeldKarpSpec& spec) {
  if (!spec.inst) throw InvariantError("HeldKarpSpec without instance");
  std::uint64_t all = spec.inst->all_vertices_mask();
  if (spec.world == 0 || (spec.world & ~all) != 0)
    throw InvariantError("HeldKarpSpec world outside the vertex set");
  auto inside = [&](int w) {
    return w >= 0 && w < spec.inst->n() && ((spec.world >> w) & 1ULL);
  };
  if (!inside(spec.u) || !inside(spec.v))
    throw InvariantError("HeldKarpSpec endpoints must lie in the world");
  for (const Cut& b : spec.extra_cuts) {
    if (!b.contains(spec.u) || b.contains(spec.v))
      throw InvariantError("extra cut must contain u and miss v");
  }
}

// Row "x(delta(B)) >= 3" restricted to edges inside the world, in the given
// variable indexing.
LpRow cut_row(const std::vector<VertexPair>& vars, std::uint64_t side,
              Rat rhs) {
  LpRow row;
  row.rel = Relation::GreaterEqual;
  row.rhs = std::move(rhs);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    bool ia = (side >> vars[j].a) & 1ULL;
    bool ib = (side >> vars[j].b) & 1ULL;
    if (ia != ib) row.terms.emplace_back(static_cast<int>(j), Rat(1));
  }
  return row;
}

}  // namespace

HeldKarpSpec HeldKarpSpec::top_level(const MetricInstance& inst) {
  return HeldKarpSpec{&inst, inst.all_vertices_mask(), inst.source(),
                      inst.sink(),
                      {}};
}

std::vector<VertexPair> edge_variables(const HeldKarpSpec& spec) {
  std::vector<int> verts = mask_vertices(spec.world);
  std::vector<VertexPair> vars;
  vars.reserve(verts.size() * (verts.size() - 1) / 2);
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      vars.emplace_back(verts[i], verts[j]);
  return vars;
}

namespace {

struct LpContext {
  std::vector<VertexPair> vars;
  std::map<VertexPair, int> index;
  std::vector<int> verts;
  std::vector<int> local;  // vertex id -> local index within world

  explicit LpContext(const HeldKarpSpec& spec)
      : vars(edge_variables(spec)), verts(mask_vertices(spec.world)) {
    for (std::size_t j = 0; j < vars.size(); ++j)
      index[vars[j]] = static_cast<int>(j);
    local.assign(kMaxVertices, -1);
    for (std::size_t i = 0; i < verts.size(); ++i)
      local[verts[i]] = static_cast<int>(i);
  }
};

// Candidate support as a capacitated graph on local vertex indices, with u
// and v optionally merged (for separating the >= 2 family).
CapGraph local_support(const LpContext& ctx, const HeldKarpSpec& spec,
                       const std::vector<Rat>& point, bool contract_uv) {
  CapGraph g;
  g.n = static_cast<int>(ctx.verts.size()) - (contract_uv ? 1 : 0);
  int lu = ctx.local[spec.u];
  int lv = ctx.local[spec.v];
  auto map_vertex = [&](int local) {
    if (!contract_uv) return local;
    if (local == lv) local = lu;  // merge v into u
    if (local > lv) --local;      // close the index gap (u included)
    return local;
  };
  for (std::size_t j = 0; j < ctx.vars.size(); ++j) {
    if (sgn(point[j]) == 0) continue;
    int a = map_vertex(ctx.local[ctx.vars[j].a]);
    int b = map_vertex(ctx.local[ctx.vars[j].b]);
    if (a == b) continue;  // contracted loop
    g.add_edge(a, b, point[j]);
  }
  return g;
}

// Maps a side mask over local (possibly contracted) indices back to a global
// vertex mask.
std::uint64_t lift_side(const LpContext& ctx, const HeldKarpSpec& spec,
                        std::uint64_t side, bool contracted) {
  std::uint64_t out = 0;
  int lu = ctx.local[spec.u];
  int lv = ctx.local[spec.v];
  for (std::size_t i = 0; i < ctx.verts.size(); ++i) {
    int idx = static_cast<int>(i);
    if (contracted) {
      if (idx == lv) idx = lu;
      if (idx > lv) --idx;
    }
    if ((side >> idx) & 1ULL) out |= 1ULL << ctx.verts[i];
  }
  return out;
}

}  // namespace

HeldKarpResult solve_held_karp(const HeldKarpSpec& spec,
                               const SimplexOptions& opts) {
  validate_spec(spec);
  int world_size = __builtin_popcountll(spec.world);

  if (spec.u == spec.v) {
    if (world_size == 1) return {true, EdgeVector{}, Rat(0)};
    return {};  // empty polytope; callers map this to an infinite arc
  }

  LpContext ctx(spec);

  // An extra cut whose trace on the world is {u} or world \ {v} asks for a
  // load of 3 across a degree-1 vertex; unsatisfiable.
  std::uint64_t wv_mask = spec.world & ~(1ULL << spec.v);
  for (const Cut& b : spec.extra_cuts) {
    std::uint64_t trace = b.members & spec.world;
    if (trace == (1ULL << spec.u) || trace == wv_mask) return {};
  }

  // Tiny worlds have a unique feasible point once the trace check above has
  // run: the single edge for two vertices, the u-w-v path for three.
  if (world_size == 2) {
    HeldKarpResult res;
    res.feasible = true;
    res.x.set(VertexPair(spec.u, spec.v), Rat(1));
    res.value = spec.inst->length(spec.u, spec.v);
    return res;
  }
  if (world_size == 3) {
    int w = -1;
    for (int cand : ctx.verts)
      if (cand != spec.u && cand != spec.v) w = cand;
    HeldKarpResult res;
    res.feasible = true;
    res.x.set(VertexPair(spec.u, w), Rat(1));
    res.x.set(VertexPair(w, spec.v), Rat(1));
    res.value = spec.inst->length(spec.u, w) + spec.inst->length(w, spec.v);
    return res;
  }

  LinearProgram lp;
  lp.var_count = static_cast<int>(ctx.vars.size());
  lp.objective.reserve(ctx.vars.size());
  for (const VertexPair& e : ctx.vars)
    lp.objective.push_back(spec.inst->length(e));

  for (int w : ctx.verts) {
    LpRow row;
    row.rel = Relation::Equal;
    row.rhs = (w == spec.u || w == spec.v) ? 1 : 2;
    for (std::size_t j = 0; j < ctx.vars.size(); ++j)
      if (ctx.vars[j].a == w || ctx.vars[j].b == w)
        row.terms.emplace_back(static_cast<int>(j), Rat(1));
    lp.rows.push_back(std::move(row));
  }

  std::vector<SeparationOracle> oracles;

  // extra cuts, checked exhaustively (the family is explicit)
  oracles.push_back([&ctx, &spec](const std::vector<Rat>& point)
                        -> std::optional<LpRow> {
    for (const Cut& b : spec.extra_cuts) {
      Rat load = 0;
      for (std::size_t j = 0; j < ctx.vars.size(); ++j) {
        bool ia = b.contains(ctx.vars[j].a);
        bool ib = b.contains(ctx.vars[j].b);
        if (ia != ib) load += point[j];
      }
      if (load < 3) return cut_row(ctx.vars, b.members & spec.world, Rat(3));
    }
    return std::nullopt;
  });

  // u-v cuts need load >= 1
  oracles.push_back([&ctx, &spec](const std::vector<Rat>& point)
                        -> std::optional<LpRow> {
    CapGraph g = local_support(ctx, spec, point, /*contract_uv=*/false);
    MinCutResult cut = min_st_cut(g, ctx.local[spec.u], ctx.local[spec.v]);
    if (cut.value >= 1) return std::nullopt;
    return cut_row(ctx.vars, lift_side(ctx, spec, cut.side, false), Rat(1));
  });

  // cuts not separating u from v need load >= 2
  if (world_size >= 3) {
    oracles.push_back([&ctx, &spec](const std::vector<Rat>& point)
                          -> std::optional<LpRow> {
      CapGraph g = local_support(ctx, spec, point, /*contract_uv=*/true);
      MinCutResult cut = global_min_cut(g);
      if (cut.value >= 2) return std::nullopt;
      return cut_row(ctx.vars, lift_side(ctx, spec, cut.side, true), Rat(2));
    });
  }

  LpSolution sol = solve_with_separation(lp, oracles, opts);
  if (sol.status == LpStatus::Unbounded)
    throw InvariantError("Held-Karp LP cannot be unbounded");
  if (sol.status == LpStatus::Infeasible) return {};

  HeldKarpResult res;
  res.feasible = true;
  res.value = sol.value;
  for (std::size_t j = 0; j < ctx.vars.size(); ++j)
    if (sgn(sol.point[j]) != 0) res.x.set(ctx.vars[j], sol.point[j]);
  return res;
}

std::optional<HeldKarpViolation> separate_point(const HeldKarpSpec& spec,
                                                const EdgeVector& x) {
  validate_spec(spec);
  int world_size = __builtin_popcountll(spec.world);

  for (const auto& [e, val] : x.entries()) {
    if (!((spec.world >> e.a) & 1ULL) || !((spec.world >> e.b) & 1ULL))
      throw InvariantError("candidate supported outside the world");
    (void)val;
  }

  if (spec.u == spec.v) {
    if (world_size == 1 && x.empty()) return std::nullopt;
    return HeldKarpViolation{"degenerate", {}};
  }

  LpContext ctx(spec);
  std::vector<Rat> point(ctx.vars.size(), Rat(0));
  for (const auto& [e, val] : x.entries()) point[ctx.index.at(e)] = val;

  for (int w : ctx.verts) {
    Rat degree = 0;
    for (std::size_t j = 0; j < ctx.vars.size(); ++j)
      if (ctx.vars[j].a == w || ctx.vars[j].b == w) degree += point[j];
    Rat want = (w == spec.u || w == spec.v) ? 1 : 2;
    if (degree != want) {
      LpRow row;
      row.rel = Relation::Equal;
      row.rhs = want;
      for (std::size_t j = 0; j < ctx.vars.size(); ++j)
        if (ctx.vars[j].a == w || ctx.vars[j].b == w)
          row.terms.emplace_back(static_cast<int>(j), Rat(1));
      return HeldKarpViolation{"degree", std::move(row)};
    }
  }

  for (const Cut& b : spec.extra_cuts) {
    Rat load = x.load(b.members);
    if (load < 3)
      return HeldKarpViolation{
          "extra-cut", cut_row(ctx.vars, b.members & spec.world, Rat(3))};
  }

  {
    CapGraph g = local_support(ctx, spec, point, false);
    MinCutResult cut = min_st_cut(g, ctx.local[spec.u], ctx.local[spec.v]);
    if (cut.value < 1)
      return HeldKarpViolation{
          "uv-cut", cut_row(ctx.vars, lift_side(ctx, spec, cut.side, false),
                            Rat(1))};
  }

  if (world_size >= 3) {
    CapGraph g = local_support(ctx, spec, point, true);
    MinCutResult cut = global_min_cut(g);
    if (cut.value < 2)
      return HeldKarpViolation{
          "nonsep-cut", cut_row(ctx.vars, lift_side(ctx, spec, cut.side, true),
                                Rat(2))};
  }

  return std::nullopt;
}

}  // namespace pathtsp
