#include "pathtsp/cut_enum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <unordered_set>

#include "pathtsp/errors.hpp"
#include "pathtsp/flow.hpp"

namespace pathtsp {

CutEnumMethod cut_enum_method_from_string(std::string_view name) {
  if (name == "brute") return CutEnumMethod::Brute;
  if (name == "contraction") return CutEnumMethod::Contraction;
  if (name == "auto") return CutEnumMethod::Auto;
  throw ParseError("unknown cut-enum method '" + std::string(name) + "'");
}

std::string cut_enum_method_to_string(CutEnumMethod m) {
  switch (m) {
    case CutEnumMethod::Brute: return "brute";
    case CutEnumMethod::Contraction: return "contraction";
    case CutEnumMethod::Auto: return "auto";
  }
  return "?";
}

namespace {

constexpr int kBruteLimit = 22;

void check_st_cut_lower_bound(const MetricInstance& inst,
                              const EdgeVector& z) {
  CapGraph g = support_graph(inst.n(), z);
  MinCutResult cut = min_st_cut(g, inst.source(), inst.sink());
  if (cut.value < 1)
    throw InvariantError(
        "s-t cut of load " + rat_to_string(cut.value) +
        " certifies the point is not a Held-Karp solution (witness side " +
        std::to_string(cut.side) + ")");
}

std::vector<EnumeratedCut> brute_enumerate(const MetricInstance& inst,
                                           const EdgeVector& z) {
  int n = inst.n();
  int s = inst.source();
  int t = inst.sink();

  std::vector<std::vector<std::pair<int, Rat>>> adj(n);
  for (const auto& [e, v] : z.entries()) {
    adj[e.a].emplace_back(e.b, v);
    adj[e.b].emplace_back(e.a, v);
  }

  std::vector<int> free_verts;
  for (int v = 0; v < n; ++v)
    if (v != s && v != t) free_verts.push_back(v);
  int k = static_cast<int>(free_verts.size());

  std::vector<EnumeratedCut> found;
  std::uint64_t side = 1ULL << s;
  Rat load = z.load(side);
  auto consider = [&]() {
    if (load < 1)
      throw InvariantError(
          "s-t cut of load " + rat_to_string(load) +
          " certifies the point is not a Held-Karp solution (witness side " +
          std::to_string(side) + ")");
    if (load < 3) found.push_back({Cut{side}, load});
  };
  consider();

  // Gray-code walk over the free vertices with incremental load updates.
  std::uint64_t pick = 0;
  std::uint64_t limit = 1ULL << k;
  for (std::uint64_t step = 1; step < limit; ++step) {
    int bit = __builtin_ctzll(step);
    std::uint64_t prev = pick;
    pick ^= 1ULL << bit;
    int w = free_verts[bit];
    bool entering = (pick >> bit) & 1ULL;
    (void)prev;
    for (const auto& [x, val] : adj[w]) {
      bool x_inside = (side >> x) & 1ULL;
      // w flips sides: edges to the side w joins become internal, edges to
      // the side w leaves start crossing.
      if (x_inside == entering) load -= val;
      else load += val;
    }
    side ^= 1ULL << w;
    consider();
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.load != b.load) return a.load < b.load;
    return a.cut.members < b.cut.members;
  });
  return found;
}

struct TrialGraph {
  int n = 0;
  std::vector<int> eu, ev;
  std::vector<double> weight;
  double total_weight = 0;
};

// splittable per-trial generator; cheap to seed compared to a full Mersenne
// twister, which matters at n^4 log n trials
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double next_unit() { return (next() >> 11) * 0x1.0p-53; }
};

struct TrialScratch {
  std::vector<int> parent;
  std::vector<std::uint64_t> group;
  std::vector<int> alive;
};

// One capacity-biased contraction down to at most four supernodes, followed
// by an enumeration of the bipartitions of the survivors. Near-minimum cuts
// (below twice the minimum) survive to that stage with probability
// Omega(n^-4), which is what the trial count is calibrated against.
void run_trial(const TrialGraph& g, std::uint64_t trial_seed, int s, int t,
               std::uint64_t all, std::unordered_set<std::uint64_t>& candidates,
               TrialScratch& scratch) {
  SplitMix rng{trial_seed};
  int m = static_cast<int>(g.eu.size());

  scratch.parent.resize(g.n);
  scratch.group.resize(g.n);
  auto& parent = scratch.parent;
  auto& group = scratch.group;
  for (int v = 0; v < g.n; ++v) {
    parent[v] = v;
    group[v] = 1ULL << v;
  }
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };

  auto& alive = scratch.alive;
  alive.resize(m);
  for (int e = 0; e < m; ++e) alive[e] = e;
  double total = g.total_weight;

  int components = g.n;
  while (components > 4) {
    if (total <= 1e-12 || alive.empty()) return;  // cannot contract further
    double r = rng.next_unit() * total;
    int chosen = -1;
    // total may still count loop edges not yet swept out; a landing beyond
    // the live mass just resamples
    for (std::size_t idx = 0; idx < alive.size();) {
      int e = alive[idx];
      if (find(g.eu[e]) == find(g.ev[e])) {
        total -= g.weight[e];
        alive[idx] = alive.back();
        alive.pop_back();
        continue;
      }
      r -= g.weight[e];
      if (r <= 0) {
        chosen = e;
        break;
      }
      ++idx;
    }
    if (chosen < 0) continue;
    int a = find(g.eu[chosen]);
    int b = find(g.ev[chosen]);
    parent[b] = a;
    group[a] |= group[b];
    --components;
  }

  int roots[4];
  int rc = 0;
  for (int v = 0; v < g.n; ++v)
    if (find(v) == v) roots[rc++] = v;

  // inter-supernode weights for the cheap prefilter
  double w[4][4] = {};
  for (int e = 0; e < m; ++e) {
    int a = find(g.eu[e]);
    int b = find(g.ev[e]);
    if (a == b) continue;
    int ia = 0, ib = 0;
    for (int i = 0; i < rc; ++i) {
      if (roots[i] == a) ia = i;
      if (roots[i] == b) ib = i;
    }
    w[ia][ib] += g.weight[e];
    w[ib][ia] += g.weight[e];
  }

  for (int sub = 1; sub < (1 << rc) - 1; ++sub) {
    double crossing = 0;
    for (int i = 0; i < rc; ++i)
      for (int j = i + 1; j < rc; ++j)
        if (((sub >> i) & 1) != ((sub >> j) & 1)) crossing += w[i][j];
    if (crossing >= 4.25) continue;  // exact load certainly >= 4
    std::uint64_t side = 0;
    for (int i = 0; i < rc; ++i)
      if ((sub >> i) & 1) side |= group[roots[i]];
    bool has_s = (side >> s) & 1ULL;
    bool has_t = (side >> t) & 1ULL;
    if (has_s == has_t) continue;
    if (!has_s) side = all & ~side;  // canonical: the side containing s
    candidates.insert(side);
  }
}

std::vector<EnumeratedCut> contraction_enumerate(const MetricInstance& inst,
                                                 const EdgeVector& z,
                                                 std::uint64_t seed,
                                                 double trial_factor,
                                                 int threads, long* trials) {
  int n = inst.n();
  std::uint64_t all = inst.all_vertices_mask();

  // augmented graph: support plus a unit {s,t} edge; every cut has load >= 2
  // there and the target cuts have load < 4
  TrialGraph g;
  g.n = n;
  for (const auto& [e, v] : z.entries()) {
    g.eu.push_back(e.a);
    g.ev.push_back(e.b);
    g.weight.push_back(rat_to_double(v));
  }
  g.eu.push_back(inst.source());
  g.ev.push_back(inst.sink());
  g.weight.push_back(1.0);
  for (double w : g.weight) g.total_weight += w;

  long count = static_cast<long>(std::ceil(
      trial_factor * std::pow(n, 4) * std::log(std::max(n, 2))));
  if (trials) *trials = count;

  int workers = std::max(1, threads);
  std::vector<std::unordered_set<std::uint64_t>> partial(workers);
  auto run_range = [&](int w) {
    long lo = count * w / workers;
    long hi = count * (w + 1) / workers;
    for (long trial = lo; trial < hi; ++trial)
      run_trial(g, split_seed(seed, static_cast<std::uint64_t>(trial)),
                inst.source(), inst.sink(), all, partial[w]);
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (auto& th : pool) th.join();
  }

  std::unordered_set<std::uint64_t> merged;
  for (auto& p : partial) merged.insert(p.begin(), p.end());

  std::vector<EnumeratedCut> found;
  for (std::uint64_t raw : merged) {
    std::uint64_t side = raw & all;
    Rat load = z.load(side);
    if (load < 1)
      throw InvariantError(
          "s-t cut of load " + rat_to_string(load) +
          " certifies the point is not a Held-Karp solution (witness side " +
          std::to_string(side) + ")");
    if (load < 3) found.push_back({Cut{side}, std::move(load)});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.load != b.load) return a.load < b.load;
    return a.cut.members < b.cut.members;
  });
  return found;
}

}  // namespace

std::vector<EnumeratedCut> enumerate_b_cuts(const MetricInstance& inst,
                                            const EdgeVector& z,
                                            CutEnumMethod method,
                                            std::uint64_t seed,
                                            double trial_factor, int threads,
                                            CutEnumStats* stats) {
  CutEnumMethod effective = method;
  if (method == CutEnumMethod::Auto)
    effective = inst.n() <= kBruteLimit ? CutEnumMethod::Brute
                                        : CutEnumMethod::Contraction;
  if (effective == CutEnumMethod::Brute && inst.n() > kBruteLimit)
    throw ResourceError("brute cut enumeration is limited to 22 vertices");

  if (stats) {
    stats->method_used = effective;
    stats->seed = seed;
    stats->trials = 0;
  }

  if (effective == CutEnumMethod::Brute) return brute_enumerate(inst, z);

  check_st_cut_lower_bound(inst, z);
  long trials = 0;
  auto cuts = contraction_enumerate(inst, z, seed, trial_factor, threads,
                                    &trials);
  if (stats) stats->trials = trials;
  return cuts;
}

bool verify_cut_count_bound(const MetricInstance& inst,
                            const std::vector<EnumeratedCut>& cuts) {
  unsigned long n = static_cast<unsigned long>(inst.n());
  return cuts.size() <= n * n * n * n;
}

}  // namespace pathtsp
