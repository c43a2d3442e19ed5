// Acceptance suite: one pass/fail line per guarantee, every comparison an
// exact rational one. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <vector>

#include "pathtsp/cut_enum.hpp"
#include "pathtsp/errors.hpp"
#include "pathtsp/flow.hpp"
#include "pathtsp/held_karp.hpp"
#include "pathtsp/matching.hpp"
#include "pathtsp/oracle.hpp"
#include "pathtsp/parallel.hpp"
#include "pathtsp/pipeline.hpp"
#include "test_helpers.hpp"

using namespace pathtsp;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + why;
  }
};

void print_line(const Criterion& c) {
  std::printf("[%s] %-28s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
              c.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// size mix for the main sweep: full coverage of 5..14, weighted small
std::vector<int> sweep_sizes() {
  std::vector<int> sizes;
  for (int n = 5; n <= 9; ++n) sizes.insert(sizes.end(), 30, n);
  sizes.insert(sizes.end(), 14, 10);
  sizes.insert(sizes.end(), 12, 11);
  sizes.insert(sizes.end(), 10, 12);
  sizes.insert(sizes.end(), 8, 13);
  sizes.insert(sizes.end(), 6, 14);
  return sizes;  // 200 instances
}

struct SweepResult {
  bool ok = false;
  std::string error;
  SolveReport zen;
  SolveReport hoo;
};

bool audit_passed(const SolveReport& report, const std::string& name,
                  bool must_exist) {
  for (const AuditCheck& a : report.audits)
    if (a.name == name) return a.pass;
  return !must_exist;
}

}  // namespace

// ---------------------------------------------------------------------------

int main() {
  auto wall0 = std::chrono::steady_clock::now();
  std::vector<Criterion> criteria;

  // ---- main sweep: 200 instances per family, zenklusen + hoogeveen -------
  const std::vector<InstanceFamily> families{InstanceFamily::RandomEuclidean,
                                             InstanceFamily::GraphMetric};
  std::vector<int> sizes = sweep_sizes();
  std::size_t per_family = sizes.size();
  std::vector<SweepResult> sweep(per_family * families.size());

  parallel_for(sweep.size(), 2, [&](std::size_t idx) {
    InstanceFamily family = families[idx / per_family];
    std::size_t slot = idx % per_family;
    int n = sizes[slot];
    std::uint64_t seed = split_seed(2026, idx);
    SweepResult& out = sweep[idx];
    try {
      MetricInstance inst = MetricInstance::generate(family, n, seed);
      PipelineOptions options;
      options.audit = AuditLevel::Full;
      options.threads = 1;
      options.seed = split_seed(seed, 1);
      options.family = family_to_string(family);
      options.instance_seed = seed;
      out.zen = run_pipeline(inst, options);
      options.mode = SolveMode::Hoogeveen;
      out.hoo = run_pipeline(inst, options);
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  std::printf("# sweep of %zu instances done after %.1fs\n", sweep.size(),
              seconds_since(wall0));

  {
    Criterion c{"approximation-guarantee"};
    int checked = 0;
    Rat worst = 0;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      const SweepResult& r = sweep[i];
      if (!r.ok) {
        c.fail("run " + std::to_string(i) + " errored: " + r.error);
        continue;
      }
      if (!r.zen.opt_length) {
        c.fail("run " + std::to_string(i) + " missing oracle value");
        continue;
      }
      ++checked;
      if (2 * r.zen.final_length > 3 * *r.zen.opt_length)
        c.fail(r.zen.instance_name + ": " +
               rat_to_string(r.zen.final_length) + " > 3/2 * " +
               rat_to_string(*r.zen.opt_length));
      if (*r.zen.ratio_final_over_opt > worst)
        worst = *r.zen.ratio_final_over_opt;
    }
    if (c.pass)
      c.detail = "final/OPT <= 3/2 on " + std::to_string(checked) +
                 " runs; max ratio " + std::to_string(rat_to_double(worst));
    criteria.push_back(c);
    print_line(c);
  }

  {
    Criterion c{"proof-chain-inequalities"};
    int checked = 0;
    for (const SweepResult& r : sweep) {
      if (!r.ok) {
        c.fail("errored run");
        continue;
      }
      const SolveReport& z = r.zen;
      ++checked;
      if (!(*z.tree_len <= *z.y_length && *z.y_length <= *z.opt_length))
        c.fail(z.instance_name + ": tree/y/OPT chain broken");
      if (!(4 * *z.join_len <= *z.hk_value + *z.y_length))
        c.fail(z.instance_name + ": join exceeds (hk + y)/4");
      if (!audit_passed(z, "join-dominant", true))
        c.fail(z.instance_name + ": z/2 left the join dominant");
    }
    if (c.pass)
      c.detail = "tree<=y<=OPT, 4*join<=hk+y, z/2 dominant on " +
                 std::to_string(checked) + " runs";
    criteria.push_back(c);
    print_line(c);
  }

  {
    Criterion c{"dp-correctness"};
    int exhaustive = 0;
    for (const SweepResult& r : sweep) {
      if (!r.ok) {
        c.fail("errored run");
        continue;
      }
      const SolveReport& z = r.zen;
      if (*z.d_star != *z.y_length)
        c.fail(z.instance_name + ": d* != ell(y)");
      if (!audit_passed(z, "y-in-relaxation-exhaustive", true))
        c.fail(z.instance_name + ": y failed the relaxation check");
      if (!audit_passed(z, "y-is-good", true))
        c.fail(z.instance_name + ": y not good for its family");
      if (z.n <= 9) {
        ++exhaustive;
        if (!audit_passed(z, "dstar-minimal-over-paths", true))
          c.fail(z.instance_name + ": some Hamiltonian path beats d*");
      }
    }
    if (c.pass)
      c.detail = "d*=ell(y), y in relaxation and good everywhere; " +
                 std::to_string(exhaustive) + " exhaustive path scans";
    criteria.push_back(c);
    print_line(c);
  }

  {
    Criterion c{"support-sparsity"};
    for (const SweepResult& r : sweep) {
      if (!r.ok) {
        c.fail("errored run");
        continue;
      }
      if (*r.zen.hk_support > 2 * r.zen.n - 3)
        c.fail(r.zen.instance_name + ": support " +
               std::to_string(*r.zen.hk_support));
    }
    if (c.pass) c.detail = "|supp(x*)| <= 2n-3 on every top-level solve";
    criteria.push_back(c);
    print_line(c);
  }

  {
    Criterion c{"baseline-sanity"};
    Rat worst_zen = 0, worst_hoo = 0;
    for (const SweepResult& r : sweep) {
      if (!r.ok) {
        c.fail("errored run");
        continue;
      }
      if (3 * r.hoo.final_length > 5 * *r.hoo.opt_length)
        c.fail(r.hoo.instance_name + ": baseline above 5/3");
      if (*r.hoo.ratio_final_over_opt > worst_hoo)
        worst_hoo = *r.hoo.ratio_final_over_opt;
      if (*r.zen.ratio_final_over_opt > worst_zen)
        worst_zen = *r.zen.ratio_final_over_opt;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max ratios: zenklusen %.6f, hoogeveen %.6f (bound 5/3)",
                  rat_to_double(worst_zen), rat_to_double(worst_hoo));
    if (c.pass) c.detail = buf;
    criteria.push_back(c);
    print_line(c);
  }

  // ---- cut enumeration: brute vs contraction over 50 seeds ---------------
  {
    auto t0 = std::chrono::steady_clock::now();
    Criterion c{"cut-enumeration"};
    std::vector<int> enum_sizes;
    for (int n = 5; n <= 9; ++n) enum_sizes.insert(enum_sizes.end(), 15, n);
    enum_sizes.insert(enum_sizes.end(), 8, 10);
    enum_sizes.insert(enum_sizes.end(), 6, 11);
    enum_sizes.insert(enum_sizes.end(), 5, 12);
    enum_sizes.insert(enum_sizes.end(), 3, 13);
    enum_sizes.insert(enum_sizes.end(), 3, 14);  // 100 instances
    std::vector<std::string> failures(enum_sizes.size());
    parallel_for(enum_sizes.size(), 2, [&](std::size_t i) {
      try {
        InstanceFamily family = i % 2 ? InstanceFamily::GraphMetric
                                      : InstanceFamily::RandomEuclidean;
        MetricInstance inst =
            MetricInstance::generate(family, enum_sizes[i],
                                     split_seed(4096, i));
        HeldKarpResult hk = solve_held_karp(HeldKarpSpec::top_level(inst));
        auto brute = enumerate_b_cuts(inst, hk.x, CutEnumMethod::Brute);
        if (!verify_cut_count_bound(inst, brute)) {
          failures[i] = "count bound violated";
          return;
        }
        for (const EnumeratedCut& cut : brute)
          if (cut.load < 1 || cut.load >= 3) {
            failures[i] = "load outside [1,3)";
            return;
          }
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
          auto contraction = enumerate_b_cuts(
              inst, hk.x, CutEnumMethod::Contraction,
              split_seed(777, i * 64 + seed), 3.0, 1);
          if (contraction.size() != brute.size()) {
            failures[i] = "seed " + std::to_string(seed) + ": size " +
                          std::to_string(contraction.size()) + " vs " +
                          std::to_string(brute.size());
            return;
          }
          for (std::size_t k = 0; k < brute.size(); ++k)
            if (contraction[k].cut != brute[k].cut ||
                contraction[k].load != brute[k].load) {
              failures[i] = "seed " + std::to_string(seed) + ": cut mismatch";
              return;
            }
        }
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
      if (!failures[i].empty())
        c.fail("instance " + std::to_string(i) + ": " + failures[i]);
    if (c.pass) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "brute == contraction on %zu instances x 50 seeds "
                    "(%.1fs)",
                    enum_sizes.size(), seconds_since(t0));
      c.detail = buf;
    }
    criteria.push_back(c);
    print_line(c);
  }

  // ---- component oracles --------------------------------------------------
  {
    Criterion c{"component-oracles"};
    auto t0 = std::chrono::steady_clock::now();

    // exact min cut vs exhaustive enumeration, up to 12 vertices
    {
      std::mt19937_64 rng(501);
      for (int round = 0; round < 60 && c.pass; ++round) {
        int n = 4 + static_cast<int>(rng() % 9);
        CapGraph g;
        g.n = n;
        for (int u = 0; u < n; ++u)
          for (int v = u + 1; v < n; ++v)
            if (rng() % 3) {
              Rat cap(1 + static_cast<long>(rng() % 12),
                      1 + static_cast<long>(rng() % 6));
              cap.canonicalize();
              g.add_edge(u, v, cap);
            }
        int a = static_cast<int>(rng() % n);
        int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
        MinCutResult fast = min_st_cut(g, a, b);
        Rat best = -1;
        std::uint64_t all = (1ULL << n) - 1;
        for (std::uint64_t side = 0; side <= all; ++side) {
          if (!((side >> a) & 1ULL) || ((side >> b) & 1ULL)) continue;
          Rat load = 0;
          for (const auto& [u, v, cap] : g.edges) {
            if (((side >> u) & 1ULL) != ((side >> v) & 1ULL)) load += cap;
          }
          if (best < 0 || load < best) best = load;
        }
        if (fast.value != best) c.fail("min cut mismatch");
      }
    }

    // blossom matching vs all-matchings recursion, |q| <= 10
    {
      std::mt19937_64 rng(502);
      std::function<Rat(const MetricInstance&, std::vector<int>)> brute =
          [&](const MetricInstance& inst, std::vector<int> verts) -> Rat {
        if (verts.empty()) return 0;
        int first = verts.front();
        verts.erase(verts.begin());
        Rat best = -1;
        for (std::size_t i = 0; i < verts.size(); ++i) {
          std::vector<int> rest = verts;
          int partner = rest[i];
          rest.erase(rest.begin() + i);
          Rat total = inst.length(first, partner) + brute(inst, rest);
          if (best < 0 || total < best) best = total;
        }
        return best;
      };
      for (int round = 0; round < 60 && c.pass; ++round) {
        int n = 6 + static_cast<int>(rng() % 9);
        MetricInstance inst = MetricInstance::generate(
            round % 2 ? InstanceFamily::RandomEuclidean
                      : InstanceFamily::GraphMetric,
            n, rng());
        int q = 4 + 2 * static_cast<int>(rng() % 4);
        q = std::min(q, n - n % 2);
        std::vector<int> verts(n);
        for (int v = 0; v < n; ++v) verts[v] = v;
        for (std::size_t i = verts.size(); i > 1; --i)
          std::swap(verts[i - 1], verts[rng() % i]);
        verts.resize(q);
        auto m = min_weight_perfect_matching(inst, verts);
        Rat total = 0;
        for (const VertexPair& e : m) total += inst.length(e);
        if (total != brute(inst, verts)) c.fail("matching mismatch");
      }
    }

    // exact DP vs permutation scan, n <= 9
    {
      std::mt19937_64 rng(503);
      for (int round = 0; round < 100 && c.pass; ++round) {
        int n = 4 + static_cast<int>(rng() % 6);
        MetricInstance inst = MetricInstance::generate(
            round % 2 ? InstanceFamily::RandomEuclidean
                      : InstanceFamily::GraphMetric,
            n, rng());
        std::vector<int> mid;
        for (int v = 1; v + 1 < n; ++v) mid.push_back(v);
        Rat best = -1;
        do {
          HamiltonianPath p;
          p.order.push_back(0);
          p.order.insert(p.order.end(), mid.begin(), mid.end());
          p.order.push_back(n - 1);
          Rat len = path_length(inst, p);
          if (best < 0 || len < best) best = len;
        } while (std::next_permutation(mid.begin(), mid.end()));
        if (exact_path_tsp(inst).length != best) c.fail("oracle mismatch");
      }
    }

    // row generation vs the fully materialized relaxation, n <= 10
    {
      std::vector<std::pair<int, std::uint64_t>> cases{
          {4, 1}, {5, 2}, {6, 3}, {6, 4}, {7, 5},
          {7, 6}, {8, 7}, {8, 8}, {9, 9}, {10, 10}};
      std::vector<std::string> failures(cases.size());
      parallel_for(cases.size(), 2, [&](std::size_t i) {
        auto [n, seed] = cases[i];
        MetricInstance inst = MetricInstance::generate(
            i % 2 ? InstanceFamily::GraphMetric
                  : InstanceFamily::RandomEuclidean,
            n, seed);
        HeldKarpResult lazy = solve_held_karp(HeldKarpSpec::top_level(inst));
        LpSolution direct =
            solve(pathtsp::testing::materialized_held_karp(inst));
        if (!lazy.feasible || direct.status != LpStatus::Optimal ||
            lazy.value != direct.value)
          failures[i] = "value mismatch at n=" + std::to_string(n);
      });
      for (const std::string& f : failures)
        if (!f.empty()) c.fail(f);
    }

    if (c.pass) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "min-cut, blossom, exact DP, LP materialization all "
                    "agree (%.1fs)",
                    seconds_since(t0));
      c.detail = buf;
    }
    criteria.push_back(c);
    print_line(c);
  }

  bool all_pass = true;
  for (const Criterion& c : criteria) all_pass &= c.pass;
  std::printf("# acceptance %s after %.1fs\n", all_pass ? "PASSED" : "FAILED",
              seconds_since(wall0));
  return all_pass ? 0 : 1;
}
