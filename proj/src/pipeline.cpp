#include "pathtsp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <thread>

#include "pathtsp/dp_bgood.hpp"
#include "pathtsp/errors.hpp"
#include "pathtsp/flow.hpp"
#include "pathtsp/held_karp.hpp"
#include "pathtsp/oracle.hpp"
#include "pathtsp/parallel.hpp"
#include "pathtsp/parity_tour.hpp"

namespace pathtsp {

int default_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(std::min(hw, 16u));
}

SolveMode solve_mode_from_string(std::string_view name) {
  if (name == "zenklusen") return SolveMode::Zenklusen;
  if (name == "hoogeveen") return SolveMode::Hoogeveen;
  if (name == "exact") return SolveMode::Exact;
  throw ParseError("unknown mode '" + std::string(name) + "'");
}

std::string solve_mode_to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::Zenklusen: return "zenklusen";
    case SolveMode::Hoogeveen: return "hoogeveen";
    case SolveMode::Exact: return "exact";
  }
  return "?";
}

AuditLevel audit_level_from_string(std::string_view name) {
  if (name == "off") return AuditLevel::Off;
  if (name == "fast") return AuditLevel::Fast;
  if (name == "full") return AuditLevel::Full;
  throw ParseError("unknown audit level '" + std::string(name) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct AuditSink {
  std::vector<AuditCheck>& out;
  void add(std::string name, bool pass, std::string detail = "") {
    out.push_back({std::move(name), pass, std::move(detail)});
  }
};

void fill_oracle_fields(const MetricInstance& inst,
                        const PipelineOptions& options, SolveReport& report) {
  if (!options.oracle || inst.n() > 18) return;
  Clock::time_point t0 = Clock::now();
  ExactPathResult exact = exact_path_tsp(inst);
  report.timings_ms["oracle"] = ms_since(t0);
  report.opt_length = exact.length;
  if (exact.length > 0)
    report.ratio_final_over_opt = report.final_length / exact.length;
  else if (report.final_length == 0)
    report.ratio_final_over_opt = Rat(1);
}

SolveReport run_zenklusen(const MetricInstance& inst,
                          const PipelineOptions& options) {
  int threads = options.threads > 0 ? options.threads
                                    : default_thread_count();
  SolveReport report;
  report.mode = "zenklusen";
  AuditSink audit{report.audits};

  // step 1: optimal Held-Karp point
  Clock::time_point t0 = Clock::now();
  HeldKarpSpec top = HeldKarpSpec::top_level(inst);
  HeldKarpResult hk = solve_held_karp(top);
  report.timings_ms["held-karp"] = ms_since(t0);
  if (!hk.feasible)
    throw InvariantError("top-level relaxation infeasible on a valid "
                         "instance");
  report.hk_value = hk.value;
  report.hk_support = hk.x.support_size();

  // step 2: cuts of load below 3
  t0 = Clock::now();
  CutEnumStats stats;
  std::vector<EnumeratedCut> cuts =
      enumerate_b_cuts(inst, hk.x, options.cut_enum, options.seed,
                       options.trial_factor, threads, &stats);
  report.timings_ms["cut-enum"] = ms_since(t0);
  report.cut_enum_method = cut_enum_method_to_string(stats.method_used);
  report.cut_enum_trials = stats.trials;
  report.cut_enum_seed = stats.seed;
  report.b_cut_count = static_cast<int>(cuts.size());

  std::vector<Cut> family;
  family.reserve(cuts.size());
  for (const EnumeratedCut& c : cuts) family.push_back(c.cut);

  // step 3: shortest good point via the auxiliary-digraph DP
  t0 = Clock::now();
  BGoodResult dp = shortest_bgood_point(inst, family, threads);
  report.timings_ms["dp"] = ms_since(t0);
  report.d_star = dp.d_star;
  report.y_length = vector_length(inst, dp.y);

  // steps 4-5: tree, parity correction, shortcut
  t0 = Clock::now();
  SpanningTree tree = mst_on_support(inst, dp.y);
  report.timings_ms["tree"] = ms_since(t0);
  report.tree_len = tree_length(inst, tree);

  t0 = Clock::now();
  std::vector<int> parity = parity_target(inst, tree);
  std::vector<VertexPair> join = min_q_join(inst, parity);
  report.timings_ms["join"] = ms_since(t0);
  report.parity_size = static_cast<int>(parity.size());
  Rat join_total = 0;
  for (const VertexPair& e : join) join_total += inst.length(e);
  report.join_len = join_total;

  t0 = Clock::now();
  HamiltonianPath path = euler_shortcut(inst, tree, join);
  report.timings_ms["shortcut"] = ms_since(t0);
  report.final_length = path_length(inst, path);
  report.final_path = path.order;
  if (hk.value > 0)
    report.ratio_final_over_hk = report.final_length / hk.value;

  fill_oracle_fields(inst, options, report);

  if (options.audit == AuditLevel::Off) return report;

  // ---- invariant audits ------------------------------------------------
  t0 = Clock::now();
  int n = inst.n();

  audit.add("support-sparsity", hk.x.support_size() <= 2 * n - 3,
            std::to_string(hk.x.support_size()) + " of " +
                std::to_string(2 * n - 3));

  bool loads_ok = true;
  for (const EnumeratedCut& c : cuts)
    if (c.load < 1 || c.load >= 3) loads_ok = false;
  audit.add("cut-loads-in-range", loads_ok);
  audit.add("cut-count-bound", verify_cut_count_bound(inst, cuts));

  audit.add("dstar-equals-y-length", *report.y_length == dp.d_star);
  audit.add("y-in-relaxation", !separate_point(top, dp.y).has_value());
  audit.add("y-is-good", !verify_bgood(dp.y, family).has_value());

  {
    // integral 1-cuts of y: a single tree edge crosses, so they can never
    // be parity cuts
    bool parity_ok = true;
    std::uint64_t qmask = 0;
    for (int v : parity) qmask |= 1ULL << v;
    for (const auto& [cut, edge] : dp.integral_one_cuts) {
      (void)edge;
      int tree_crossing = 0;
      for (const VertexPair& e : tree.edges)
        if (cut.contains(e.a) != cut.contains(e.b)) ++tree_crossing;
      if (tree_crossing != 1) parity_ok = false;
      if (__builtin_popcountll(cut.members & qmask) % 2 != 0)
        parity_ok = false;
    }
    audit.add("integral-cut-parity", parity_ok);

    // ... and they are exactly the family cuts where y meets the single
    // integral edge condition
    std::vector<Cut> reported;
    for (const auto& [cut, edge] : dp.integral_one_cuts) {
      reported.push_back(cut);
      (void)edge;
    }
    std::vector<Cut> expected;
    for (const Cut& b : family) {
      Rat load = dp.y.load(b.members);
      if (load != 1) continue;
      int crossing = 0;
      bool unit = true;
      for (const auto& [e, v] : dp.y.entries()) {
        if (b.contains(e.a) == b.contains(e.b)) continue;
        ++crossing;
        if (v != 1) unit = false;
      }
      if (crossing == 1 && unit) expected.push_back(b);
    }
    auto by_members = [](const Cut& a, const Cut& b) {
      return a.members < b.members;
    };
    std::sort(reported.begin(), reported.end(), by_members);
    std::sort(expected.begin(), expected.end(), by_members);
    audit.add("integral-cuts-reported-exactly", reported == expected);
  }

  audit.add("tree-below-y", *report.tree_len <= *report.y_length,
            rat_to_string(*report.tree_len) + " vs " +
                rat_to_string(*report.y_length));
  Rat join_bound = (hk.value + *report.y_length) / 4;
  audit.add("join-bound", join_total <= join_bound,
            rat_to_string(join_total) + " vs " + rat_to_string(join_bound));
  audit.add("shortcut-bound",
            report.final_length <= *report.tree_len + join_total);

  if (report.opt_length) {
    audit.add("approximation-guarantee",
              2 * report.final_length <= 3 * *report.opt_length,
              rat_to_string(report.final_length) + " vs 3/2 * " +
                  rat_to_string(*report.opt_length));
    audit.add("proof-chain-lengths",
              *report.tree_len <= *report.y_length &&
                  *report.y_length <= *report.opt_length &&
                  hk.value <= *report.opt_length);
  }

  if (options.audit == AuditLevel::Full) {
    if (n <= 14) {
      audit.add("y-in-relaxation-exhaustive",
                !verify_in_phk(inst, dp.y, inst.all_vertices_mask(),
                               inst.source(), inst.sink())
                     .has_value());
      EdgeVector z = hk.x.scaled(Rat(1, 2));
      z += dp.y.scaled(Rat(1, 2));
      EdgeVector half_z = z.scaled(Rat(1, 2));
      audit.add("join-dominant",
                !verify_join_dominant(inst, half_z, parity).has_value());
    }
    {
      bool chain = true;
      for (const EnumeratedCut& a : cuts) {
        if (a.load >= 2) continue;
        for (const EnumeratedCut& b : cuts) {
          if (b.load >= 2) continue;
          if (!a.cut.subset_of(b.cut) && !b.cut.subset_of(a.cut))
            chain = false;
        }
      }
      audit.add("narrow-cuts-chain", chain);
    }
    {
      CapGraph augmented = support_graph(n, hk.x);
      augmented.add_edge(inst.source(), inst.sink(), Rat(1));
      audit.add("augmented-mincut",
                global_min_cut(augmented).value >= 2);
    }
    audit.add("dp-lp-budget",
              dp.lp_solves <=
                  static_cast<long>(family.size() * n + 2) *
                      static_cast<long>(family.size() * n + 2));
    if (n <= 9) {
      bool minimal = true;
      std::vector<int> mid;
      for (int v = 0; v < n; ++v)
        if (v != inst.source() && v != inst.sink()) mid.push_back(v);
      std::sort(mid.begin(), mid.end());
      do {
        HamiltonianPath p;
        p.order.push_back(inst.source());
        p.order.insert(p.order.end(), mid.begin(), mid.end());
        p.order.push_back(inst.sink());
        if (path_length(inst, p) < dp.d_star) minimal = false;
      } while (std::next_permutation(mid.begin(), mid.end()));
      audit.add("dstar-minimal-over-paths", minimal);
    }
  }
  report.timings_ms["audit"] = ms_since(t0);
  return report;
}

SolveReport run_hoogeveen(const MetricInstance& inst,
                          const PipelineOptions& options) {
  SolveReport report;
  report.mode = "hoogeveen";
  AuditSink audit{report.audits};

  Clock::time_point t0 = Clock::now();
  SpanningTree tree = mst_complete(inst);
  report.tree_len = tree_length(inst, tree);
  std::vector<int> parity = parity_target(inst, tree);
  std::vector<VertexPair> join = min_q_join(inst, parity);
  report.parity_size = static_cast<int>(parity.size());
  Rat join_total = 0;
  for (const VertexPair& e : join) join_total += inst.length(e);
  report.join_len = join_total;
  HamiltonianPath path = euler_shortcut(inst, tree, join);
  report.timings_ms["baseline"] = ms_since(t0);
  report.final_length = path_length(inst, path);
  report.final_path = path.order;

  fill_oracle_fields(inst, options, report);

  if (options.audit != AuditLevel::Off) {
    audit.add("shortcut-bound",
              report.final_length <= *report.tree_len + join_total);
    if (report.opt_length)
      audit.add("baseline-guarantee",
                3 * report.final_length <= 5 * *report.opt_length,
                rat_to_string(report.final_length) + " vs 5/3 * " +
                    rat_to_string(*report.opt_length));
  }
  return report;
}

SolveReport run_exact(const MetricInstance& inst) {
  SolveReport report;
  report.mode = "exact";
  Clock::time_point t0 = Clock::now();
  ExactPathResult exact = exact_path_tsp(inst);
  report.timings_ms["oracle"] = ms_since(t0);
  report.final_length = exact.length;
  report.final_path = exact.path.order;
  report.opt_length = exact.length;
  report.ratio_final_over_opt = Rat(1);
  return report;
}

}  // namespace

SolveReport run_pipeline(const MetricInstance& inst,
                         const PipelineOptions& options) {
  SolveReport report;
  switch (options.mode) {
    case SolveMode::Zenklusen:
      report = run_zenklusen(inst, options);
      break;
    case SolveMode::Hoogeveen:
      report = run_hoogeveen(inst, options);
      break;
    case SolveMode::Exact:
      report = run_exact(inst);
      break;
  }
  report.instance_name = inst.name();
  report.n = inst.n();
  report.source = inst.source();
  report.sink = inst.sink();
  report.family = options.family;
  report.instance_seed = options.instance_seed;
  return report;
}

BatchResult run_batch(const BatchOptions& options) {
  int threads = options.pipeline.threads > 0 ? options.pipeline.threads
                                             : default_thread_count();
  std::size_t total = static_cast<std::size_t>(options.count) *
                      options.modes.size();
  BatchResult result;
  result.entries.resize(total);

  parallel_for(total, threads, [&](std::size_t idx) {
    int instance_idx = static_cast<int>(idx / options.modes.size());
    SolveMode mode = options.modes[idx % options.modes.size()];
    std::uint64_t seed = options.seed_base + instance_idx;
    try {
      MetricInstance inst =
          MetricInstance::generate(options.family, options.n, seed);
      PipelineOptions po = options.pipeline;
      po.mode = mode;
      po.threads = 1;  // the pool is the outer loop
      po.family = family_to_string(options.family);
      po.instance_seed = seed;
      po.seed = split_seed(options.pipeline.seed, seed);
      result.entries[idx].report = run_pipeline(inst, po);
    } catch (const std::exception& e) {
      result.entries[idx].error = e.what();
    }
  });

  for (SolveMode mode : options.modes) {
    ModeSummary ms;
    ms.mode = solve_mode_to_string(mode);
    Rat ratio_sum = 0;
    int ratio_count = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (options.modes[idx % options.modes.size()] != mode) continue;
      const BatchEntry& entry = result.entries[idx];
      ++ms.runs;
      if (entry.error) {
        ++ms.failures;
        continue;
      }
      const SolveReport& rep = *entry.report;
      if (!rep.all_audits_pass()) ++ms.audit_failures;
      if (rep.ratio_final_over_opt) {
        const Rat& ratio = *rep.ratio_final_over_opt;
        if (!ms.max_ratio_over_opt || ratio > *ms.max_ratio_over_opt)
          ms.max_ratio_over_opt = ratio;
        ratio_sum += ratio;
        ++ratio_count;
      }
      if (rep.ratio_final_over_hk) {
        const Rat& ratio = *rep.ratio_final_over_hk;
        if (!ms.max_ratio_over_hk || ratio > *ms.max_ratio_over_hk)
          ms.max_ratio_over_hk = ratio;
      }
    }
    if (ratio_count > 0) ms.mean_ratio_over_opt = ratio_sum / ratio_count;
    result.summary.push_back(std::move(ms));
  }
  return result;
}

nlohmann::json batch_to_json(const BatchResult& result) {
  nlohmann::json j;
  j["schema"] = "pathtsp-batch/1";
  j["reports"] = nlohmann::json::array();
  for (const BatchEntry& entry : result.entries) {
    if (entry.report) j["reports"].push_back(report_to_json(*entry.report));
    else j["reports"].push_back({{"error", *entry.error}});
  }
  j["summary"] = nlohmann::json::array();
  for (const ModeSummary& ms : result.summary) {
    nlohmann::json s;
    s["mode"] = ms.mode;
    s["runs"] = ms.runs;
    s["failures"] = ms.failures;
    s["audit_failures"] = ms.audit_failures;
    auto opt_rat = [](const std::optional<Rat>& v) {
      return v ? nlohmann::json{{"rat", rat_to_string(*v)},
                                {"float", rat_to_double(*v)}}
               : nlohmann::json(nullptr);
    };
    s["max_ratio_over_opt"] = opt_rat(ms.max_ratio_over_opt);
    s["mean_ratio_over_opt"] = opt_rat(ms.mean_ratio_over_opt);
    s["max_ratio_over_hk"] = opt_rat(ms.max_ratio_over_hk);
    j["summary"].push_back(std::move(s));
  }
  return j;
}

std::string summary_table(const BatchResult& result) {
  std::ostringstream os;
  os << "mode        runs  fail  audit-fail  max(final/OPT)  mean(final/OPT)"
     << "\n";
  for (const ModeSummary& ms : result.summary) {
    char buf[160];
    auto fmt = [](const std::optional<Rat>& v) {
      return v ? std::to_string(rat_to_double(*v)) : std::string("-");
    };
    std::snprintf(buf, sizeof(buf), "%-10s %5d %5d %11d  %-15s %-15s",
                  ms.mode.c_str(), ms.runs, ms.failures, ms.audit_failures,
                  fmt(ms.max_ratio_over_opt).c_str(),
                  fmt(ms.mean_ratio_over_opt).c_str());
    os << buf << "\n";
  }
  return os.str();
}

}  // namespace pathtsp
