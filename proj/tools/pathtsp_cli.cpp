#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pathtsp/errors.hpp"
#include "pathtsp/pipeline.hpp"

namespace {

using namespace pathtsp;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitAudit = 3;
constexpr int kExitResource = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

void print_report(const SolveReport& report) {
  std::cout << "instance    " << report.instance_name << " (n=" << report.n
            << ", s=" << report.source << ", t=" << report.sink << ")\n";
  std::cout << "mode        " << report.mode << "\n";
  auto line = [](const char* label, const std::optional<Rat>& v) {
    if (!v) return;
    std::cout << label << rat_to_string(*v) << " (" << rat_to_double(*v)
              << ")\n";
  };
  line("hk value    ", report.hk_value);
  if (report.b_cut_count)
    std::cout << "cuts < 3    " << *report.b_cut_count << " ("
              << *report.cut_enum_method << ")\n";
  line("d*          ", report.d_star);
  line("tree        ", report.tree_len);
  line("join        ", report.join_len);
  std::cout << "final       " << rat_to_string(report.final_length) << " ("
            << rat_to_double(report.final_length) << ")\n";
  line("optimum     ", report.opt_length);
  line("final/OPT   ", report.ratio_final_over_opt);
  line("final/hk    ", report.ratio_final_over_hk);
  std::cout << "path       ";
  for (int v : report.final_path) std::cout << " " << v;
  std::cout << "\n";
  for (const AuditCheck& audit : report.audits) {
    std::cout << (audit.pass ? "[pass] " : "[FAIL] ") << audit.name;
    if (!audit.detail.empty()) std::cout << "  (" << audit.detail << ")";
    std::cout << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Path TSP solver: Held-Karp relaxation, near-minimum-cut "
               "enumeration, shortest good-point DP, parity correction"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one TSPLIB instance");
  std::string instance_path, mode_name = "zenklusen", enum_name = "auto";
  std::string audit_name = "fast", json_path;
  int source = 0, sink = 0, threads = 0;
  std::uint64_t seed = 0;
  double trial_factor = 3.0;
  bool metric_closure = false, no_oracle = false;
  solve_cmd->add_option("--instance", instance_path, "TSPLIB file")
      ->required();
  solve_cmd->add_option("--source", source, "source vertex id")->required();
  solve_cmd->add_option("--sink", sink, "sink vertex id")->required();
  solve_cmd->add_option("--mode", mode_name, "zenklusen|hoogeveen|exact");
  solve_cmd->add_option("--cut-enum", enum_name, "brute|contraction|auto");
  solve_cmd->add_option("--audit", audit_name, "off|fast|full");
  solve_cmd->add_option("--seed", seed, "cut enumeration seed");
  solve_cmd->add_option("--json", json_path, "write the report as JSON");
  solve_cmd->add_option("--threads", threads, "worker threads (0 = auto)");
  solve_cmd->add_option("--trial-factor", trial_factor,
                        "contraction trial multiplier");
  solve_cmd->add_flag("--metric-closure", metric_closure,
                      "repair a non-metric instance by shortest-path "
                      "closure instead of rejecting it");
  solve_cmd->add_flag("--no-oracle", no_oracle,
                      "skip the exact optimum comparison");

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "batch-solve generated instances");
  std::string family_name = "random-euclidean";
  std::vector<std::string> mode_names{"zenklusen"};
  int bench_n = 8, count = 10;
  std::uint64_t bench_seed = 0;
  std::string bench_json;
  int bench_threads = 0;
  std::string bench_enum = "auto", bench_audit = "fast";
  bench_cmd->add_option("--family", family_name,
                        "euclidean-grid|random-euclidean|graph-metric");
  bench_cmd->add_option("--n", bench_n, "vertex count")->required();
  bench_cmd->add_option("--count", count, "number of instances")->required();
  bench_cmd->add_option("--seed", bench_seed, "base seed");
  bench_cmd->add_option("--modes", mode_names,
                        "subset of zenklusen hoogeveen exact");
  bench_cmd->add_option("--json", bench_json, "write all reports as JSON");
  bench_cmd->add_option("--cut-enum", bench_enum, "brute|contraction|auto");
  bench_cmd->add_option("--audit", bench_audit, "off|fast|full");
  bench_cmd->add_option("--threads", bench_threads,
                        "worker threads (0 = auto)");

  // gen
  auto* gen_cmd =
      app.add_subcommand("gen", "generate an instance as a TSPLIB file");
  std::string gen_family = "random-euclidean", out_path;
  int gen_n = 8;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--family", gen_family,
                      "euclidean-grid|random-euclidean|graph-metric");
  gen_cmd->add_option("--n", gen_n, "vertex count")->required();
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--out", out_path, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed()) {
    ParseOptions popts;
    popts.metric_closure = metric_closure;
    MetricInstance inst =
        MetricInstance::parse_tsplib(read_file(instance_path), source, sink,
                                     popts);
    PipelineOptions options;
    options.mode = solve_mode_from_string(mode_name);
    options.cut_enum = cut_enum_method_from_string(enum_name);
    options.audit = audit_level_from_string(audit_name);
    options.oracle = !no_oracle;
    options.seed = seed;
    options.threads = threads;
    options.trial_factor = trial_factor;
    SolveReport report = run_pipeline(inst, options);
    print_report(report);
    if (!json_path.empty())
      write_file(json_path, report_to_json(report).dump(2) + "\n");
    return report.all_audits_pass() ? kExitOk : kExitAudit;
  }

  if (bench_cmd->parsed()) {
    BatchOptions options;
    options.family = family_from_string(family_name);
    options.n = bench_n;
    options.count = count;
    options.seed_base = bench_seed;
    options.modes.clear();
    for (const std::string& m : mode_names)
      options.modes.push_back(solve_mode_from_string(m));
    options.pipeline.cut_enum = cut_enum_method_from_string(bench_enum);
    options.pipeline.audit = audit_level_from_string(bench_audit);
    options.pipeline.threads = bench_threads;
    options.pipeline.seed = bench_seed;
    BatchResult result = run_batch(options);
    std::cout << summary_table(result);
    for (std::size_t i = 0; i < result.entries.size(); ++i)
      if (result.entries[i].error)
        std::cout << "entry " << i << " failed: " << *result.entries[i].error
                  << "\n";
    if (!bench_json.empty())
      write_file(bench_json, batch_to_json(result).dump(2) + "\n");
    bool audits_ok = true;
    for (const ModeSummary& ms : result.summary)
      if (ms.audit_failures > 0) audits_ok = false;
    return audits_ok ? kExitOk : kExitAudit;
  }

  // gen
  MetricInstance inst = MetricInstance::generate(
      family_from_string(gen_family), gen_n, gen_seed);
  write_file(out_path, inst.to_tsplib());
  std::cout << "wrote " << out_path << " (" << inst.name() << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kExitResource;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitAudit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
