#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathtsp/cut_enum.hpp"
#include "pathtsp/instance.hpp"
#include "pathtsp/report.hpp"

namespace pathtsp {

enum class SolveMode { Zenklusen, Hoogeveen, Exact };

SolveMode solve_mode_from_string(std::string_view name);
std::string solve_mode_to_string(SolveMode mode);

enum class AuditLevel { Off, Fast, Full };

AuditLevel audit_level_from_string(std::string_view name);

struct PipelineOptions {
  SolveMode mode = SolveMode::Zenklusen;
  CutEnumMethod cut_enum = CutEnumMethod::Auto;
  AuditLevel audit = AuditLevel::Fast;
  bool oracle = true;  // compute exact OPT when n permits
  std::uint64_t seed = 0;
  double trial_factor = 3.0;
  int threads = 0;  // 0 = default_thread_count()
  std::optional<std::string> family;
  std::optional<std::uint64_t> instance_seed;
};

/// Runs the selected algorithm end to end and fills a SolveReport,
/// including the configured invariant audits. Audit failures are recorded
/// in the report, not thrown; hard errors (invalid inputs, resource guards,
/// certified internal bugs) propagate as exceptions.
SolveReport run_pipeline(const MetricInstance& inst,
                         const PipelineOptions& options);

struct BatchOptions {
  InstanceFamily family = InstanceFamily::RandomEuclidean;
  int n = 8;
  int count = 10;
  std::uint64_t seed_base = 0;
  std::vector<SolveMode> modes = {SolveMode::Zenklusen};
  PipelineOptions pipeline;  // mode field is overridden per run
};

struct BatchEntry {
  std::optional<SolveReport> report;
  std::optional<std::string> error;  // failures are recorded, not fatal
};

struct ModeSummary {
  std::string mode;
  int runs = 0;
  int failures = 0;
  int audit_failures = 0;
  std::optional<Rat> max_ratio_over_opt;
  std::optional<Rat> mean_ratio_over_opt;
  std::optional<Rat> max_ratio_over_hk;
};

struct BatchResult {
  std::vector<BatchEntry> entries;  // in input order: instance-major
  std::vector<ModeSummary> summary;
};

/// One report per (instance, mode); instances are generated from
/// (family, n, seed_base + i). Runs on a bounded worker pool; entries come
/// back in input order regardless of completion order.
BatchResult run_batch(const BatchOptions& options);

nlohmann::json batch_to_json(const BatchResult& result);

/// Plain-text summary table of the per-mode statistics.
std::string summary_table(const BatchResult& result);

}  // namespace pathtsp
