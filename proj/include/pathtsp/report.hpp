#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

struct AuditCheck {
  std::string name;
  bool pass = false;
  std::string detail;

  bool operator==(const AuditCheck&) const = default;
};

/// Per-instance record of every quantity the algorithm produces, plus the
/// invariant-audit verdicts. Rationals serialize as "p/q" strings with a
/// convenience float alongside; wall times are the only fields excluded
/// from the reproducibility contract.
struct SolveReport {
  std::string schema = "pathtsp-report/1";

  std::string instance_name;
  int n = 0;
  int source = 0;
  int sink = 0;
  std::optional<std::string> family;
  std::optional<std::uint64_t> instance_seed;

  std::string mode;

  std::optional<std::string> cut_enum_method;
  std::optional<long> cut_enum_trials;
  std::optional<std::uint64_t> cut_enum_seed;
  std::optional<int> b_cut_count;

  std::optional<Rat> hk_value;
  std::optional<int> hk_support;
  std::optional<Rat> d_star;
  std::optional<Rat> y_length;
  std::optional<Rat> tree_len;
  std::optional<int> parity_size;
  std::optional<Rat> join_len;
  Rat final_length = 0;
  std::vector<int> final_path;
  std::optional<Rat> opt_length;

  std::optional<Rat> ratio_final_over_opt;
  std::optional<Rat> ratio_final_over_hk;

  std::vector<AuditCheck> audits;
  std::map<std::string, double> timings_ms;

  bool all_audits_pass() const;

  bool operator==(const SolveReport&) const = default;
};

nlohmann::json report_to_json(const SolveReport& report);
SolveReport report_from_json(const nlohmann::json& j);

}  // namespace pathtsp
