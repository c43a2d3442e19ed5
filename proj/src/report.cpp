#include "pathtsp/report.hpp"

#include "pathtsp/errors.hpp"

namespace pathtsp {

namespace {

using nlohmann::json;

json rat_json(const Rat& r) {
  return json{{"rat", rat_to_string(r)}, {"float", rat_to_double(r)}};
}

Rat rat_from_json(const json& j) { return rat_from_string(j.at("rat").get<std::string>()); }

template <typename T, typename Enc>
json opt_json(const std::optional<T>& v, Enc&& enc) {
  if (!v) return nullptr;
  return enc(*v);
}

}  // namespace

bool SolveReport::all_audits_pass() const {
  for (const AuditCheck& a : audits)
    if (!a.pass) return false;
  return true;
}

json report_to_json(const SolveReport& r) {
  json j;
  j["schema"] = r.schema;
  j["instance"] = {
      {"name", r.instance_name},
      {"n", r.n},
      {"s", r.source},
      {"t", r.sink},
      {"family", r.family ? json(*r.family) : json(nullptr)},
      {"seed", r.instance_seed ? json(*r.instance_seed) : json(nullptr)},
  };
  j["mode"] = r.mode;
  j["cut_enum"] = {
      {"method",
       r.cut_enum_method ? json(*r.cut_enum_method) : json(nullptr)},
      {"trials", r.cut_enum_trials ? json(*r.cut_enum_trials) : json(nullptr)},
      {"seed", r.cut_enum_seed ? json(*r.cut_enum_seed) : json(nullptr)},
      {"count", r.b_cut_count ? json(*r.b_cut_count) : json(nullptr)},
  };
  auto rj = [](const Rat& v) { return rat_json(v); };
  j["values"] = {
      {"hk_value", opt_json(r.hk_value, rj)},
      {"hk_support", r.hk_support ? json(*r.hk_support) : json(nullptr)},
      {"d_star", opt_json(r.d_star, rj)},
      {"y_length", opt_json(r.y_length, rj)},
      {"tree_length", opt_json(r.tree_len, rj)},
      {"parity_size", r.parity_size ? json(*r.parity_size) : json(nullptr)},
      {"join_length", opt_json(r.join_len, rj)},
      {"final_length", rat_json(r.final_length)},
      {"opt_length", opt_json(r.opt_length, rj)},
  };
  j["final_path"] = r.final_path;
  j["ratios"] = {
      {"final_over_opt", opt_json(r.ratio_final_over_opt, rj)},
      {"final_over_hk", opt_json(r.ratio_final_over_hk, rj)},
  };
  j["audits"] = json::array();
  for (const AuditCheck& a : r.audits)
    j["audits"].push_back(
        {{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  j["timings_ms"] = r.timings_ms;
  return j;
}

SolveReport report_from_json(const json& j) {
  SolveReport r;
  r.schema = j.at("schema").get<std::string>();
  if (r.schema != "pathtsp-report/1")
    throw ParseError("unsupported report schema '" + r.schema + "'");
  const json& inst = j.at("instance");
  r.instance_name = inst.at("name").get<std::string>();
  r.n = inst.at("n").get<int>();
  r.source = inst.at("s").get<int>();
  r.sink = inst.at("t").get<int>();
  if (!inst.at("family").is_null())
    r.family = inst.at("family").get<std::string>();
  if (!inst.at("seed").is_null())
    r.instance_seed = inst.at("seed").get<std::uint64_t>();
  r.mode = j.at("mode").get<std::string>();

  const json& ce = j.at("cut_enum");
  if (!ce.at("method").is_null())
    r.cut_enum_method = ce.at("method").get<std::string>();
  if (!ce.at("trials").is_null())
    r.cut_enum_trials = ce.at("trials").get<long>();
  if (!ce.at("seed").is_null())
    r.cut_enum_seed = ce.at("seed").get<std::uint64_t>();
  if (!ce.at("count").is_null()) r.b_cut_count = ce.at("count").get<int>();

  const json& values = j.at("values");
  auto opt_rat = [&](const char* key) -> std::optional<Rat> {
    if (values.at(key).is_null()) return std::nullopt;
    return rat_from_json(values.at(key));
  };
  r.hk_value = opt_rat("hk_value");
  if (!values.at("hk_support").is_null())
    r.hk_support = values.at("hk_support").get<int>();
  r.d_star = opt_rat("d_star");
  r.y_length = opt_rat("y_length");
  r.tree_len = opt_rat("tree_length");
  if (!values.at("parity_size").is_null())
    r.parity_size = values.at("parity_size").get<int>();
  r.join_len = opt_rat("join_length");
  r.final_length = rat_from_json(values.at("final_length"));
  r.opt_length = opt_rat("opt_length");
  r.final_path = j.at("final_path").get<std::vector<int>>();

  const json& ratios = j.at("ratios");
  if (!ratios.at("final_over_opt").is_null())
    r.ratio_final_over_opt = rat_from_json(ratios.at("final_over_opt"));
  if (!ratios.at("final_over_hk").is_null())
    r.ratio_final_over_hk = rat_from_json(ratios.at("final_over_hk"));

  for (const json& a : j.at("audits"))
    r.audits.push_back({a.at("name").get<std::string>(),
                        a.at("pass").get<bool>(),
                        a.at("detail").get<std::string>()});
  r.timings_ms =
      j.at("timings_ms").get<std::map<std::string, double>>();
  return r;
}

}  // namespace pathtsp
