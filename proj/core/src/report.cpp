#include "mrproxy/report.hpp"

#include <cmath>

#include "mrproxy/bootstrap.hpp"

namespace mrproxy {

std::string EstimateReport::f_used() const {
  return f == Correction::kMendelian ? "mendelian: f(x) = 2x" : "identity: f(x) = x";
}

EstimateReport estimate(const ObservedView& data, const EstimateSettings& s) {
  EstimateReport r;
  r.n = data.size();
  r.contrast = s.contrast;
  r.f = s.f;
  r.weak_tol = s.weak_tol;
  r.gy_p_assoc = assoc_diff(data.dosage(), data.proxy_outcome(), s.contrast);
  r.ga_assoc = assoc_diff(data.dosage(), data.exposure(), s.contrast);
  r.proxy_wald = wald(apply_correction(s.f, r.gy_p_assoc), r.ga_assoc, s.weak_tol);

  if (s.bootstrap_replicates > 0) {
    r.bootstrap_replicates = s.bootstrap_replicates;
    const BootstrapOptions opts{s.bootstrap_replicates, s.bootstrap_seed, s.threads};
    r.se_gy_p_assoc = bootstrap_se(
        data.size(),
        [&](RowWeights w) { return assoc_diff(data.dosage(), data.proxy_outcome(), s.contrast, w); },
        opts);
    r.se_ga_assoc = bootstrap_se(
        data.size(),
        [&](RowWeights w) { return assoc_diff(data.dosage(), data.exposure(), s.contrast, w); },
        opts);
    r.se_proxy_wald = bootstrap_se(
        data.size(),
        [&](RowWeights w) { return proxy_wald(data, s.f, s.contrast, s.weak_tol, w); }, opts);
  }
  return r;
}

void add_latent_diagnostics(EstimateReport& report, const TrioDataset& data) {
  report.wald_child = oracle::wald_child(data, report.contrast, report.weak_tol);
}

void add_oracles(EstimateReport& report, const ScmConfig& config, std::int64_t big_n,
                 unsigned threads) {
  const SampleOptions opts{threads};
  report.seed = config.seed;
  report.config_digest = config_digest(config);
  report.oracle_parent = oracle_effects(config, Generation::kParent, big_n, opts);
  report.oracle_child = oracle_effects(config, Generation::kChild, big_n, opts);
  report.gaps = stability_gaps(config, big_n, report.contrast, opts);
}

namespace {

Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

void put_oracle(Json& j, const char* prefix, const std::optional<EffectOracle>& o) {
  const std::string p = prefix;
  j[p + "_ate"] = number_or_null(o ? std::optional(o->ate) : std::nullopt);
  j[p + "_ett"] = number_or_null(o ? std::optional(o->ett) : std::nullopt);
  j[p + "_late"] = number_or_null(o ? o->late : std::nullopt);
  j[p + "_complier_share"] =
      number_or_null(o ? std::optional(o->complier_share) : std::nullopt);
}

}  // namespace

Json to_json(const EstimateReport& r) {
  Json j;
  j["n"] = r.n;
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  j["config_digest"] = r.config_digest ? Json(*r.config_digest) : Json(nullptr);
  j["contrast"] = std::string(to_string(r.contrast));
  j["f_used"] = r.f_used();
  j["weak_tol"] = r.weak_tol;
  j["gy_p_assoc"] = number_or_null(r.gy_p_assoc);
  j["ga_assoc"] = number_or_null(r.ga_assoc);
  j["proxy_wald"] = number_or_null(r.proxy_wald);
  j["wald_child"] = number_or_null(r.wald_child);
  put_oracle(j, "oracle_parent", r.oracle_parent);
  put_oracle(j, "oracle_child", r.oracle_child);
  j["stability_gap_outcome"] = number_or_null(r.gaps ? std::optional(r.gaps->outcome) : std::nullopt);
  j["stability_gap_exposure"] =
      number_or_null(r.gaps ? std::optional(r.gaps->exposure) : std::nullopt);
  j["bootstrap_replicates"] = r.bootstrap_replicates;
  j["se_gy_p_assoc"] = number_or_null(r.se_gy_p_assoc);
  j["se_ga_assoc"] = number_or_null(r.se_ga_assoc);
  j["se_proxy_wald"] = number_or_null(r.se_proxy_wald);
  return j;
}

std::vector<std::string> estimate_csv_columns() {
  std::vector<std::string> names;
  const Json empty = to_json(EstimateReport{});
  for (const auto& [key, value] : empty.items()) names.push_back(key);
  return names;
}

std::string estimate_csv_row(const EstimateReport& report) {
  std::string row;
  bool first = true;
  const Json fields = to_json(report);
  for (const auto& [key, value] : fields.items()) {
    if (!first) row += ',';
    first = false;
    if (value.is_null()) continue;
    if (value.is_string()) {
      const auto s = value.get<std::string>();
      row += s.find(',') != std::string::npos ? "\"" + s + "\"" : s;
    } else if (value.is_number_float()) {
      row += format_number(value.get<double>());
    } else {
      row += value.dump();
    }
  }
  return row;
}

Json to_json(const Dag& dag, const IvReport& report) {
  Json j;
  j["relevance"] = report.relevance;
  j["exclusion"] = report.exclusion;
  j["unconfounded"] = report.unconfounded;
  j["causal"] = report.causal;
  j["valid"] = report.valid();
  Json ex = Json::array();
  for (const auto& p : report.exclusion_witnesses) ex.push_back(dag.format(p));
  Json conf = Json::array();
  for (const auto& p : report.confounding_witnesses) conf.push_back(dag.format(p));
  j["exclusion_witnesses"] = ex;
  j["confounding_witnesses"] = conf;
  return j;
}

}  // namespace mrproxy
