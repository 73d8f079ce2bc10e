#include "mrproxy/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "mrproxy/errors.hpp"
#include "mrproxy/rng.hpp"
#include "mrproxy/scenarios.hpp"

namespace mrproxy {

OutputFormat parse_format(std::string_view s) {
  if (s == "json") return OutputFormat::kJson;
  if (s == "csv") return OutputFormat::kCsv;
  throw ConfigError("format", "expected csv|json, got '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  scm.validate();
  if (replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (oracle_n < 1) throw ConfigError("oracle_n", "must be >= 1");
  if (!(estimator.weak_tol >= 0.0)) throw ConfigError("estimator.weak_tol", "must be >= 0");
  if (estimator.bootstrap_replicates == 1 || estimator.bootstrap_replicates < 0) {
    throw ConfigError("estimator.bootstrap_replicates", "must be 0 or >= 2");
  }
}

namespace {

std::int64_t read_int(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<std::int64_t>();
}

std::string read_string(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

template <typename Parse>
auto reparse(const Json& v, const std::string& field, Parse parse) {
  const std::string s = read_string(v, field);
  try {
    return parse(s);
  } catch (const ConfigError& e) {
    throw ConfigError(field, e.message());
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("", "experiment config must be a JSON object");
  ExperimentConfig c;
  if (auto it = j.find("scenario"); it != j.end()) {
    c.scenario = read_string(*it, "scenario");
    auto s = find_scenario(c.scenario);
    if (!s) throw ConfigError("scenario", "unknown scenario '" + c.scenario + "'");
    c.scm = s->config;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      continue;
    } else if (key == "scm") {
      merge_scm_config(value, "scm", c.scm);
    } else if (key == "estimator") {
      if (!value.is_object()) throw ConfigError("estimator", "expected a JSON object");
      for (const auto& [k, v] : value.items()) {
        const std::string field = "estimator." + k;
        if (k == "contrast") {
          c.estimator.contrast = reparse(v, field, parse_contrast);
        } else if (k == "f") {
          c.estimator.f = reparse(v, field, parse_correction);
        } else if (k == "weak_tol") {
          if (!v.is_number()) throw ConfigError(field, "expected a number");
          c.estimator.weak_tol = v.get<double>();
        } else if (k == "bootstrap_replicates") {
          c.estimator.bootstrap_replicates = static_cast<int>(read_int(v, field));
        } else {
          throw ConfigError(field, "unknown field");
        }
      }
    } else if (key == "replicates") {
      c.replicates = static_cast<int>(read_int(value, key));
    } else if (key == "master_seed") {
      if (!value.is_number_unsigned()) throw ConfigError(key, "expected an unsigned integer");
      c.master_seed = value.get<std::uint64_t>();
    } else if (key == "oracle_n") {
      c.oracle_n = read_int(value, key);
    } else if (key == "evaluate_expectations") {
      if (!value.is_boolean()) throw ConfigError(key, "expected a boolean");
      c.evaluate_expectations = value.get<bool>();
    } else if (key == "threads") {
      const auto t = read_int(value, key);
      if (t < 0) throw ConfigError(key, "must be >= 0");
      c.threads = static_cast<unsigned>(t);
    } else if (key == "output") {
      if (!value.is_object()) throw ConfigError("output", "expected a JSON object");
      for (const auto& [k, v] : value.items()) {
        const std::string field = "output." + k;
        if (k == "path") {
          c.output_path = read_string(v, field);
        } else if (k == "format") {
          c.format = reparse(v, field, parse_format);
        } else {
          throw ConfigError(field, "unknown field");
        }
      }
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  if (c.evaluate_expectations && c.scenario.empty()) {
    throw ConfigError("evaluate_expectations", "requires a named scenario");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    const bool scm_field = e.field().rfind("parent", 0) == 0 || e.field().rfind("child", 0) == 0 ||
                           e.field() == "allele_freq" || e.field() == "n";
    if (scm_field) throw ConfigError("scm." + e.field(), e.message());
    throw;
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_experiment_config(j);
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  if (!c.scenario.empty()) j["scenario"] = c.scenario;
  j["scm"] = to_json(c.scm);
  j["estimator"] = {{"contrast", std::string(to_string(c.estimator.contrast))},
                    {"f", std::string(to_string(c.estimator.f))},
                    {"weak_tol", c.estimator.weak_tol},
                    {"bootstrap_replicates", c.estimator.bootstrap_replicates}};
  j["replicates"] = c.replicates;
  j["master_seed"] = c.master_seed;
  j["oracle_n"] = c.oracle_n;
  j["evaluate_expectations"] = c.evaluate_expectations;
  return j;
}

std::size_t RunReport::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.estimate; }));
}

namespace {

ReplicateRow run_replicate(const ExperimentConfig& c, int r, unsigned inner_threads) {
  ReplicateRow row;
  row.replicate = r;
  row.seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(r));
  ScmConfig scm = c.scm;
  scm.seed = row.seed;
  try {
    const TrioDataset data = sample_trio(scm, {inner_threads});
    EstimateSettings settings = c.estimator;
    settings.bootstrap_seed = derive_seed(row.seed, 0xb007);
    settings.threads = inner_threads;
    EstimateReport est = estimate(data.observed(), settings);
    est.seed = row.seed;
    est.config_digest = config_digest(scm);
    try {
      add_latent_diagnostics(est, data);
    } catch (const Error&) {
      // wald_child stays empty when the participants' instrument is weak.
    }
    row.estimate = std::move(est);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& c) {
  c.validate();
  RunReport report;
  report.scenario = c.scenario;
  report.master_seed = c.master_seed;
  ScmConfig oracle_config = c.scm;
  oracle_config.seed = c.master_seed;
  report.config_digest = config_digest(oracle_config);

  const unsigned hw = c.threads != 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(c.replicates));
  const unsigned inner = workers > 1 ? 1u : hw;

  report.rows.resize(static_cast<std::size_t>(c.replicates));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < c.replicates; r = next++) {
      report.rows[static_cast<std::size_t>(r)] = run_replicate(c, r, inner);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  const SampleOptions opts{hw};
  report.oracle_parent = oracle_effects(oracle_config, Generation::kParent, c.oracle_n, opts);
  report.oracle_child = oracle_effects(oracle_config, Generation::kChild, c.oracle_n, opts);
  report.gaps = stability_gaps(oracle_config, c.oracle_n, c.estimator.contrast, opts);
  for (auto& row : report.rows) {
    if (!row.estimate) continue;
    row.estimate->oracle_parent = report.oracle_parent;
    row.estimate->oracle_child = report.oracle_child;
    row.estimate->gaps = report.gaps;
  }
  report.aggregates = aggregate_rows(report.rows);

  if (c.evaluate_expectations) {
    const auto scenario = find_scenario(c.scenario);
    EvalOptions eval;
    eval.seed = c.master_seed;
    eval.n = c.scm.n;
    eval.big_n = c.oracle_n;
    eval.bootstrap_replicates = std::max(2, c.estimator.bootstrap_replicates);
    eval.contrast = c.estimator.contrast;
    eval.f = c.estimator.f;
    eval.weak_tol = c.estimator.weak_tol;
    eval.threads = hw;
    report.verdicts = evaluate_scenario(*scenario, eval);
  }
  return report;
}

namespace {

Json row_json(const ReplicateRow& row) {
  Json j;
  j["replicate"] = row.replicate;
  j["replicate_seed"] = row.seed;
  j["status"] = row.estimate ? "ok" : "error";
  j["error"] = row.error.empty() ? Json(nullptr) : Json(row.error);
  if (row.estimate) {
    const Json est = to_json(*row.estimate);
    for (const auto& [k, v] : est.items()) j[k] = v;
  } else {
    for (const auto& name : estimate_csv_columns()) j[name] = nullptr;
  }
  return j;
}

}  // namespace

std::vector<Json> rows_from_json(const Json& report) {
  if (!report.is_object() || !report.contains("rows") || !report["rows"].is_array()) {
    throw ConfigError("rows", "not a run report: missing 'rows' array");
  }
  return {report["rows"].begin(), report["rows"].end()};
}

std::vector<Aggregate> aggregate_json_rows(const std::vector<Json>& rows) {
  std::vector<Aggregate> out;
  static const std::vector<std::string> skip{"replicate", "replicate_seed", "n", "seed",
                                             "weak_tol", "bootstrap_replicates"};
  for (const auto& name : estimate_csv_columns()) {
    if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
    std::vector<double> values;
    bool numeric_field = false;
    for (const auto& row : rows) {
      auto it = row.find(name);
      if (it != row.end() && it->is_number()) {
        values.push_back(it->get<double>());
        numeric_field = true;
      }
    }
    if (!numeric_field) continue;
    Aggregate a;
    a.field = name;
    a.count = values.size();
    for (double v : values) a.mean += v;
    a.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - a.mean) * (v - a.mean);
      a.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(a);
  }
  return out;
}

std::vector<Aggregate> aggregate_rows(const std::vector<ReplicateRow>& rows) {
  std::vector<Json> js;
  js.reserve(rows.size());
  for (const auto& r : rows) js.push_back(row_json(r));
  return aggregate_json_rows(js);
}

Json to_json(const std::vector<Aggregate>& aggregates) {
  Json j = Json::object();
  for (const auto& a : aggregates) {
    j[a.field] = {{"count", a.count}, {"mean", a.mean}, {"sd", a.sd}};
  }
  return j;
}

Json to_json(const RunReport& r) {
  Json j;
  j["tool_version"] = r.tool_version;
  j["config_digest"] = r.config_digest;
  j["scenario"] = r.scenario.empty() ? Json(nullptr) : Json(r.scenario);
  j["master_seed"] = r.master_seed;
  j["replicates"] = r.rows.size();
  j["failed_replicates"] = r.failed_rows();
  EstimateReport oracle_only;
  oracle_only.oracle_parent = r.oracle_parent;
  oracle_only.oracle_child = r.oracle_child;
  oracle_only.gaps = r.gaps;
  Json oracle;
  const Json oracle_fields = to_json(oracle_only);
  for (const auto& [k, v] : oracle_fields.items()) {
    if (k.rfind("oracle_", 0) == 0 || k.rfind("stability_gap_", 0) == 0) oracle[k] = v;
  }
  j["oracle"] = oracle;
  j["aggregates"] = to_json(r.aggregates);
  if (r.verdicts) j["verdicts"] = to_json(*r.verdicts);
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(row_json(row));
  j["rows"] = rows;
  return j;
}

std::string to_csv(const RunReport& r) {
  std::string out = "replicate,replicate_seed,status,error";
  for (const auto& name : estimate_csv_columns()) out += "," + name;
  out += '\n';
  const std::size_t n_fields = estimate_csv_columns().size();
  for (const auto& row : r.rows) {
    out += std::to_string(row.replicate) + "," + std::to_string(row.seed) + ",";
    if (row.estimate) {
      out += "ok,," + estimate_csv_row(*row.estimate);
    } else {
      std::string err = row.error;
      std::replace(err.begin(), err.end(), '"', '\'');
      out += "error,\"" + err + "\"" + std::string(n_fields, ',');
    }
    out += '\n';
  }
  return out;
}

}  // namespace mrproxy
