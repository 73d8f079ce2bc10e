#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mrproxy/config_json.hpp"
#include "mrproxy/expectations.hpp"
#include "mrproxy/report.hpp"

namespace mrproxy {

inline constexpr const char* kToolVersion = MRPROXY_VERSION;

enum class OutputFormat { kCsv, kJson };
OutputFormat parse_format(std::string_view s);

// Batch-run configuration, read from JSON:
//   {
//     "scenario": "baseline_mendelian",            // optional base config
//     "scm": { "allele_freq": 0.3, "n": 100000, "parent": {...}, "child": {...} },
//     "estimator": { "contrast": "dosage", "f": "mendelian",
//                    "weak_tol": 1e-4, "bootstrap_replicates": 0 },
//     "replicates": 20,
//     "master_seed": 7,
//     "oracle_n": 1000000,
//     "evaluate_expectations": false,
//     "threads": 0,
//     "output": { "path": "run.json", "format": "json" }
//   }
// Unknown keys anywhere are rejected.
struct ExperimentConfig {
  std::string scenario;
  ScmConfig scm;
  EstimateSettings estimator;
  int replicates = 1;
  std::uint64_t master_seed = 1;
  std::int64_t oracle_n = 1'000'000;
  bool evaluate_expectations = false;
  unsigned threads = 0;
  std::string output_path;
  OutputFormat format = OutputFormat::kJson;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const Json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
Json to_json(const ExperimentConfig& config);

struct ReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::optional<EstimateReport> estimate;
  std::string error;
};

struct Aggregate {
  std::string field;
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
};

struct RunReport {
  std::string tool_version = kToolVersion;
  std::string config_digest;
  std::string scenario;
  std::uint64_t master_seed = 0;
  std::vector<ReplicateRow> rows;
  std::vector<Aggregate> aggregates;
  std::optional<EffectOracle> oracle_parent;
  std::optional<EffectOracle> oracle_child;
  std::optional<StabilityGaps> gaps;
  std::optional<ScenarioResult> verdicts;

  std::size_t failed_rows() const;
};

// Replicate r samples with scm.seed = derive_seed(master_seed, r). Oracles
// use the config with seed = master_seed. Replicates run concurrently; rows
// are ordered by replicate index. Estimator failures are kept per row.
RunReport run_experiment(const ExperimentConfig& config);

// Mean and sd over successful rows for every numeric EstimateReport field.
std::vector<Aggregate> aggregate_rows(const std::vector<ReplicateRow>& rows);

Json to_json(const RunReport& report);
std::string to_csv(const RunReport& report);
// Inverse of to_json for the row section; used by `report` to merge runs.
std::vector<Json> rows_from_json(const Json& report);
std::vector<Aggregate> aggregate_json_rows(const std::vector<Json>& rows);
Json to_json(const std::vector<Aggregate>& aggregates);

}  // namespace mrproxy
