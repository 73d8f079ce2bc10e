#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrproxy/config_json.hpp"
#include "mrproxy/dag.hpp"
#include "mrproxy/estimators.hpp"
#include "mrproxy/trio_scm.hpp"

namespace mrproxy {

struct EstimateSettings {
  ContrastMethod contrast = ContrastMethod::kDosageSlope;
  Correction f = Correction::kMendelian;
  double weak_tol = kDefaultWeakTol;
  // 0 disables bootstrap standard errors.
  int bootstrap_replicates = 0;
  std::uint64_t bootstrap_seed = 0;
  unsigned threads = 0;
};

// Everything known about one estimation run. Fields that need latent data or
// a generating config stay empty when those are unavailable.
struct EstimateReport {
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_digest;
  ContrastMethod contrast = ContrastMethod::kDosageSlope;
  Correction f = Correction::kMendelian;
  double weak_tol = kDefaultWeakTol;

  double gy_p_assoc = 0.0;
  double ga_assoc = 0.0;
  double proxy_wald = 0.0;
  std::optional<double> wald_child;

  std::optional<EffectOracle> oracle_parent;
  std::optional<EffectOracle> oracle_child;
  std::optional<StabilityGaps> gaps;

  int bootstrap_replicates = 0;
  std::optional<double> se_gy_p_assoc;
  std::optional<double> se_ga_assoc;
  std::optional<double> se_proxy_wald;

  std::string f_used() const;
};

// Observed-column estimates (and bootstrap SEs when requested).
EstimateReport estimate(const ObservedView& data, const EstimateSettings& settings);

// Latent diagnostic: the Wald ratio on the participants' own outcome.
void add_latent_diagnostics(EstimateReport& report, const TrioDataset& data);

// Oracle estimands and stability gaps for the generating config.
void add_oracles(EstimateReport& report, const ScmConfig& config, std::int64_t big_n,
                 unsigned threads = 0);

// Flat object; absent or non-finite values serialize as null.
Json to_json(const EstimateReport& report);
// CSV header and row with the same keys as to_json.
std::vector<std::string> estimate_csv_columns();
std::string estimate_csv_row(const EstimateReport& report);

Json to_json(const Dag& dag, const IvReport& report);

}  // namespace mrproxy
