#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrproxy/stats.hpp"

namespace mrproxy {

enum class ExposureModel { kLinear, kThreshold };
enum class Generation { kParent, kChild };

std::string_view to_string(ExposureModel m);
std::string_view to_string(Generation g);

// Structural equations of one generation, with g the dosage, U ~ N(0,1) the
// generation's confounder and B = g + N(0,1) the auxiliary condition:
//   A* = exposure_intercept + gene_exposure_coef*g
//        + confounder_exposure_coef*U + exposure_noise_sd*eA
//   A  = A* (linear) or 1[A* > 0] (threshold)
//   Y  = outcome_intercept + exposure_outcome_coef*A + confounder_outcome_coef*U
//        + direct_gene_outcome_coef*g + aux_pathway_coef*B + outcome_noise_sd*eY
// The exposure effect is the same for every individual (homogeneity).
struct GenerationParams {
  ExposureModel exposure_model = ExposureModel::kLinear;
  double exposure_intercept = 0.0;
  double gene_exposure_coef = 2.0;
  double confounder_exposure_coef = 0.4;
  double exposure_noise_sd = 1.0;
  double outcome_intercept = 0.0;
  double exposure_outcome_coef = 0.3;
  double confounder_outcome_coef = 0.4;
  double outcome_noise_sd = 1.0;
  double direct_gene_outcome_coef = 0.0;
  double aux_pathway_coef = 0.0;
  // Threshold models need gene_exposure_coef >= 0 unless this is set.
  bool allow_defiers = false;

  // Throws ConfigError naming `where`.<field>.
  void validate(std::string_view where) const;
  bool operator==(const GenerationParams&) const = default;
};

struct ScmConfig {
  double allele_freq = 0.3;
  GenerationParams parent;
  GenerationParams child;
  std::int64_t n = 100000;
  std::uint64_t seed = 1;

  void validate() const;
  const GenerationParams& params(Generation g) const {
    return g == Generation::kParent ? parent : child;
  }
  bool operator==(const ScmConfig&) const = default;
};

// Columns of one generation. Counterfactual exposures are taken at the carrier
// contrast: low = dosage 0, high = max(dosage, 1). Counterfactual outcomes fix
// the exposure at 0 and 1 with everything else factual.
struct GenerationColumns {
  std::vector<double> dosage;
  std::vector<double> confounder;
  std::vector<double> aux;
  std::vector<double> exposure;
  std::vector<double> outcome;
  std::vector<double> exposure_cf_low;
  std::vector<double> exposure_cf_high;
  std::vector<double> outcome_cf_0;
  std::vector<double> outcome_cf_1;

  void resize(std::size_t n);
  bool operator==(const GenerationColumns&) const = default;
};

// Read-only view of the observed columns: child dosage G, child exposure A
// and parental outcome Y_P. Nothing latent is reachable from here.
class ObservedView {
 public:
  ObservedView(std::span<const double> dosage, std::span<const double> exposure,
               std::span<const double> proxy_outcome);

  std::size_t size() const { return dosage_.size(); }
  std::span<const double> dosage() const { return dosage_; }
  std::span<const double> exposure() const { return exposure_; }
  std::span<const double> proxy_outcome() const { return proxy_outcome_; }

 private:
  std::span<const double> dosage_;
  std::span<const double> exposure_;
  std::span<const double> proxy_outcome_;
};

// Owning observed-only table, as loaded from an exported CSV.
struct ObservedData {
  std::vector<double> dosage;
  std::vector<double> exposure;
  std::vector<double> proxy_outcome;

  ObservedView view() const { return {dosage, exposure, proxy_outcome}; }
};

struct TrioDataset {
  std::vector<double> transmitted;  // parental allele passed on, {0,1}
  std::vector<double> mate_allele;  // allele from the unmodelled parent, {0,1}
  GenerationColumns parent;
  GenerationColumns child;

  std::size_t size() const { return transmitted.size(); }
  ObservedView observed() const {
    return {child.dosage, child.exposure, parent.outcome};
  }
  const GenerationColumns& columns(Generation g) const {
    return g == Generation::kParent ? parent : child;
  }
  bool operator==(const TrioDataset&) const = default;
};

struct SampleOptions {
  // 0 picks std::thread::hardware_concurrency(). Output does not depend on it.
  unsigned threads = 0;
};

// Parent dosage ~ Binomial(2, p); the child receives one of the parent's two
// alleles uniformly at random plus a mate allele ~ Bernoulli(p).
TrioDataset sample_trio(const ScmConfig& config, SampleOptions options = {});

// Seed of the latent-complete sample used for population-level oracles.
std::uint64_t oracle_seed(const ScmConfig& config);
TrioDataset oracle_sample(const ScmConfig& config, std::int64_t big_n,
                          SampleOptions options = {});

struct EffectOracle {
  double ate = 0.0;
  double ett = 0.0;
  // Unavailable for threshold models that allow defiers.
  std::optional<double> late;
  double complier_share = 0.0;

  double require_late() const;  // throws NonMonotoneExposure
};

// ATE, ETT, LATE (carrier vs non-carrier compliers) and complier share for
// one generation. Linear models use the homogeneous closed form; threshold
// models are evaluated on counterfactual draws from a big_n sample.
EffectOracle oracle_effects(const ScmConfig& config, Generation generation,
                            std::int64_t big_n, SampleOptions options = {});
// The same quantities computed from a given sample's counterfactual columns.
EffectOracle effects_from_counterfactuals(const GenerationColumns& cols,
                                          const GenerationParams& params);

}  // namespace mrproxy
