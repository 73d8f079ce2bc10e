#include "mrproxy/trio_scm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mrproxy/errors.hpp"
#include "mrproxy/rng.hpp"

namespace mrproxy {

std::string_view to_string(ExposureModel m) {
  return m == ExposureModel::kLinear ? "linear" : "threshold";
}

std::string_view to_string(Generation g) {
  return g == Generation::kParent ? "parent" : "child";
}

void GenerationParams::validate(std::string_view where) const {
  const std::string prefix(where);
  auto finite = [&](double v, const char* field) {
    if (!std::isfinite(v)) throw ConfigError(prefix + "." + field, "must be finite");
  };
  finite(exposure_intercept, "exposure_intercept");
  finite(gene_exposure_coef, "gene_exposure_coef");
  finite(confounder_exposure_coef, "confounder_exposure_coef");
  finite(exposure_noise_sd, "exposure_noise_sd");
  finite(outcome_intercept, "outcome_intercept");
  finite(exposure_outcome_coef, "exposure_outcome_coef");
  finite(confounder_outcome_coef, "confounder_outcome_coef");
  finite(outcome_noise_sd, "outcome_noise_sd");
  finite(direct_gene_outcome_coef, "direct_gene_outcome_coef");
  finite(aux_pathway_coef, "aux_pathway_coef");
  if (exposure_noise_sd < 0.0) {
    throw ConfigError(prefix + ".exposure_noise_sd", "must be >= 0");
  }
  if (outcome_noise_sd < 0.0) {
    throw ConfigError(prefix + ".outcome_noise_sd", "must be >= 0");
  }
  if (exposure_model == ExposureModel::kThreshold && gene_exposure_coef < 0.0 &&
      !allow_defiers) {
    throw ConfigError(prefix + ".gene_exposure_coef",
                      "threshold exposure requires a non-negative gene effect "
                      "(monotonicity); set allow_defiers to opt out");
  }
}

void ScmConfig::validate() const {
  if (!(allele_freq > 0.0 && allele_freq < 1.0)) {
    throw ConfigError("allele_freq", "must lie strictly between 0 and 1");
  }
  if (n < 1) throw ConfigError("n", "must be >= 1");
  parent.validate("parent");
  child.validate("child");
}

void GenerationColumns::resize(std::size_t n) {
  for (auto* col : {&dosage, &confounder, &aux, &exposure, &outcome,
                    &exposure_cf_low, &exposure_cf_high, &outcome_cf_0,
                    &outcome_cf_1}) {
    col->resize(n);
  }
}

ObservedView::ObservedView(std::span<const double> dosage,
                           std::span<const double> exposure,
                           std::span<const double> proxy_outcome)
    : dosage_(dosage), exposure_(exposure), proxy_outcome_(proxy_outcome) {
  if (exposure.size() != dosage.size() || proxy_outcome.size() != dosage.size()) {
    throw std::invalid_argument("observed columns differ in length");
  }
}

namespace {

// Stream tags; one independent stream per (individual, variable).
enum Tag : std::uint64_t {
  kParentAlleles = 1,
  kTransmission,
  kMateAllele,
  kParentConfounder,
  kParentExposureNoise,
  kParentOutcomeNoise,
  kParentAuxNoise,
  kChildConfounder,
  kChildExposureNoise,
  kChildOutcomeNoise,
  kChildAuxNoise,
};

constexpr std::uint64_t kOracleStream = 0x6f7261636c65ULL;

double draw_normal(std::uint64_t seed, std::uint64_t i, Tag tag) {
  return CounterRng(seed, i, tag).normal();
}

struct Noise {
  double confounder;
  double exposure;
  double outcome;
  double aux;
};

void simulate_generation(const GenerationParams& p, double dose, const Noise& e,
                         GenerationColumns& out, std::size_t i) {
  const double linear_part = p.exposure_intercept + p.confounder_exposure_coef * e.confounder +
                             p.exposure_noise_sd * e.exposure;
  auto exposure_at = [&](double d) {
    const double index = linear_part + p.gene_exposure_coef * d;
    if (p.exposure_model == ExposureModel::kLinear) return index;
    return index > 0.0 ? 1.0 : 0.0;
  };
  const double aux = dose + e.aux;
  const double outcome_part = p.outcome_intercept + p.confounder_outcome_coef * e.confounder +
                              p.direct_gene_outcome_coef * dose +
                              p.aux_pathway_coef * aux + p.outcome_noise_sd * e.outcome;
  auto outcome_at = [&](double a) { return outcome_part + p.exposure_outcome_coef * a; };

  const double a = exposure_at(dose);
  out.dosage[i] = dose;
  out.confounder[i] = e.confounder;
  out.aux[i] = aux;
  out.exposure[i] = a;
  out.outcome[i] = outcome_at(a);
  out.exposure_cf_low[i] = exposure_at(0.0);
  out.exposure_cf_high[i] = exposure_at(std::max(dose, 1.0));
  out.outcome_cf_0[i] = outcome_at(0.0);
  out.outcome_cf_1[i] = outcome_at(1.0);
}

void sample_rows(const ScmConfig& c, std::uint64_t seed, TrioDataset& ds,
                 std::size_t begin, std::size_t end) {
  const double p = c.allele_freq;
  for (std::size_t i = begin; i < end; ++i) {
    CounterRng alleles(seed, i, kParentAlleles);
    const double first = alleles.bernoulli(p) ? 1.0 : 0.0;
    const double second = alleles.bernoulli(p) ? 1.0 : 0.0;
    const double transmitted =
        CounterRng(seed, i, kTransmission).bernoulli(0.5) ? second : first;
    const double mate = CounterRng(seed, i, kMateAllele).bernoulli(p) ? 1.0 : 0.0;
    ds.transmitted[i] = transmitted;
    ds.mate_allele[i] = mate;

    const Noise parent_noise{draw_normal(seed, i, kParentConfounder),
                             draw_normal(seed, i, kParentExposureNoise),
                             draw_normal(seed, i, kParentOutcomeNoise),
                             draw_normal(seed, i, kParentAuxNoise)};
    simulate_generation(c.parent, first + second, parent_noise, ds.parent, i);

    const Noise child_noise{draw_normal(seed, i, kChildConfounder),
                            draw_normal(seed, i, kChildExposureNoise),
                            draw_normal(seed, i, kChildOutcomeNoise),
                            draw_normal(seed, i, kChildAuxNoise)};
    simulate_generation(c.child, transmitted + mate, child_noise, ds.child, i);
  }
}

TrioDataset sample_with_seed(const ScmConfig& config, std::size_t n,
                             std::uint64_t seed, SampleOptions options) {
  TrioDataset ds;
  ds.transmitted.resize(n);
  ds.mate_allele.resize(n);
  ds.parent.resize(n);
  ds.child.resize(n);

  unsigned workers = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  constexpr std::size_t kMinRowsPerWorker = 16384;
  workers = static_cast<unsigned>(
      std::clamp<std::size_t>(n / kMinRowsPerWorker, 1, workers));
  if (workers == 1) {
    sample_rows(config, seed, ds, 0, n);
    return ds;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end] { sample_rows(config, seed, ds, begin, end); });
  }
  return ds;
}

}  // namespace

TrioDataset sample_trio(const ScmConfig& config, SampleOptions options) {
  config.validate();
  // jthreads join before the dataset leaves sample_with_seed.
  return sample_with_seed(config, static_cast<std::size_t>(config.n), config.seed,
                          options);
}

std::uint64_t oracle_seed(const ScmConfig& config) {
  return derive_seed(config.seed, kOracleStream);
}

TrioDataset oracle_sample(const ScmConfig& config, std::int64_t big_n,
                          SampleOptions options) {
  config.validate();
  if (big_n < 1) throw ConfigError("big_n", "must be >= 1");
  return sample_with_seed(config, static_cast<std::size_t>(big_n), oracle_seed(config),
                          options);
}

double EffectOracle::require_late() const {
  if (!late) {
    throw NonMonotoneExposure(
        "LATE is undefined: threshold exposure model allows defiers");
  }
  return *late;
}

EffectOracle effects_from_counterfactuals(const GenerationColumns& cols,
                                          const GenerationParams& params) {
  const std::size_t n = cols.exposure.size();
  double effect_sum = 0.0, treated_sum = 0.0, complier_sum = 0.0;
  std::size_t treated = 0, compliers = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double effect = cols.outcome_cf_1[i] - cols.outcome_cf_0[i];
    effect_sum += effect;
    if (cols.exposure[i] == 1.0) {
      treated_sum += effect;
      ++treated;
    }
    if (cols.exposure_cf_high[i] > cols.exposure_cf_low[i]) {
      complier_sum += effect;
      ++compliers;
    }
  }
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  EffectOracle out;
  out.ate = n > 0 ? effect_sum / static_cast<double>(n) : kNaN;
  out.ett = treated > 0 ? treated_sum / static_cast<double>(treated) : kNaN;
  out.complier_share = n > 0 ? static_cast<double>(compliers) / static_cast<double>(n) : kNaN;
  const bool monotone = params.exposure_model == ExposureModel::kLinear ||
                        params.gene_exposure_coef >= 0.0;
  if (monotone) {
    out.late = compliers > 0 ? complier_sum / static_cast<double>(compliers) : kNaN;
  }
  return out;
}

EffectOracle oracle_effects(const ScmConfig& config, Generation generation,
                            std::int64_t big_n, SampleOptions options) {
  config.validate();
  const GenerationParams& params = config.params(generation);
  if (params.exposure_model == ExposureModel::kLinear) {
    // Constant individual effect: every estimand equals the coefficient, and
    // A(high) - A(low) = gamma1 * max(D, 1) has the sign of gamma1.
    EffectOracle out;
    out.ate = out.ett = params.exposure_outcome_coef;
    out.late = params.exposure_outcome_coef;
    out.complier_share = params.gene_exposure_coef > 0.0 ? 1.0 : 0.0;
    return out;
  }
  const TrioDataset ds = oracle_sample(config, big_n, options);
  return effects_from_counterfactuals(ds.columns(generation), params);
}

}  // namespace mrproxy
