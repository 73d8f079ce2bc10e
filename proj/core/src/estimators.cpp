#include "mrproxy/estimators.hpp"

#include <cmath>
#include <string>

#include "mrproxy/errors.hpp"

namespace mrproxy {

std::string_view to_string(ContrastMethod m) {
  return m == ContrastMethod::kDosageSlope ? "dosage_slope" : "binary_carrier";
}

std::string_view to_string(Correction c) {
  return c == Correction::kMendelian ? "mendelian" : "identity";
}

ContrastMethod parse_contrast(std::string_view s) {
  if (s == "dosage" || s == "dosage_slope") return ContrastMethod::kDosageSlope;
  if (s == "carrier" || s == "binary_carrier") return ContrastMethod::kBinaryCarrier;
  throw ConfigError("contrast", "expected dosage|carrier, got '" + std::string(s) + "'");
}

Correction parse_correction(std::string_view s) {
  if (s == "mendelian") return Correction::kMendelian;
  if (s == "identity") return Correction::kIdentity;
  throw ConfigError("f", "expected mendelian|identity, got '" + std::string(s) + "'");
}

double assoc_diff(std::span<const double> instrument, std::span<const double> outcome,
                  ContrastMethod method, RowWeights weights) {
  return method == ContrastMethod::kDosageSlope
             ? ols_slope(instrument, outcome, weights)
             : carrier_mean_difference(instrument, outcome, weights);
}

double wald(double num, double den, double weak_tol) {
  if (!(std::abs(den) >= weak_tol)) {
    throw WeakInstrument("gene-exposure contrast " + std::to_string(den) +
                         " is below the weak-instrument threshold " +
                         std::to_string(weak_tol));
  }
  return num / den;
}

double apply_correction(Correction f, double x) {
  return f == Correction::kMendelian ? f_mendelian(x) : f_identity(x);
}

double proxy_wald(const ObservedView& data, Correction f, ContrastMethod method,
                  double weak_tol, RowWeights weights) {
  const double outcome = assoc_diff(data.dosage(), data.proxy_outcome(), method, weights);
  const double exposure = assoc_diff(data.dosage(), data.exposure(), method, weights);
  return wald(apply_correction(f, outcome), exposure, weak_tol);
}

Associations associations_of(const TrioDataset& data, ContrastMethod method,
                             RowWeights weights) {
  const auto& p = data.parent;
  const auto& c = data.child;
  Associations a;
  a.gy = assoc_diff(c.dosage, c.outcome, method, weights);
  a.ga = assoc_diff(c.dosage, c.exposure, method, weights);
  a.gpyp = assoc_diff(p.dosage, p.outcome, method, weights);
  a.gpap = assoc_diff(p.dosage, p.exposure, method, weights);
  a.gyp = assoc_diff(c.dosage, p.outcome, method, weights);
  return a;
}

Associations oracle_associations(const ScmConfig& config, std::int64_t big_n,
                                 ContrastMethod method, SampleOptions options) {
  return associations_of(oracle_sample(config, big_n, options), method);
}

StabilityGaps gaps_of(const Associations& a) {
  return {a.gy - a.gpyp, a.ga - a.gpap};
}

StabilityGaps stability_gaps(const ScmConfig& config, std::int64_t big_n,
                             ContrastMethod method, SampleOptions options) {
  return gaps_of(oracle_associations(config, big_n, method, options));
}

namespace oracle {

double wald_child(const TrioDataset& data, ContrastMethod method, double weak_tol,
                  RowWeights weights) {
  const auto& c = data.child;
  return wald(assoc_diff(c.dosage, c.outcome, method, weights),
              assoc_diff(c.dosage, c.exposure, method, weights), weak_tol);
}

double wald_child(std::span<const double> dosage, std::span<const double> exposure,
                  std::span<const double> outcome, ContrastMethod method, double weak_tol) {
  return wald(assoc_diff(dosage, outcome, method), assoc_diff(dosage, exposure, method),
              weak_tol);
}

}  // namespace oracle

}  // namespace mrproxy
