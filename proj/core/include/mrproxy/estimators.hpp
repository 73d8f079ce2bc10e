#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "mrproxy/stats.hpp"
#include "mrproxy/trio_scm.hpp"

namespace mrproxy {

enum class ContrastMethod { kDosageSlope, kBinaryCarrier };
enum class Correction { kMendelian, kIdentity };

std::string_view to_string(ContrastMethod m);
std::string_view to_string(Correction c);
// "dosage"/"dosage_slope", "carrier"/"binary_carrier"; "mendelian", "identity".
ContrastMethod parse_contrast(std::string_view s);
Correction parse_correction(std::string_view s);

inline constexpr double kDefaultWeakTol = 1e-4;

// Instrument-outcome contrast: least-squares slope on dosage, or the
// carrier minus non-carrier mean difference.
double assoc_diff(std::span<const double> instrument, std::span<const double> outcome,
                  ContrastMethod method, RowWeights weights = {});

// num / den; throws WeakInstrument when |den| < weak_tol.
double wald(double num, double den, double weak_tol = kDefaultWeakTol);

// A child carries one of the parent's two alleles, so the child-genotype
// association with a parental trait is half the parent-genotype one.
constexpr double f_mendelian(double x) { return 2.0 * x; }
constexpr double f_identity(double x) { return x; }
double apply_correction(Correction f, double x);

// f(assoc(Y_P on G)) / assoc(A on G) on observed columns only.
double proxy_wald(const ObservedView& data, Correction f, ContrastMethod method,
                  double weak_tol = kDefaultWeakTol, RowWeights weights = {});

// Population-level contrasts on a latent-complete sample.
//   gy   : child outcome on child genotype
//   ga   : child exposure on child genotype
//   gpyp : parent outcome on parent genotype
//   gpap : parent exposure on parent genotype
//   gyp  : parent outcome on child genotype
struct Associations {
  double gy = 0.0;
  double ga = 0.0;
  double gpyp = 0.0;
  double gpap = 0.0;
  double gyp = 0.0;
};

Associations associations_of(const TrioDataset& data, ContrastMethod method,
                             RowWeights weights = {});
Associations oracle_associations(const ScmConfig& config, std::int64_t big_n,
                                 ContrastMethod method = ContrastMethod::kDosageSlope,
                                 SampleOptions options = {});

// Left minus right side of the gene-outcome and gene-exposure stability
// equalities; each left side uses the child genotype, each right side the
// parent's own genotype.
struct StabilityGaps {
  double outcome = 0.0;
  double exposure = 0.0;
};

StabilityGaps gaps_of(const Associations& a);
StabilityGaps stability_gaps(const ScmConfig& config, std::int64_t big_n,
                             ContrastMethod method = ContrastMethod::kDosageSlope,
                             SampleOptions options = {});

namespace oracle {

// Wald ratio on the participants' own (unobserved) outcome:
// assoc(Y on G) / assoc(A on G). Diagnostic only.
double wald_child(const TrioDataset& data, ContrastMethod method,
                  double weak_tol = kDefaultWeakTol, RowWeights weights = {});
// Same ratio from bare columns (child dosage, exposure, own outcome).
double wald_child(std::span<const double> dosage, std::span<const double> exposure,
                  std::span<const double> outcome, ContrastMethod method,
                  double weak_tol = kDefaultWeakTol);

}  // namespace oracle

}  // namespace mrproxy
