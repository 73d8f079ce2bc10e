#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "linear_sem.hpp"
#include "mrproxy/errors.hpp"
#include "mrproxy/estimators.hpp"
#include "mrproxy/trio_scm.hpp"

namespace mrproxy {
namespace {

double cov(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = weighted_mean(x), my = weighted_mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size());
}

double mean(const std::vector<double>& x) { return weighted_mean(x); }

// Exact cov(D, D_P) by enumerating parent genotype, transmitted allele and
// mate allele.
double enumerated_dosage_covariance(double p) {
  const double pg[3] = {(1 - p) * (1 - p), 2 * p * (1 - p), p * p};
  double e_dp = 0, e_d = 0, e_dpd = 0;
  for (int dp = 0; dp < 3; ++dp) {
    for (int t = 0; t < 2; ++t) {
      const double pt = t == 1 ? dp / 2.0 : 1.0 - dp / 2.0;
      for (int m = 0; m < 2; ++m) {
        const double w = pg[dp] * pt * (m == 1 ? p : 1 - p);
        e_dp += w * dp;
        e_d += w * (t + m);
        e_dpd += w * dp * (t + m);
      }
    }
  }
  return e_dpd - e_dp * e_d;
}

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ScmConfig small(std::int64_t n, std::uint64_t seed = 5) {
  ScmConfig c;
  c.n = n;
  c.seed = seed;
  return c;
}

TEST(Inheritance, DosageMeanAtHalfFrequency) {
  ScmConfig c = small(1'000'000, 11);
  c.allele_freq = 0.5;
  const auto ds = sample_trio(c);
  EXPECT_NEAR(mean(ds.child.dosage), 1.0, 0.005);
  EXPECT_NEAR(mean(ds.parent.dosage), 1.0, 0.005);
}

TEST(Inheritance, ParentChildDosageCovariance) {
  const double exact = enumerated_dosage_covariance(0.3);
  EXPECT_NEAR(exact, 0.3 * 0.7, 1e-12);
  const auto ds = sample_trio(small(1'000'000, 12));
  EXPECT_NEAR(cov(ds.child.dosage, ds.parent.dosage) / exact, 1.0, 0.02);
}

TEST(Inheritance, ChildDosageIsTransmittedPlusMateAllele) {
  const auto ds = sample_trio(small(50'000));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ASSERT_EQ(ds.child.dosage[i], ds.transmitted[i] + ds.mate_allele[i]);
    ASSERT_LE(ds.transmitted[i], ds.parent.dosage[i]);
    ASSERT_GE(ds.transmitted[i], ds.parent.dosage[i] - 1.0);
  }
}

TEST(Sampling, SameSeedSameData) {
  EXPECT_EQ(sample_trio(small(20'000, 9)), sample_trio(small(20'000, 9)));
  EXPECT_NE(sample_trio(small(20'000, 9)).child.outcome,
            sample_trio(small(20'000, 10)).child.outcome);
}

TEST(Sampling, ThreadCountDoesNotChangeOutput) {
  const auto one = sample_trio(small(30'001, 4), {.threads = 1});
  EXPECT_EQ(one, sample_trio(small(30'001, 4), {.threads = 4}));
  EXPECT_EQ(one, sample_trio(small(30'001, 4), {.threads = 7}));
}

TEST(Sampling, ConfounderIndependentOfGenotype) {
  const auto ds = sample_trio(small(1'000'000, 13));
  EXPECT_LT(std::abs(correlation(ds.child.dosage, ds.child.confounder)), 0.005);
  EXPECT_LT(std::abs(correlation(ds.parent.dosage, ds.parent.confounder)), 0.005);
}

void expect_consistent(const GenerationColumns& g, const GenerationParams& p) {
  for (std::size_t i = 0; i < g.dosage.size(); ++i) {
    const double observed_arm = g.dosage[i] >= 1.0 ? g.exposure_cf_high[i] : g.exposure_cf_low[i];
    ASSERT_EQ(g.exposure[i], observed_arm);
    // Outcomes are linear in the exposure with everything else held fixed.
    ASSERT_NEAR(g.outcome_cf_1[i] - g.outcome_cf_0[i], p.exposure_outcome_coef, 1e-12);
    ASSERT_NEAR(g.outcome[i], g.outcome_cf_0[i] + p.exposure_outcome_coef * g.exposure[i], 1e-9);
  }
}

TEST(Counterfactuals, ConsistencyLinearAndThreshold) {
  ScmConfig c = small(20'000);
  expect_consistent(sample_trio(c).child, c.child);
  c.child.exposure_model = ExposureModel::kThreshold;
  c.child.exposure_intercept = -1.0;
  c.parent.exposure_model = ExposureModel::kThreshold;
  const auto ds = sample_trio(c);
  expect_consistent(ds.child, c.child);
  expect_consistent(ds.parent, c.parent);
}

TEST(Counterfactuals, NoDefiersWithNonNegativeGeneEffect) {
  ScmConfig c = small(50'000);
  c.child.exposure_model = ExposureModel::kThreshold;
  c.child.exposure_intercept = -1.0;
  const auto ds = sample_trio(c);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ASSERT_GE(ds.child.exposure_cf_high[i], ds.child.exposure_cf_low[i]);
  }
}

TEST(Config, ValidationNamesTheField) {
  auto field_of = [](const ScmConfig& c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<valid>");
  };
  ScmConfig c;
  EXPECT_EQ(field_of(c), "<valid>");
  c.allele_freq = 0.0;
  EXPECT_EQ(field_of(c), "allele_freq");
  c = {};
  c.allele_freq = 1.2;
  EXPECT_EQ(field_of(c), "allele_freq");
  c = {};
  c.parent.outcome_noise_sd = -1.0;
  EXPECT_EQ(field_of(c), "parent.outcome_noise_sd");
  c = {};
  c.n = 0;
  EXPECT_EQ(field_of(c), "n");
  c = {};
  c.child.exposure_model = ExposureModel::kThreshold;
  c.child.gene_exposure_coef = -0.5;
  EXPECT_EQ(field_of(c), "child.gene_exposure_coef");
  c.child.allow_defiers = true;
  EXPECT_EQ(field_of(c), "<valid>");
}

TEST(EffectOracle, LinearModelsAreHomogeneous) {
  const ScmConfig c;
  for (Generation g : {Generation::kParent, Generation::kChild}) {
    const auto e = oracle_effects(c, g, 1000);
    EXPECT_DOUBLE_EQ(e.ate, 0.3);
    EXPECT_DOUBLE_EQ(e.ett, 0.3);
    ASSERT_TRUE(e.late.has_value());
    EXPECT_DOUBLE_EQ(*e.late, 0.3);
    EXPECT_DOUBLE_EQ(e.complier_share, 1.0);
  }
}

TEST(EffectOracle, FamineReversesTheChildEffect) {
  ScmConfig c;
  c.child.exposure_outcome_coef = -0.3;
  const auto parent = oracle_effects(c, Generation::kParent, 1000);
  const auto child = oracle_effects(c, Generation::kChild, 1000);
  EXPECT_GT(parent.ate, 0.0);
  EXPECT_LT(child.ate, 0.0);
}

TEST(EffectOracle, ThresholdComplierShareMatchesNormalIntegral) {
  ScmConfig c;
  c.child.exposure_model = ExposureModel::kThreshold;
  c.child.exposure_intercept = -1.0;
  c.child.gene_exposure_coef = 0.8;
  const auto e = oracle_effects(c, Generation::kChild, 1'000'000);

  const double p = c.allele_freq;
  const double pd[3] = {(1 - p) * (1 - p), 2 * p * (1 - p), p * p};
  const double s = std::hypot(c.child.confounder_exposure_coef, c.child.exposure_noise_sd);
  double share = 0.0;
  for (int d = 0; d < 3; ++d) {
    const double high = std::max(d, 1);
    share += pd[d] * (phi((-1.0 + 0.8 * high) / s) - phi(-1.0 / s));
  }
  EXPECT_NEAR(e.complier_share, share, 0.01);
  ASSERT_TRUE(e.late.has_value());
  EXPECT_NEAR(*e.late, 0.3, 1e-9);
  EXPECT_NEAR(e.ett, 0.3, 1e-9);
  EXPECT_NEAR(e.ate, 0.3, 1e-9);
}

TEST(EffectOracle, DefiersMakeLateUnavailable) {
  ScmConfig c;
  c.child.exposure_model = ExposureModel::kThreshold;
  c.child.gene_exposure_coef = -0.5;
  c.child.allow_defiers = true;
  const auto e = oracle_effects(c, Generation::kChild, 10'000);
  EXPECT_FALSE(e.late.has_value());
  EXPECT_THROW(e.require_late(), NonMonotoneExposure);
}

void expect_associations_match_population(const ScmConfig& c) {
  const testing::LinearSem sem(c);
  const auto a = oracle_associations(c, 1'000'000);
  EXPECT_NEAR(a.gy, sem.slope("G", "Y"), 0.01);
  EXPECT_NEAR(a.ga, sem.slope("G", "A"), 0.01);
  EXPECT_NEAR(a.gpyp, sem.slope("G_P", "Y_P"), 0.01);
  EXPECT_NEAR(a.gpap, sem.slope("G_P", "A_P"), 0.01);
  EXPECT_NEAR(a.gyp, sem.slope("G", "Y_P"), 0.01);
}

TEST(Associations, IdenticalGenerations) {
  const ScmConfig c;
  expect_associations_match_population(c);
  const auto a = oracle_associations(c, 1'000'000);
  EXPECT_NEAR(a.gy, a.gpyp, 0.01);
  EXPECT_NEAR(a.gyp / a.gpyp, 0.5, 0.02 * 0.5);
}

TEST(Associations, HalvedChildGeneExposureEffect) {
  ScmConfig c;
  c.child.gene_exposure_coef = c.parent.gene_exposure_coef / 2.0;
  expect_associations_match_population(c);
  const auto a = oracle_associations(c, 1'000'000);
  EXPECT_NEAR(a.ga, a.gpap / 2.0, 0.01);
}

TEST(Associations, AuxPathwayAndDirectEffect) {
  ScmConfig c;
  c.parent.aux_pathway_coef = 0.4;
  c.child.direct_gene_outcome_coef = 0.25;
  expect_associations_match_population(c);
}

}  // namespace
}  // namespace mrproxy
