#include "mrproxy/scenarios.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "mrproxy/dag_io.hpp"

namespace mrproxy {

std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::kIsTrue: return "is_true";
    case Comparator::kIsFalse: return "is_false";
    case Comparator::kAbsDiffBelow: return "abs_diff_below";
    case Comparator::kAbsDiffAbove: return "abs_diff_above";
    case Comparator::kRatioNear: return "ratio_near";
    case Comparator::kSameSign: return "same_sign";
    case Comparator::kOppositeSign: return "opposite_sign";
    case Comparator::kExceedsSeMultiple: return "exceeds_se_multiple";
    case Comparator::kHasWitness: return "has_witness";
  }
  return "?";
}

bool is_known_quantity(std::string_view descriptor) {
  static const std::regex pattern(
      R"(iv\.(relevance|exclusion|unconfounded|causal|valid)\(\w+,\w+,\w+\))"
      R"(|witness\.(exclusion|confounding)\(\w+,\w+,\w+\))"
      R"(|proxy_wald|wald_child|assoc\.(gyp|ga))"
      R"(|oracle\.(parent|child)\.(ate|ett|late|complier_share))"
      R"(|gap\.(outcome|exposure))"
      R"(|se\.(proxy_wald|assoc\.gyp|assoc\.ga|gap\.outcome|gap\.exposure))");
  return std::regex_match(descriptor.begin(), descriptor.end(), pattern);
}

namespace {

constexpr const char* kCanonicalDag = R"(# Two-generation trio
node G_P latent
node G observed
node A_P latent
node Y_P observed
node A observed
node Y latent
node U_P latent
node U latent
edge G_P G
edge G_P A_P
edge U_P A_P
edge A_P Y_P
edge U_P Y_P
edge G A
edge U A
edge A Y
edge U Y
)";

constexpr const char* kVaccineChannel = R"(
node B_P latent
edge G_P B_P
edge B_P Y_P
)";

ScmConfig default_config() {
  ScmConfig c;
  c.allele_freq = 0.3;
  c.n = 1'000'000;
  c.seed = 20240611;
  return c;  // GenerationParams defaults are the shipped effect sizes
}

Expectation holds(std::string q, std::string claim) {
  return {std::move(q), Comparator::kIsTrue, "", 0.0, 0.0, "", std::move(claim)};
}

Expectation fails(std::string q, std::string claim) {
  return {std::move(q), Comparator::kIsFalse, "", 0.0, 0.0, "", std::move(claim)};
}

Expectation near(std::string q, std::string ref, double tol, std::string claim) {
  return {std::move(q), Comparator::kAbsDiffBelow, std::move(ref), 0.0, tol, "", std::move(claim)};
}

Expectation near_value(std::string q, double target, double tol, std::string claim) {
  return {std::move(q), Comparator::kAbsDiffBelow, "", target, tol, "", std::move(claim)};
}

Expectation far(std::string q, std::string ref, double tol, std::string claim) {
  return {std::move(q), Comparator::kAbsDiffAbove, std::move(ref), 0.0, tol, "", std::move(claim)};
}

Expectation witness(std::string q, std::string path, std::string claim) {
  return {std::move(q), Comparator::kHasWitness, "", 0.0, 0.0, std::move(path), std::move(claim)};
}

Expectation sign_rel(std::string q, Comparator c, std::string ref, std::string claim) {
  return {std::move(q), c, std::move(ref), 0.0, 0.0, "", std::move(claim)};
}

Expectation significant(std::string q, std::string se, double k, std::string claim) {
  return {std::move(q), Comparator::kExceedsSeMultiple, std::move(se), k, 0.0, "", std::move(claim)};
}

std::vector<Expectation> canonical_iv_expectations() {
  return {
      holds("iv.valid(G,A,Y)", "G is a valid instrument for A -> Y"),
      holds("iv.valid(G_P,A_P,Y_P)", "G_P is a valid instrument for A_P -> Y_P"),
      holds("iv.valid(G,A_P,Y_P)", "G is a valid instrument for A_P -> Y_P"),
      fails("iv.causal(G,A_P,Y_P)", "G is a non-causal instrument for A_P -> Y_P"),
  };
}

}  // namespace

Dag canonical_dag() { return parse_dag(kCanonicalDag); }

Dag vaccine_dag() { return parse_dag(std::string(kCanonicalDag) + kVaccineChannel); }

Scenario baseline_mendelian() {
  Scenario s{"baseline_mendelian",
             "Identical generations under random mating; every instrument assumption "
             "and both stability equalities hold.",
             canonical_dag(), default_config(), canonical_iv_expectations()};
  auto& e = s.expectations;
  e.push_back(near_value("gap.outcome", 0.0, 0.01, "gene-outcome association is stable"));
  e.push_back(near_value("gap.exposure", 0.0, 0.01, "gene-exposure association is stable"));
  e.push_back(near("proxy_wald", "oracle.parent.late", 0.02, "proxy Wald recovers the parent LATE"));
  e.push_back(near("proxy_wald", "oracle.child.late", 0.02, "proxy Wald recovers the child LATE"));
  return s;
}

Scenario vaccine_exclusion() {
  ScmConfig c = default_config();
  c.parent.aux_pathway_coef = 0.4;
  c.child.aux_pathway_coef = 0.0;
  Scenario s{"vaccine_exclusion",
             "The variant also causes condition B, which shortened parental lives; a "
             "childhood vaccine removed the channel in the participants.",
             vaccine_dag(), c, {}};
  auto& e = s.expectations;
  e.push_back(fails("iv.exclusion(G_P,A_P,Y_P)", "G_P -> B_P -> Y_P breaks the exclusion restriction"));
  e.push_back(witness("witness.exclusion(G_P,A_P,Y_P)", "G_P -> B_P -> Y_P",
                      "exclusion witness is the vaccine channel"));
  e.push_back(fails("iv.valid(G,A_P,Y_P)", "G is no longer a valid instrument for A_P -> Y_P"));
  e.push_back(fails("iv.unconfounded(G,A_P,Y_P)", "G <- G_P -> B_P -> Y_P is an open path"));
  e.push_back(witness("witness.confounding(G,A_P,Y_P)", "G <- G_P -> B_P -> Y_P",
                      "confounding witness appends G <- G_P to the channel"));
  e.push_back(holds("iv.valid(G,A,Y)", "G stays a valid instrument for A -> Y"));
  e.push_back(far("proxy_wald", "oracle.parent.late", 0.05,
                  "proxy Wald is biased away from the parent LATE"));
  return s;
}

Scenario famine_reversal() {
  ScmConfig c = default_config();
  c.child.exposure_outcome_coef = -c.parent.exposure_outcome_coef;
  Scenario s{"famine_reversal",
             "A famine in the participants' generation makes the exposure protective for "
             "them but harmful for their parents.",
             canonical_dag(), c, canonical_iv_expectations()};
  auto& e = s.expectations;
  e.push_back(sign_rel("oracle.parent.ate", Comparator::kOppositeSign, "oracle.child.ate",
                       "parent and child effects have opposite signs"));
  e.push_back(sign_rel("assoc.gyp", Comparator::kSameSign, "oracle.parent.ate",
                       "G-Y_P association has the sign of the parent effect"));
  e.push_back(sign_rel("assoc.gyp", Comparator::kOppositeSign, "oracle.child.ate",
                       "G-Y_P association has the opposite sign of the child effect"));
  e.push_back(significant("assoc.gyp", "se.assoc.gyp", 3.0,
                          "G-Y_P association exceeds 3 bootstrap SEs"));
  e.push_back(near("proxy_wald", "oracle.parent.late", 0.02, "proxy Wald recovers the parent LATE"));
  e.push_back(far("proxy_wald", "oracle.child.late", 0.5, "proxy Wald is far from the child LATE"));
  return s;
}

Scenario drifted_gene_exposure() {
  ScmConfig c = default_config();
  c.child.gene_exposure_coef = c.parent.gene_exposure_coef / 2.0;
  Scenario s{"drifted_gene_exposure",
             "The per-allele effect on the exposure halves between generations; the graph "
             "is unchanged.",
             canonical_dag(), c, canonical_iv_expectations()};
  auto& e = s.expectations;
  e.push_back(significant("gap.exposure", "se.gap.exposure", 5.0,
                          "gene-exposure association drifts by more than 5 SEs"));
  e.push_back({"proxy_wald", Comparator::kRatioNear, "oracle.parent.late", 2.0, 0.05, "",
               "proxy Wald is twice the parent LATE"});
  return s;
}

Scenario outcome_stable() {
  ScmConfig c = default_config();
  c.child.gene_exposure_coef = c.parent.gene_exposure_coef / 2.0;
  c.child.exposure_outcome_coef = 2.0 * c.parent.exposure_outcome_coef;
  Scenario s{"outcome_stable",
             "The gene-outcome association is stable across generations although the "
             "gene-exposure association and the effect both change.",
             canonical_dag(), c, canonical_iv_expectations()};
  auto& e = s.expectations;
  e.push_back(near_value("gap.outcome", 0.0, 0.01, "gene-outcome association is stable"));
  e.push_back(near("proxy_wald", "oracle.child.ett", 0.02, "proxy Wald recovers the child ETT"));
  e.push_back(near("proxy_wald", "oracle.child.late", 0.02, "proxy Wald recovers the child LATE"));
  e.push_back(near("wald_child", "proxy_wald", 0.02,
                   "proxy Wald equals the Wald ratio on the participants' own outcome"));
  e.push_back(far("proxy_wald", "oracle.parent.late", 0.2, "proxy Wald is not the parent LATE"));
  return s;
}

std::vector<Scenario> scenario_catalog() {
  std::vector<Scenario> out;
  out.push_back(baseline_mendelian());
  out.push_back(vaccine_exclusion());
  out.push_back(famine_reversal());
  out.push_back(drifted_gene_exposure());
  out.push_back(outcome_stable());
  return out;
}

std::optional<Scenario> find_scenario(std::string_view name) {
  for (auto& s : scenario_catalog()) {
    if (s.name == name) return std::move(s);
  }
  return std::nullopt;
}

std::vector<Dag::LabelEdge> structural_edges(const ScmConfig& config) {
  std::vector<Dag::LabelEdge> edges{{"G_P", "G"}};
  auto add_generation = [&](const GenerationParams& p, const std::string& suffix) {
    const std::string g = "G" + suffix, a = "A" + suffix, y = "Y" + suffix;
    const std::string u = "U" + suffix, b = "B" + suffix;
    if (p.gene_exposure_coef != 0.0) edges.emplace_back(g, a);
    if (p.confounder_exposure_coef != 0.0) edges.emplace_back(u, a);
    if (p.exposure_outcome_coef != 0.0) edges.emplace_back(a, y);
    if (p.confounder_outcome_coef != 0.0) edges.emplace_back(u, y);
    if (p.direct_gene_outcome_coef != 0.0) edges.emplace_back(g, y);
    if (p.aux_pathway_coef != 0.0) {
      edges.emplace_back(g, b);
      edges.emplace_back(b, y);
    }
  };
  add_generation(config.parent, "_P");
  add_generation(config.child, "");
  return edges;
}

std::string consistency_problem(const Dag& dag, const ScmConfig& config) {
  std::set<Dag::LabelEdge> implied;
  for (const auto& e : structural_edges(config)) implied.insert(e);
  for (const auto& e : implied) {
    if (!dag.has_edge(e.first, e.second)) {
      return "config implies " + e.first + " -> " + e.second + " but the DAG lacks it";
    }
  }
  for (const Edge& e : dag.edges()) {
    Dag::LabelEdge labels{dag.label(e.from), dag.label(e.to)};
    if (!implied.contains(labels)) {
      return "DAG edge " + labels.first + " -> " + labels.second +
             " has no nonzero coefficient in the config";
    }
  }
  return {};
}

Json to_json(const Expectation& e) {
  Json j;
  j["quantity"] = e.quantity;
  j["comparator"] = std::string(to_string(e.comparator));
  j["reference"] = e.reference.empty() ? Json(nullptr) : Json(e.reference);
  j["target"] = e.target;
  j["tolerance"] = e.tolerance;
  j["witness"] = e.witness.empty() ? Json(nullptr) : Json(e.witness);
  j["claim"] = e.claim;
  return j;
}

Json to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["dag"] = format_dag(s.dag);
  j["config"] = to_json(s.config);
  Json ex = Json::array();
  for (const auto& e : s.expectations) ex.push_back(to_json(e));
  j["expectations"] = ex;
  return j;
}

Json catalog_json() {
  Json j = Json::array();
  for (const auto& s : scenario_catalog()) j.push_back(to_json(s));
  return j;
}

}  // namespace mrproxy
