#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrproxy/config_json.hpp"
#include "mrproxy/dag.hpp"
#include "mrproxy/trio_scm.hpp"

namespace mrproxy {

enum class Comparator {
  kIsTrue,            // boolean quantity holds
  kIsFalse,           // boolean quantity fails
  kAbsDiffBelow,      // |q - ref| < tolerance      (ref = quantity or target)
  kAbsDiffAbove,      // |q - ref| > tolerance
  kRatioNear,         // |q / ref - target| <= tolerance * |target|
  kSameSign,          // sign(q) == sign(ref), both nonzero
  kOppositeSign,      // sign(q) == -sign(ref), both nonzero
  kExceedsSeMultiple, // |q| > target * ref           (ref is a standard error)
  kHasWitness,        // witness list of q contains `witness`
};

std::string_view to_string(Comparator c);

// One machine-checkable claim. `quantity` and `reference` are descriptors:
//   iv.<relevance|exclusion|unconfounded|causal|valid>(I,E,O)
//   witness.<exclusion|confounding>(I,E,O)
//   proxy_wald | wald_child | assoc.gyp | assoc.ga
//   oracle.<parent|child>.<ate|ett|late|complier_share>
//   gap.<outcome|exposure>
//   se.<proxy_wald|assoc.gyp|assoc.ga|gap.outcome|gap.exposure>
struct Expectation {
  std::string quantity;
  Comparator comparator = Comparator::kIsTrue;
  std::string reference;  // empty: compare against `target`
  double target = 0.0;
  double tolerance = 0.0;
  std::string witness;
  std::string claim;
};

bool is_known_quantity(std::string_view descriptor);

struct Scenario {
  std::string name;
  std::string description;
  Dag dag;
  ScmConfig config;
  std::vector<Expectation> expectations;
};

// G_P -> G, G_P -> A_P -> Y_P, G -> A -> Y, U_P -> {A_P, Y_P}, U -> {A, Y}.
// G, A and Y_P observed; G_P, A_P, Y, U_P, U latent.
Dag canonical_dag();
// canonical_dag() plus the parent-only channel G_P -> B_P -> Y_P.
Dag vaccine_dag();

Scenario baseline_mendelian();
Scenario vaccine_exclusion();
Scenario famine_reversal();
Scenario drifted_gene_exposure();
Scenario outcome_stable();

std::vector<Scenario> scenario_catalog();
std::optional<Scenario> find_scenario(std::string_view name);

// Edges implied by the nonzero coefficients of a config; G_P -> G always.
std::vector<Dag::LabelEdge> structural_edges(const ScmConfig& config);
// Empty when every implied edge is in the DAG and vice versa; otherwise a
// description of the first mismatch.
std::string consistency_problem(const Dag& dag, const ScmConfig& config);

Json to_json(const Expectation& e);
Json to_json(const Scenario& s);
Json catalog_json();

}  // namespace mrproxy
