#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrproxy/config_json.hpp"
#include "mrproxy/estimators.hpp"
#include "mrproxy/scenarios.hpp"

namespace mrproxy {

struct EvalOptions {
  std::uint64_t seed = 1;
  std::int64_t n = 1'000'000;
  std::int64_t big_n = 1'000'000;
  int bootstrap_replicates = 500;
  ContrastMethod contrast = ContrastMethod::kDosageSlope;
  Correction f = Correction::kMendelian;
  double weak_tol = kDefaultWeakTol;
  unsigned threads = 0;
};

struct Verdict {
  Expectation expectation;
  bool passed = false;
  // Human-readable observed values, e.g. "proxy_wald=0.3012 ref=0.3".
  std::string observed;
  std::vector<std::string> witnesses;
  std::string error;
};

struct ScenarioResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;

  bool passed() const;
};

// Evaluates every expectation of `scenario` with the data seed replaced by
// options.seed. Samples and bootstrap runs are computed only when some
// expectation needs them, and at most once.
ScenarioResult evaluate_scenario(const Scenario& scenario, const EvalOptions& options);

Json to_json(const ScenarioResult& result);

}  // namespace mrproxy
