#include "mrproxy/expectations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include "mrproxy/bootstrap.hpp"
#include "mrproxy/errors.hpp"
#include "mrproxy/rng.hpp"

namespace mrproxy {

bool ScenarioResult::passed() const {
  for (const auto& v : verdicts) {
    if (!v.passed) return false;
  }
  return !verdicts.empty();
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Lazily computed quantities for one (scenario, options) pair.
class QuantityContext {
 public:
  QuantityContext(const Scenario& s, const EvalOptions& o) : scenario_(s), opts_(o) {
    config_ = s.config;
    config_.seed = o.seed;
    config_.n = o.n;
  }

  const IvReport& iv(const std::string& i, const std::string& e, const std::string& o) {
    const std::string key = i + "," + e + "," + o;
    auto it = iv_.find(key);
    if (it == iv_.end()) {
      it = iv_.emplace(key, check_instrument(scenario_.dag, i, e, o)).first;
    }
    return it->second;
  }

  double number(const std::string& q) {
    if (auto it = numbers_.find(q); it != numbers_.end()) return it->second;
    const double v = compute(q);
    numbers_.emplace(q, v);
    return v;
  }

 private:
  const TrioDataset& data() {
    if (!data_) data_ = sample_trio(config_, {opts_.threads});
    return *data_;
  }

  const TrioDataset& oracle_data() {
    if (!oracle_data_) oracle_data_ = oracle_sample(config_, opts_.big_n, {opts_.threads});
    return *oracle_data_;
  }

  const EffectOracle& effects(Generation g) {
    auto& slot = g == Generation::kParent ? parent_ : child_;
    if (!slot) slot = oracle_effects(config_, g, opts_.big_n, {opts_.threads});
    return *slot;
  }

  BootstrapOptions boot() const {
    return {opts_.bootstrap_replicates, derive_seed(opts_.seed, 0xb007), opts_.threads};
  }

  double compute(const std::string& q) {
    const auto& method = opts_.contrast;
    if (q == "proxy_wald") return proxy_wald(data().observed(), opts_.f, method, opts_.weak_tol);
    if (q == "wald_child") return oracle::wald_child(data(), method, opts_.weak_tol);
    if (q == "assoc.gyp") {
      const auto v = data().observed();
      return assoc_diff(v.dosage(), v.proxy_outcome(), method);
    }
    if (q == "assoc.ga") {
      const auto v = data().observed();
      return assoc_diff(v.dosage(), v.exposure(), method);
    }
    if (q == "gap.outcome") return gaps_of(associations_of(oracle_data(), method)).outcome;
    if (q == "gap.exposure") return gaps_of(associations_of(oracle_data(), method)).exposure;

    static const std::regex oracle_re(R"(oracle\.(parent|child)\.(ate|ett|late|complier_share))");
    std::smatch m;
    if (std::regex_match(q, m, oracle_re)) {
      const EffectOracle& e = effects(m[1] == "parent" ? Generation::kParent : Generation::kChild);
      if (m[2] == "ate") return e.ate;
      if (m[2] == "ett") return e.ett;
      if (m[2] == "late") return e.require_late();
      return e.complier_share;
    }

    if (q == "se.proxy_wald") {
      const auto v = data().observed();
      return bootstrap_se(v.size(), [&](RowWeights w) {
        return proxy_wald(v, opts_.f, method, opts_.weak_tol, w);
      }, boot());
    }
    if (q == "se.assoc.gyp" || q == "se.assoc.ga") {
      const auto v = data().observed();
      const auto outcome = q == "se.assoc.gyp" ? v.proxy_outcome() : v.exposure();
      return bootstrap_se(v.size(), [&](RowWeights w) {
        return assoc_diff(v.dosage(), outcome, method, w);
      }, boot());
    }
    if (q == "se.gap.outcome" || q == "se.gap.exposure") {
      const TrioDataset& d = oracle_data();
      const bool outcome = q == "se.gap.outcome";
      return bootstrap_se(d.size(), [&](RowWeights w) {
        const auto& p = d.parent;
        const auto& c = d.child;
        return outcome ? assoc_diff(c.dosage, c.outcome, method, w) -
                             assoc_diff(p.dosage, p.outcome, method, w)
                       : assoc_diff(c.dosage, c.exposure, method, w) -
                             assoc_diff(p.dosage, p.exposure, method, w);
      }, boot());
    }
    throw Error("unknown quantity '" + q + "'");
  }

  const Scenario& scenario_;
  EvalOptions opts_;
  ScmConfig config_;
  std::optional<TrioDataset> data_;
  std::optional<TrioDataset> oracle_data_;
  std::optional<EffectOracle> parent_;
  std::optional<EffectOracle> child_;
  std::map<std::string, IvReport> iv_;
  std::map<std::string, double> numbers_;
};

struct GraphQuery {
  std::string kind;
  std::string field;
  std::string instrument, exposure, outcome;
};

std::optional<GraphQuery> parse_graph_query(const std::string& q) {
  static const std::regex re(R"((iv|witness)\.(\w+)\((\w+),(\w+),(\w+)\))");
  std::smatch m;
  if (!std::regex_match(q, m, re)) return std::nullopt;
  return GraphQuery{m[1], m[2], m[3], m[4], m[5]};
}

bool iv_field(const IvReport& r, const std::string& field) {
  if (field == "relevance") return r.relevance;
  if (field == "exclusion") return r.exclusion;
  if (field == "unconfounded") return r.unconfounded;
  if (field == "causal") return r.causal;
  return r.valid();
}

Verdict evaluate_one(const Expectation& e, const Scenario& s, QuantityContext& ctx) {
  Verdict v{e, false, {}, {}, {}};
  try {
    if (auto g = parse_graph_query(e.quantity)) {
      const IvReport& r = ctx.iv(g->instrument, g->exposure, g->outcome);
      const auto& paths = g->field == "confounding" ? r.confounding_witnesses
                                                     : r.exclusion_witnesses;
      if (g->kind == "witness" || e.comparator == Comparator::kIsFalse) {
        auto add = [&](const std::vector<Path>& ps) {
          for (const auto& p : ps) v.witnesses.push_back(s.dag.format(p));
        };
        if (g->kind == "witness") {
          add(paths);
        } else {
          add(r.exclusion_witnesses);
          add(r.confounding_witnesses);
        }
      }
      if (g->kind == "witness") {
        v.passed = std::find(v.witnesses.begin(), v.witnesses.end(), e.witness) != v.witnesses.end();
        v.observed = std::to_string(v.witnesses.size()) + " witness path(s)";
        return v;
      }
      const bool value = iv_field(r, g->field);
      v.observed = e.quantity + "=" + (value ? "true" : "false");
      v.passed = e.comparator == Comparator::kIsTrue ? value : !value;
      return v;
    }

    const double q = ctx.number(e.quantity);
    const double ref = e.reference.empty() ? e.target : ctx.number(e.reference);
    v.observed = e.quantity + "=" + fmt(q) +
                 (e.reference.empty() ? "" : " " + e.reference + "=" + fmt(ref));
    switch (e.comparator) {
      case Comparator::kAbsDiffBelow:
        v.passed = std::abs(q - ref) < e.tolerance;
        break;
      case Comparator::kAbsDiffAbove:
        v.passed = std::abs(q - ref) > e.tolerance;
        break;
      case Comparator::kRatioNear:
        v.observed += " ratio=" + fmt(q / ref);
        v.passed = std::abs(q / ref - e.target) <= e.tolerance * std::abs(e.target);
        break;
      case Comparator::kSameSign:
        v.passed = sign(q) != 0.0 && sign(q) == sign(ref);
        break;
      case Comparator::kOppositeSign:
        v.passed = sign(q) != 0.0 && sign(q) == -sign(ref);
        break;
      case Comparator::kExceedsSeMultiple:
        v.observed += " z=" + fmt(std::abs(q) / ref);
        v.passed = std::abs(q) > e.target * ref;
        break;
      default:
        throw Error("comparator " + std::string(to_string(e.comparator)) +
                    " needs a graph quantity");
    }
    if (!std::isfinite(q) || !std::isfinite(ref)) v.passed = false;
  } catch (const std::exception& ex) {
    v.passed = false;
    v.error = ex.what();
  }
  return v;
}

}  // namespace

ScenarioResult evaluate_scenario(const Scenario& scenario, const EvalOptions& options) {
  QuantityContext ctx(scenario, options);
  ScenarioResult result{scenario.name, options.seed, {}};
  for (const auto& e : scenario.expectations) {
    result.verdicts.push_back(evaluate_one(e, scenario, ctx));
  }
  return result;
}

Json to_json(const ScenarioResult& result) {
  Json j;
  j["scenario"] = result.scenario;
  j["seed"] = result.seed;
  j["passed"] = result.passed();
  Json arr = Json::array();
  for (const auto& v : result.verdicts) {
    Json item = to_json(v.expectation);
    item["passed"] = v.passed;
    item["observed"] = v.observed;
    item["witnesses"] = v.witnesses;
    if (!v.error.empty()) item["error"] = v.error;
    arr.push_back(item);
  }
  j["verdicts"] = arr;
  return j;
}

}  // namespace mrproxy
