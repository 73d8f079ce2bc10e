#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mrproxy/dag_io.hpp"
#include "mrproxy/dataset_io.hpp"
#include "mrproxy/errors.hpp"
#include "mrproxy/experiment.hpp"
#include "mrproxy/expectations.hpp"
#include "mrproxy/report.hpp"
#include "mrproxy/rng.hpp"
#include "mrproxy/scenarios.hpp"

namespace mrproxy {

namespace {

struct Common {
  std::string config_path;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> n;
  std::optional<int> replicates;
  std::string out_path;
  std::string format;
  std::string contrast;
  std::string f;
  std::optional<int> bootstrap;
  std::optional<std::int64_t> oracle_n;
  unsigned threads = 0;
};

// Writes to --out when given, else to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("out", "cannot write " + path);
  file << text;
}

ExperimentConfig base_config(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = load_experiment_config(c.config_path);
  if (!c.scenario.empty()) {
    auto s = find_scenario(c.scenario);
    if (!s) throw ConfigError("scenario", "unknown scenario '" + c.scenario + "'");
    cfg.scenario = s->name;
    cfg.scm = s->config;
  }
  if (c.seed) {
    cfg.scm.seed = *c.seed;
    cfg.master_seed = *c.seed;
  }
  if (c.n) cfg.scm.n = *c.n;
  if (c.replicates) cfg.replicates = *c.replicates;
  if (!c.out_path.empty()) cfg.output_path = c.out_path;
  if (!c.format.empty()) cfg.format = parse_format(c.format);
  if (!c.contrast.empty()) cfg.estimator.contrast = parse_contrast(c.contrast);
  if (!c.f.empty()) cfg.estimator.f = parse_correction(c.f);
  if (c.bootstrap) cfg.estimator.bootstrap_replicates = *c.bootstrap;
  if (c.oracle_n) cfg.oracle_n = *c.oracle_n;
  if (c.threads != 0) cfg.threads = c.threads;
  cfg.validate();
  return cfg;
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_model_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Experiment config (JSON)");
  cmd->add_option("--scenario", c.scenario, "Start from a named scenario's config");
  cmd->add_option("--seed", c.seed, "Seed (u64)");
  cmd->add_option("--n", c.n, "Sample size")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

void add_estimator_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--contrast", c.contrast, "Association contrast")
      ->check(CLI::IsMember({"dosage", "carrier"}));
  cmd->add_option("--f", c.f, "Correction applied to the G-Y_P association")
      ->check(CLI::IsMember({"mendelian", "identity"}));
  cmd->add_option("--bootstrap", c.bootstrap, "Bootstrap replicates for SEs (0 = off)");
  cmd->add_option("--oracle-n", c.oracle_n, "Sample size for oracle estimands");
}

int do_simulate(const Common& c, bool reveal_latent, std::ostream& out) {
  const ExperimentConfig cfg = base_config(c);
  const TrioDataset data = sample_trio(cfg.scm, {cfg.threads});
  std::ostringstream csv;
  write_dataset_csv(csv, data, reveal_latent);
  emit(csv.str(), c.out_path, out);
  return kExitOk;
}

int do_estimate(const Common& c, const std::string& data_path, double weak_tol,
                std::ostream& out) {
  const ExperimentConfig cfg = base_config(c);
  std::ifstream in(data_path);
  if (!in) throw ConfigError("data", "cannot open " + data_path);
  CsvColumns cols;
  ObservedData observed;
  try {
    cols = read_csv_columns(in);
    observed = observed_from_columns(cols);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("data", e.what());
  }

  EstimateSettings settings = cfg.estimator;
  settings.weak_tol = weak_tol;
  settings.bootstrap_seed = derive_seed(cfg.scm.seed, 0xb007);
  settings.threads = cfg.threads;
  EstimateReport report = estimate(observed.view(), settings);
  if (cols.contains("y_child")) {
    try {
      report.wald_child = oracle::wald_child(cols.at("d_child"), cols.at("a_child"),
                                             cols.at("y_child"), settings.contrast, weak_tol);
    } catch (const Error&) {
    }
  }
  if (!c.config_path.empty() || !c.scenario.empty()) {
    add_oracles(report, cfg.scm, cfg.oracle_n, cfg.threads);
  }
  if (cfg.format == OutputFormat::kCsv) {
    std::string text;
    for (const auto& name : estimate_csv_columns()) text += (text.empty() ? "" : ",") + name;
    emit(text + "\n" + estimate_csv_row(report) + "\n", c.out_path, out);
  } else {
    emit(to_json(report).dump(2) + "\n", c.out_path, out);
  }
  return kExitOk;
}

int do_check_dag(const std::string& path, const std::string& instrument,
                 const std::string& exposure, const std::string& outcome,
                 const std::string& format, const std::string& out_path,
                 std::ostream& out) {
  const Dag dag = read_dag_file(path);
  const IvReport report = check_instrument(dag, instrument, exposure, outcome);
  std::ostringstream text;
  if (format == "json") {
    text << to_json(dag, report).dump(2) << "\n";
  } else {
    auto yn = [](bool b) { return b ? "yes" : "NO"; };
    text << "instrument " << instrument << " for " << exposure << " -> " << outcome << "\n"
         << "  relevance     " << yn(report.relevance) << "\n"
         << "  exclusion     " << yn(report.exclusion) << "\n"
         << "  unconfounded  " << yn(report.unconfounded) << "\n"
         << "  causal        " << (report.causal ? "yes" : "no") << "\n";
    for (const auto& p : report.exclusion_witnesses) {
      text << "  exclusion witness:    " << dag.format(p) << "\n";
    }
    for (const auto& p : report.confounding_witnesses) {
      text << "  confounding witness:  " << dag.format(p) << "\n";
    }
    text << (report.valid() ? "valid\n" : "invalid\n");
  }
  emit(text.str(), out_path, out);
  return report.valid() ? kExitOk : kExitFailed;
}

void print_result(const ScenarioResult& r, std::ostream& out) {
  out << "scenario " << r.scenario << " (seed " << r.seed << ")\n";
  for (const auto& v : r.verdicts) {
    out << "  [" << (v.passed ? "pass" : "FAIL") << "] " << v.expectation.claim << "\n"
        << "         " << v.observed << "\n";
    for (const auto& w : v.witnesses) out << "         witness: " << w << "\n";
    if (!v.error.empty()) out << "         error: " << v.error << "\n";
  }
  out << "  => " << (r.passed() ? "all expectations met" : "EXPECTATIONS FAILED") << "\n";
}

int do_run_scenario(const Common& c, const std::vector<std::string>& names, bool all,
                    bool list, bool catalog, std::ostream& out) {
  if (catalog) {
    emit(catalog_json().dump(2) + "\n", c.out_path, out);
    return kExitOk;
  }
  if (list) {
    for (const auto& s : scenario_catalog()) out << s.name << "  " << s.description << "\n";
    return kExitOk;
  }
  std::vector<Scenario> chosen;
  if (all) {
    chosen = scenario_catalog();
  } else {
    if (names.empty()) throw ConfigError("scenario", "give a scenario name or --all");
    for (const auto& name : names) {
      auto s = find_scenario(name);
      if (!s) throw ConfigError("scenario", "unknown scenario '" + name + "'");
      chosen.push_back(std::move(*s));
    }
  }
  EvalOptions opts;
  if (c.seed) opts.seed = *c.seed;
  if (c.n) opts.n = *c.n;
  if (c.oracle_n) opts.big_n = *c.oracle_n;
  if (c.bootstrap) opts.bootstrap_replicates = *c.bootstrap;
  if (!c.contrast.empty()) opts.contrast = parse_contrast(c.contrast);
  if (!c.f.empty()) opts.f = parse_correction(c.f);
  opts.threads = c.threads;
  if (opts.bootstrap_replicates < 2) {
    throw ConfigError("bootstrap", "scenario runs need >= 2 bootstrap replicates");
  }

  bool ok = true;
  Json results = Json::array();
  std::ostringstream text;
  for (const auto& s : chosen) {
    const ScenarioResult r = evaluate_scenario(s, opts);
    ok = ok && r.passed();
    results.push_back(to_json(r));
    print_result(r, text);
  }
  if (c.format == "json") {
    emit(results.dump(2) + "\n", c.out_path, out);
  } else {
    emit(text.str(), c.out_path, out);
  }
  return ok ? kExitOk : kExitFailed;
}

int do_run(const Common& c, std::ostream& out) {
  const ExperimentConfig cfg = base_config(c);
  const RunReport report = run_experiment(cfg);
  const std::string text = cfg.format == OutputFormat::kCsv ? to_csv(report)
                                                            : to_json(report).dump(2) + "\n";
  emit(text, cfg.output_path, out);
  if (report.failed_rows() == report.rows.size()) return kExitFailed;
  if (report.verdicts && !report.verdicts->passed()) return kExitFailed;
  return kExitOk;
}

int do_report(const std::vector<std::string>& inputs, const Common& c, std::ostream& out) {
  std::vector<Json> rows;
  Json sources = Json::array();
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw ConfigError("input", "cannot open " + path);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError("input", path + " is not JSON: " + e.what());
    }
    auto part = rows_from_json(j);
    sources.push_back({{"path", path},
                       {"config_digest", j.value("config_digest", "")},
                       {"master_seed", j.value("master_seed", std::uint64_t{0})},
                       {"rows", part.size()}});
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto aggregates = aggregate_json_rows(rows);
  if (c.format == "csv") {
    std::string text = "field,count,mean,sd\n";
    for (const auto& a : aggregates) {
      text += a.field + "," + std::to_string(a.count) + "," + format_number(a.mean) + "," +
              format_number(a.sd) + "\n";
    }
    emit(text, c.out_path, out);
  } else {
    Json j;
    j["tool_version"] = kToolVersion;
    j["sources"] = sources;
    j["rows"] = rows.size();
    j["aggregates"] = to_json(aggregates);
    emit(j.dump(2) + "\n", c.out_path, out);
  }
  return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mendelian randomization with parental proxy outcomes: simulate, estimate, "
               "check instruments, run scenarios"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Common c;

  auto* simulate = app.add_subcommand("simulate", "Sample a trio dataset and write it as CSV");
  add_model_flags(simulate, c);
  simulate->add_option("--out", c.out_path, "Output file (default: stdout)");
  bool reveal_latent = false;
  simulate->add_flag("--reveal-latent", reveal_latent, "Include latent and counterfactual columns");

  auto* est = app.add_subcommand("estimate", "Estimate proxy Wald and associations from a CSV");
  std::string data_path;
  double weak_tol = kDefaultWeakTol;
  est->add_option("data", data_path, "Dataset CSV")->required();
  add_model_flags(est, c);
  add_estimator_flags(est, c);
  add_output_flags(est, c);
  est->add_option("--weak-tol", weak_tol, "Weak-instrument threshold on the exposure contrast");

  auto* check = app.add_subcommand("check-dag", "Check instrument conditions on a DAG file");
  std::string dag_path, instrument, exposure, outcome, dag_format = "text";
  check->add_option("dag", dag_path, "DAG text file")->required();
  check->add_option("--instrument", instrument)->required();
  check->add_option("--exposure", exposure)->required();
  check->add_option("--outcome", outcome)->required();
  check->add_option("--format", dag_format)->check(CLI::IsMember({"text", "json"}));
  std::string dag_out;
  check->add_option("--out", dag_out, "Output file (default: stdout)");

  auto* scen = app.add_subcommand("run-scenario", "Evaluate scenario expectations");
  std::vector<std::string> names;
  bool all = false, list = false, catalog = false;
  scen->add_option("name", names, "Scenario name(s)");
  scen->add_flag("--all", all, "Run every shipped scenario");
  scen->add_flag("--list", list, "List scenarios");
  scen->add_flag("--catalog", catalog, "Export the scenario catalog as JSON");
  scen->add_option("--seed", c.seed, "Data seed");
  scen->add_option("--n", c.n, "Sample size")->check(CLI::PositiveNumber);
  scen->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  add_estimator_flags(scen, c);
  scen->add_option("--out", c.out_path, "Output file (default: stdout)");
  scen->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

  auto* run = app.add_subcommand("run", "Run a replicated experiment from a config file");
  add_model_flags(run, c);
  add_estimator_flags(run, c);
  add_output_flags(run, c);
  run->add_option("--replicates", c.replicates, "Number of replicates");

  auto* rep = app.add_subcommand("report", "Aggregate rows of prior run reports");
  std::vector<std::string> inputs;
  rep->add_option("inputs", inputs, "Run report JSON files")->required();
  add_output_flags(rep, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return do_simulate(c, reveal_latent, out);
    if (*est) return do_estimate(c, data_path, weak_tol, out);
    if (*check) return do_check_dag(dag_path, instrument, exposure, outcome, dag_format, dag_out, out);
    if (*scen) return do_run_scenario(c, names, all, list, catalog, out);
    if (*run) return do_run(c, out);
    if (*rep) return do_report(inputs, c, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DagError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownNode& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace mrproxy
