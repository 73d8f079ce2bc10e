#include "mrproxy/config_json.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mrproxy/errors.hpp"

namespace mrproxy {

Json to_json(const GenerationParams& p) {
  Json j;
  j["exposure_model"] = std::string(to_string(p.exposure_model));
  j["exposure_intercept"] = p.exposure_intercept;
  j["gene_exposure_coef"] = p.gene_exposure_coef;
  j["confounder_exposure_coef"] = p.confounder_exposure_coef;
  j["exposure_noise_sd"] = p.exposure_noise_sd;
  j["outcome_intercept"] = p.outcome_intercept;
  j["exposure_outcome_coef"] = p.exposure_outcome_coef;
  j["confounder_outcome_coef"] = p.confounder_outcome_coef;
  j["outcome_noise_sd"] = p.outcome_noise_sd;
  j["direct_gene_outcome_coef"] = p.direct_gene_outcome_coef;
  j["aux_pathway_coef"] = p.aux_pathway_coef;
  j["allow_defiers"] = p.allow_defiers;
  return j;
}

Json to_json(const ScmConfig& c) {
  Json j;
  j["allele_freq"] = c.allele_freq;
  j["n"] = c.n;
  j["seed"] = c.seed;
  j["parent"] = to_json(c.parent);
  j["child"] = to_json(c.child);
  return j;
}

namespace {

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
}

double read_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

}  // namespace

void merge_generation_params(const Json& j, const std::string& path, GenerationParams& into) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    const std::string field = path + "." + key;
    if (key == "exposure_model") {
      if (!value.is_string()) throw ConfigError(field, "expected \"linear\" or \"threshold\"");
      const auto s = value.get<std::string>();
      if (s == "linear") {
        into.exposure_model = ExposureModel::kLinear;
      } else if (s == "threshold") {
        into.exposure_model = ExposureModel::kThreshold;
      } else {
        throw ConfigError(field, "expected \"linear\" or \"threshold\", got \"" + s + "\"");
      }
    } else if (key == "allow_defiers") {
      if (!value.is_boolean()) throw ConfigError(field, "expected a boolean");
      into.allow_defiers = value.get<bool>();
    } else if (key == "exposure_intercept") {
      into.exposure_intercept = read_number(value, field);
    } else if (key == "gene_exposure_coef") {
      into.gene_exposure_coef = read_number(value, field);
    } else if (key == "confounder_exposure_coef") {
      into.confounder_exposure_coef = read_number(value, field);
    } else if (key == "exposure_noise_sd") {
      into.exposure_noise_sd = read_number(value, field);
    } else if (key == "outcome_intercept") {
      into.outcome_intercept = read_number(value, field);
    } else if (key == "exposure_outcome_coef") {
      into.exposure_outcome_coef = read_number(value, field);
    } else if (key == "confounder_outcome_coef") {
      into.confounder_outcome_coef = read_number(value, field);
    } else if (key == "outcome_noise_sd") {
      into.outcome_noise_sd = read_number(value, field);
    } else if (key == "direct_gene_outcome_coef") {
      into.direct_gene_outcome_coef = read_number(value, field);
    } else if (key == "aux_pathway_coef") {
      into.aux_pathway_coef = read_number(value, field);
    } else {
      throw ConfigError(field, "unknown field");
    }
  }
}

void merge_scm_config(const Json& j, const std::string& path, ScmConfig& into) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    const std::string field = path + "." + key;
    if (key == "allele_freq") {
      into.allele_freq = read_number(value, field);
    } else if (key == "n") {
      if (!value.is_number_integer()) throw ConfigError(field, "expected an integer");
      into.n = value.get<std::int64_t>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer()) {
        throw ConfigError(field, "expected an unsigned integer");
      }
      if (value.is_number_integer() && value.get<std::int64_t>() < 0) {
        throw ConfigError(field, "expected an unsigned integer");
      }
      into.seed = value.get<std::uint64_t>();
    } else if (key == "parent") {
      merge_generation_params(value, field, into.parent);
    } else if (key == "child") {
      merge_generation_params(value, field, into.child);
    } else {
      throw ConfigError(field, "unknown field");
    }
  }
}

std::string config_digest(const ScmConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace mrproxy
