#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fodm/dataset.hpp"
#include "fodm/error.hpp"

namespace fodm {

/// Clustering and scaling parameters for one attribute.
struct AttributeSpec {
  std::string attribute;            // dataset column name
  std::string display;              // name used in concepts/queries; defaults to attribute
  int k = 0;                        // cluster count, 2 <= k < n
  double alpha = 0.0;               // inclusive cut threshold in [0,1]
  std::vector<std::string> labels;  // k labels, ascending-center order
  double fuzzifier_m = 2.0;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iter = 300;
};

struct PipelineConfig {
  std::vector<AttributeSpec> specs;
  double min_confidence = 0.5;
  int degree_precision = 6;
  int max_body = 2;  // association rule bodies of 1..max_body clusters
};

/// A PipelineConfig checked against a concrete dataset.
struct ValidatedConfig {
  PipelineConfig config;
  std::size_t object_count = 0;
};

inline PipelineConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("config root must be a JSON object");
  PipelineConfig cfg;
  cfg.min_confidence = j.value("min_confidence", 0.5);
  cfg.degree_precision = j.value("degree_precision", 6);
  cfg.max_body = j.value("max_body", 2);
  if (!j.contains("attributes") || !j.at("attributes").is_array())
    throw ParseError("config needs an \"attributes\" array");
  for (const auto& a : j.at("attributes")) {
    AttributeSpec spec;
    if (!a.contains("name")) throw ParseError("attribute spec without \"name\"");
    spec.attribute = a.at("name").get<std::string>();
    spec.display = a.value("display", spec.attribute);
    spec.k = a.value("k", 0);
    spec.alpha = a.value("alpha", 0.0);
    if (a.contains("labels"))
      spec.labels = a.at("labels").get<std::vector<std::string>>();
    spec.fuzzifier_m = a.value("m", 2.0);
    spec.seed = a.value("seed", std::uint64_t{0});
    spec.tol = a.value("tol", 1e-6);
    spec.max_iter = a.value("max_iter", 300);
    cfg.specs.push_back(std::move(spec));
  }
  return cfg;
}

inline PipelineConfig parse_config_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Checks every spec against the dataset. Order of specs does not affect
/// whether the config is accepted.
inline ValidatedConfig validate_config(const Dataset& dataset, const PipelineConfig& config) {
  const std::size_t n = dataset.object_ids.size();
  if (config.specs.empty()) throw ValidationError("config lists no attributes");
  std::set<std::string> spec_names;
  std::set<std::string> display_names;
  for (const AttributeSpec& s : config.specs) {
    if (!spec_names.insert(s.attribute).second)
      throw ValidationError("attribute listed twice in config: " + s.attribute);
    if (!display_names.insert(s.display).second)
      throw ValidationError("display name used twice in config: " + s.display);
    if (dataset.attribute_index(s.attribute) < 0)
      throw ValidationError("unknown attribute in config: " + s.attribute);
    if (s.k < 2)
      throw ValidationError(s.attribute + ": cluster count must be at least 2, got " + std::to_string(s.k));
    // cluster count stays strictly below the object count
    if (static_cast<std::size_t>(s.k) >= n)
      throw ValidationError(s.attribute + ": cluster count " + std::to_string(s.k) +
                            " must be lower than the object count " + std::to_string(n));
    if (s.labels.size() != static_cast<std::size_t>(s.k))
      throw ValidationError(s.attribute + ": expected " + std::to_string(s.k) + " labels, got " +
                            std::to_string(s.labels.size()));
    std::set<std::string> label_set(s.labels.begin(), s.labels.end());
    if (label_set.size() != s.labels.size())
      throw ValidationError(s.attribute + ": duplicate labels");
    if (s.alpha < 0.0 || s.alpha > 1.0)
      throw ValidationError(s.attribute + ": alpha must lie in [0,1]");
    if (!(s.fuzzifier_m > 1.0))
      throw ValidationError(s.attribute + ": fuzzifier m must be > 1");
    if (!(s.tol > 0.0))
      throw ValidationError(s.attribute + ": tol must be > 0");
    if (s.max_iter < 1)
      throw ValidationError(s.attribute + ": max_iter must be >= 1");
    if (s.display.empty())
      throw ValidationError(s.attribute + ": display name must be non-empty");
  }
  if (!(config.min_confidence > 0.0 && config.min_confidence <= 1.0))
    throw ValidationError("min_confidence must lie in (0,1]");
  if (config.degree_precision < 1 || config.degree_precision > 12)
    throw ValidationError("degree_precision must lie in 1..12");
  if (config.max_body < 1 || config.max_body > 2)
    throw ValidationError("max_body must be 1 or 2");
  return ValidatedConfig{config, n};
}

}  // namespace fodm
