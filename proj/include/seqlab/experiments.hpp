#pragma once

// Experiment registry and the end-to-end pipelines that reproduce the catalog
// examples: body construction -> widths/entropy -> rate brackets -> Monte
// Carlo risks -> verdict.

#include <string>
#include <vector>

#include "seqlab/rates.hpp"
#include "seqlab/report.hpp"

namespace seqlab::experiments {

struct ExperimentConfig {
  std::string experiment_id;
  nlohmann::ordered_json body;  // BodySpec document (id-specific default)
  std::vector<double> sigmas;
  rates::ConstantsConfig consts;
  rates::BudgetConfig budgets;
  std::uint64_t seed = 0;  // mandatory; no wall-clock default
  int threads = 0;         // 0 = library default
  double verdict_slack = 10.0;
  nlohmann::ordered_json extra;  // id-specific knobs

  nlohmann::ordered_json to_json() const;
};

struct ExperimentReport {
  std::string experiment_id;
  nlohmann::ordered_json config;
  std::string config_hash;
  nlohmann::ordered_json results;
  std::vector<std::pair<std::string, std::string>> files;  // name -> bytes
  bool certified = true;
  std::vector<std::string> failures;
};

std::vector<std::string> list_experiments();

ExperimentConfig default_config(const std::string& experiment_id);

// Parse a config document; experiment_id and seed are required.
ExperimentConfig config_from_json(const nlohmann::json& doc);

// Apply a dot-path override such as "budgets.reps=100000".
void apply_override(nlohmann::ordered_json& doc, const std::string& assignment);

ExperimentReport run_experiment(const ExperimentConfig& config);

// format: "csv", "json" or "md"; writes deterministic bytes under out_dir.
void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& out_dir);

}  // namespace seqlab::experiments
