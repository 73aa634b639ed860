#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uplift/dataset.hpp"
#include "uplift/models.hpp"
#include "uplift/randomization.hpp"
#include "uplift/simulation.hpp"

namespace uplift {

struct SyntheticSpec {
  Eigen::Index n = 45211;
  int num_columns = 14;
  int tau_columns = 12;     // first tau_columns drive the simulated ITE
  int hidden_columns = 2;   // first hidden_columns are hidden from learners
  double base_rate = 0.109; // calibrated mean of y0
};

struct CsvSpec {
  std::string data_path;
  std::string schema_path;
  std::string target_column = "y";
  std::vector<std::string> tau_columns;  // empty: all observed columns
};

struct SchemeSpec {
  std::string name;    // "full", "full_imbalanced", "supervised"
  double e = 0.5;      // full variants
  int bins = 10;       // supervised mapping
  double e_lo = 0.05;
  double e_hi = 0.95;

  bool supervised() const { return name == "supervised"; }
};

struct ExperimentConfig {
  std::optional<SyntheticSpec> synthetic = SyntheticSpec{};
  std::optional<CsvSpec> csv;
  std::uint64_t tau_seed = 1;
  double target_ate = 0.05;
  double target_sd = 0.04;
  double oracle_sigma = 0.025;
  std::vector<SchemeSpec> schemes = {
      {"full", 0.5}, {"full_imbalanced", 0.666}, {"supervised"}};
  int folds = 4;
  int draws_per_fold = 50;
  ForestParams forest;
  std::vector<double> profit_values = {10, 15, 20, 25, 30, 35, 40, 45, 50};
  double contact_cost = 1.0;
  std::uint64_t master_seed = 42;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct ModelCells {
  MeanSd mae;
  MeanSd qini;
  bool qini_applicable = true;
  std::map<double, MeanSd> policy_profit;  // by conversion value
};

struct SchemeCells {
  MeanSd targeted_fraction;
  MeanSd conversion_rate;
  std::map<double, double> experiment_profit;  // by conversion value
  std::vector<double> ate_naive;
  std::vector<double> ate_ipw;
  std::vector<double> ate_dr;
  std::map<std::string, ModelCells> models;  // "ate", "two_model", "forest"
};

struct CampaignStatsPair {
  double none_conversion = 0.0;
  double all_conversion = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::string config_hash;
  std::string started_at;
  std::string finished_at;
  int repetitions = 0;
  // Reference rows computed from ground truth.
  CampaignStatsPair none_all;
  std::map<std::string, SchemeCells> schemes;
  // Kruskal-Wallis over the corrected ATE groups (full IPW, imbalanced IPW,
  // supervised IPW, supervised DR) and Levene of supervised IPW vs DR.
  double kw_h = 0.0;
  int kw_df = 0;
  double kw_p = 1.0;
  double levene_f = 0.0;
  int levene_df1 = 0;
  int levene_df2 = 0;
  double levene_p = 1.0;

  std::string to_json() const;
};

// Ground truth built once per master seed: dataset with potential outcomes
// plus the serialized tau network.
struct GroundTruth {
  Dataset data;
  TauNetwork network;
};

GroundTruth build_ground_truth(const ExperimentConfig& cfg);

RunReport run_experiment(const ExperimentConfig& cfg);

// Writes table2.csv .. table5.csv, ate_estimates.csv, report.json and the
// resolved config into the output directory.
void write_report(const RunReport& report, const std::string& out_dir);

}  // namespace uplift
