#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "uplift/dataset.hpp"

namespace uplift {

// Mean absolute error between predicted and true ITE.
double mae_ite(const Eigen::VectorXd& predictions,
               const Eigen::VectorXd& truth);

struct QiniResult {
  double coefficient = 0.0;
  // (fraction targeted, cumulative incremental conversions scaled by 1/N)
  std::vector<std::pair<double, double>> curve;
};

// Qini: rows sorted by prediction descending (ties by row index, integrated
// per tie group so a constant score scores exactly zero). Incremental gains
// g(k) = Y_T(k) - Y_C(k) * N_T(k) / N_C(k); with weighted=true, counts and
// outcome sums are inverse-propensity weighted. The coefficient is the area
// between the gain curve and its chord.
QiniResult qini(const Eigen::VectorXd& predictions, const Dataset& ds,
                bool weighted);

struct CampaignStats {
  double targeted_fraction = 0.0;
  double conversion_rate = 0.0;
};

CampaignStats campaign_stats(const Dataset& ds);

struct ProfitSetting {
  double conversion_value;  // V = margin x deposit amount
  double contact_cost;      // c
};

// Realized experiment profit per customer:
// conversion_rate * V - targeted_fraction * c.
double experiment_profit(const Dataset& ds, const ProfitSetting& setting);

// Profit per customer of the deterministic policy "target iff
// tau_hat * V > c", evaluated against the stored potential outcomes.
double policy_profit(const Eigen::VectorXd& predictions,
                     const Dataset& ds_truth, const ProfitSetting& setting);

struct KruskalWallisResult {
  double h = 0.0;
  int df = 0;
  bool degenerate = false;  // all values identical across groups
};

// Rank-based H statistic with mid-rank tie correction.
KruskalWallisResult kruskal_wallis(
    const std::vector<std::vector<double>>& groups);

enum class LeveneCenter { mean, median };

struct LeveneResult {
  double f = 0.0;
  int df1 = 0;
  int df2 = 0;
};

// One-way ANOVA F on absolute deviations from the group center.
LeveneResult levene(const std::vector<std::vector<double>>& groups,
                    LeveneCenter center = LeveneCenter::mean);

// Upper tail probabilities for the test statistics above.
double chi_squared_sf(double x, int df);
double f_sf(double x, int df1, int df2);

}  // namespace uplift
