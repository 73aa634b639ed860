#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uplift/dataset.hpp"
#include "uplift/logistic.hpp"

namespace uplift {

// Fitted ITE learner: predicts tau_hat per row of observed covariates.
class UpliftModel {
 public:
  virtual ~UpliftModel() = default;
  virtual Eigen::VectorXd predict(const Eigen::MatrixXd& x) const = 0;
  virtual std::string to_json() const = 0;
};

// Two separate outcome models, tau_hat(x) = p1_hat(x) - p0_hat(x).
class TwoModel : public UpliftModel {
 public:
  TwoModel(LogisticModel model_treated, LogisticModel model_control)
      : model_treated_(std::move(model_treated)),
        model_control_(std::move(model_control)) {}

  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override;
  std::string to_json() const override;

  const LogisticModel& treated() const { return model_treated_; }
  const LogisticModel& control() const { return model_control_; }

 private:
  LogisticModel model_treated_;
  LogisticModel model_control_;
};

// model_1 on treated rows, model_0 on control rows. With ipw_weighting,
// rows carry inverse-propensity sample weights so the fits are corrected
// for supervised assignment.
TwoModel fit_two_model(const Dataset& ds, bool ipw_weighting,
                       const LogisticOptions& opt = {});

struct ForestParams {
  int trees = 500;
  int mtry = 7;
  int min_node = 20;         // minimum total rows per child
  int arm_min = 5;           // minimum treated and control rows per child
  double honest_fraction = 0.5;
  double subsample_fraction = 0.5;
  int max_depth = -1;        // -1: unlimited
  std::uint64_t seed = 0;
};

struct TreeNode {
  // leaf iff feature < 0
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double tau = 0.0;  // leaf estimate from the estimation half
  int n_treated = 0;
  int n_control = 0;
};

struct CausalTree {
  std::vector<TreeNode> nodes;
  // Disjoint training row indices used for structure and leaf estimation.
  std::vector<Eigen::Index> structure_rows;
  std::vector<Eigen::Index> estimation_rows;

  int route(const Eigen::RowVectorXd& x) const;
};

// Honest causal forest: per tree, rows are subsampled without replacement
// and split into a structure half (chooses splits by maximizing
// sum_children n_c * tau_c^2 with IPW leaf effects) and an estimation half
// (populates leaf estimates). Prediction averages leaf estimates over trees.
class CausalForest : public UpliftModel {
 public:
  CausalForest(std::vector<CausalTree> trees, ForestParams params)
      : trees_(std::move(trees)), params_(params) {}

  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override;
  std::string to_json() const override;

  const std::vector<CausalTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }

 private:
  std::vector<CausalTree> trees_;
  ForestParams params_;
};

CausalForest fit_causal_forest(const Dataset& ds, const ForestParams& params,
                               int threads = 1);

}  // namespace uplift
