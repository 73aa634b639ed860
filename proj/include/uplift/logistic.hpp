#pragma once

#include <Eigen/Dense>

namespace uplift {

struct LogisticModel {
  Eigen::VectorXd coefficients;  // intercept first, then one per feature
  double ridge = 0.0;
  bool converged = false;
  int iterations = 0;

  // P(y=1 | x) for each row of x (without intercept column).
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
  double predict_one(const Eigen::VectorXd& x) const;
};

struct LogisticOptions {
  double ridge = 1e-6;       // on non-intercept coefficients
  double tolerance = 1e-8;   // max |delta coef|
  int max_iterations = 100;
};

// Weighted ridge-penalized logistic regression via iteratively reweighted
// least squares. The intercept is unpenalized.
LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& weights,
                           const LogisticOptions& opt = {});

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const LogisticOptions& opt = {});

}  // namespace uplift
