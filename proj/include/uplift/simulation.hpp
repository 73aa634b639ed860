#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "uplift/dataset.hpp"

namespace uplift {

// One-hidden-layer sigmoid network with Gaussian weights, followed by an
// affine recalibration that pins the in-sample mean and sd of tau.
struct TauNetwork {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;  // hidden
  double b2 = 0.0;
  std::vector<std::string> input_columns;
  double target_ate = 0.05;
  double target_sd = 0.04;
  // recalibration tau = scale * g(x) + shift
  double scale = 1.0;
  double shift = 0.0;
  // z-score parameters of the encoded inputs
  Eigen::VectorXd input_mean;
  Eigen::VectorXd input_sd;

  std::string to_json() const;
};

struct TauResult {
  TauNetwork network;
  Eigen::VectorXd tau;
};

// Simulated ITE: Gaussian-initialized sigmoid network over the z-scored
// encoded columns, affinely recalibrated so that mean(tau) == target_ate and
// sd(tau) == target_sd exactly in-sample.
TauResult simulate_tau(const Dataset& ds,
                       const std::vector<std::string>& column_subset,
                       std::uint64_t seed, double target_ate,
                       double target_sd);

// Fully synthetic potential outcomes: p0 = logistic(x . beta), coupled
// Bernoullis sharing one uniform per row. beta has d+1 entries, intercept
// first. Stored ite is the conditional effect after clipping.
Dataset make_potential_outcomes_synthetic(const Dataset& ds,
                                          const Eigen::VectorXd& tau,
                                          const Eigen::VectorXd& beta,
                                          std::uint64_t seed);

// Semi-synthetic construction for data where every row was treated: keeps
// the observed outcome as y1 and derives y0 by flipping labels with
// probability proportional to tau, normalized by the fitted outcome model
// p1_hat. Stored ite is the implanted conditional effect
// clamp(tau, p1_hat - 1, p1_hat).
Dataset make_potential_outcomes_flip(const Dataset& ds_all_treated,
                                     const Eigen::VectorXd& tau,
                                     const Eigen::VectorXd& p1_hat,
                                     std::uint64_t seed);

struct NoisyOracle {
  double sigma = 0.025;
  std::uint64_t seed = 0;
};

// Scoring model of Algorithm 1's S(.): the true ITE plus Gaussian noise,
// one draw per row per repetition.
Eigen::VectorXd oracle_scores(const Dataset& ds, const NoisyOracle& oracle,
                              std::uint64_t repetition);

}  // namespace uplift
