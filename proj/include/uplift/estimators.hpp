#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "uplift/dataset.hpp"
#include "uplift/logistic.hpp"

namespace uplift {

enum class AteMethod { naive, ipw, dr };

struct AteEstimate {
  AteMethod method;
  double value = 0.0;
  Eigen::Index n = 0;
};

// Uncorrected difference in arm means; biased whenever assignment depends
// on the covariates.
AteEstimate ate_naive(const Dataset& ds);

// Inverse-probability-weighted ATE using the logged propensities:
// (1/N)(sum D_i Y_i / e_i - sum (1-D_i) Y_i / (1-e_i)).
AteEstimate ate_ipw(const Dataset& ds);

// Doubly robust ATE with outcome models g1 (fit on treated rows) and g0
// (fit on control rows), both evaluated on the observed covariates.
AteEstimate ate_dr(const Dataset& ds, const LogisticModel& g1,
                   const LogisticModel& g0);

// Same, with precomputed per-row outcome-model predictions. With mu1 and
// mu0 identically zero this collapses to ate_ipw.
AteEstimate ate_dr(const Dataset& ds, const Eigen::VectorXd& mu1,
                   const Eigen::VectorXd& mu0);

// IPW effect restricted to a row subset; the whole-dataset call equals
// ate_ipw exactly.
double ipw_leaf_effect(const std::vector<Eigen::Index>& rows,
                       const Dataset& ds);

std::string to_string(AteMethod m);

}  // namespace uplift
