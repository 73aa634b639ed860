#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "uplift/dataset.hpp"

namespace uplift {

// Piecewise-constant map from model score to treatment probability, the
// M(.) of supervised randomization. K bins need K-1 interior thresholds.
struct PropensityMapping {
  std::vector<double> thresholds;     // strictly increasing
  std::vector<double> probabilities;  // one per bin, each in (0,1)

  std::size_t bins() const { return probabilities.size(); }
  // Out-of-range scores clamp to the extreme bins.
  double operator()(double score) const;

  std::string to_json() const;
  static PropensityMapping from_json(const std::string& text);
};

// Equal-width bins on [min, max] of the training scores with linearly
// increasing treatment probability from e_lo to e_hi.
PropensityMapping build_linear_mapping(const Eigen::VectorXd& train_scores,
                                       int k, double e_lo, double e_hi);

struct FullScheme {
  double e = 0.5;
};
struct SupervisedScheme {
  PropensityMapping mapping;
  Eigen::VectorXd scores;  // one per row
};

struct AssignmentScheme {
  std::variant<FullScheme, SupervisedScheme> variant;
  std::uint64_t seed = 0;
};

// Draws the treatment indicator per row with the scheme's per-row
// probability, logs that exact probability in the propensity column and
// realizes the outcome from the stored potential outcomes. Per-row uniforms
// are keyed by (seed, repetition, row), so different schemes run on the
// same keys see coupled randomness.
Dataset assign(const Dataset& ds, const AssignmentScheme& scheme,
               std::uint64_t repetition = 0);

// Deterministic reference policy: 1 iff score > threshold. Violates overlap
// on purpose; used only for None/All/policy reference rows.
Eigen::VectorXi deterministic_policy(const Eigen::VectorXd& scores,
                                     double threshold);

}  // namespace uplift
