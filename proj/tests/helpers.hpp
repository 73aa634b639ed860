#pragma once

#include <Eigen/Dense>
#include <vector>

#include "uplift/dataset.hpp"
#include "uplift/rng.hpp"

namespace uplift::test {

// Small all-numeric dataset with explicit assignment state.
inline Dataset make_dataset(const std::vector<double>& x,
                            const std::vector<int>& treatment,
                            const std::vector<double>& outcome,
                            const std::vector<double>& propensity) {
  Dataset ds;
  ds.schema = FeatureSchema({Column{"x", NumericKind{}, true}});
  const auto n = static_cast<Eigen::Index>(x.size());
  ds.x.resize(n, 1);
  ds.treatment.resize(n);
  ds.outcome.resize(n);
  ds.propensity.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ds.x(i, 0) = x[static_cast<std::size_t>(i)];
    ds.treatment[i] = treatment[static_cast<std::size_t>(i)];
    ds.outcome[i] = outcome[static_cast<std::size_t>(i)];
    ds.propensity[i] = propensity[static_cast<std::size_t>(i)];
  }
  ds.validate();
  return ds;
}

// Random assigned dataset without truth, for identity checks.
inline Dataset random_assigned(Eigen::Index n, std::uint64_t seed,
                               Eigen::Index d = 2) {
  Dataset ds;
  std::vector<Column> cols;
  for (Eigen::Index j = 0; j < d; ++j) {
    cols.push_back(Column{"x" + std::to_string(j), NumericKind{}, true});
  }
  ds.schema = FeatureSchema(std::move(cols));
  ds.x.resize(n, d);
  ds.treatment.resize(n);
  ds.outcome.resize(n);
  ds.propensity.resize(n);
  rng::Stream s(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) ds.x(i, j) = s.gaussian();
    ds.treatment[i] = s.uniform() < 0.5 ? 1 : 0;
    ds.outcome[i] = s.uniform() < 0.3 ? 1.0 : 0.0;
    ds.propensity[i] = 0.05 + 0.9 * s.uniform();
  }
  ds.validate();
  return ds;
}

}  // namespace uplift::test
