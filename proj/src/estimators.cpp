#include "uplift/estimators.hpp"

#include "uplift/errors.hpp"

namespace uplift {

AteEstimate ate_naive(const Dataset& ds) {
  double sum_t = 0, sum_c = 0;
  Eigen::Index n_t = 0, n_c = 0;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    if (ds.treatment[i] > 0) {
      sum_t += ds.outcome[i];
      ++n_t;
    } else {
      sum_c += ds.outcome[i];
      ++n_c;
    }
  }
  if (n_t == 0 || n_c == 0) throw DataError("ate_naive: empty arm");
  return {AteMethod::naive, sum_t / n_t - sum_c / n_c, ds.n()};
}

AteEstimate ate_ipw(const Dataset& ds) {
  const auto n = ds.n();
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = ds.propensity[i];
    if (!(e > 0.0 && e < 1.0)) {
      throw DataError("ate_ipw: propensity outside (0,1)");
    }
    if (ds.treatment[i] > 0) {
      acc += ds.outcome[i] / e;
    } else {
      acc -= ds.outcome[i] / (1.0 - e);
    }
  }
  return {AteMethod::ipw, acc / n, n};
}

AteEstimate ate_dr(const Dataset& ds, const LogisticModel& g1,
                   const LogisticModel& g0) {
  if (g1.coefficients.size() == 0 || g0.coefficients.size() == 0) {
    throw DataError("ate_dr: unfitted outcome model");
  }
  const Eigen::MatrixXd x = ds.observed_x();
  return ate_dr(ds, g1.predict(x), g0.predict(x));
}

AteEstimate ate_dr(const Dataset& ds, const Eigen::VectorXd& mu1,
                   const Eigen::VectorXd& mu0) {
  const auto n = ds.n();
  if (mu1.size() != n || mu0.size() != n) {
    throw DataError("ate_dr: prediction length mismatch");
  }
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = ds.propensity[i];
    if (!(e > 0.0 && e < 1.0)) {
      throw DataError("ate_dr: propensity outside (0,1)");
    }
    const double d = ds.treatment[i] > 0 ? 1.0 : 0.0;
    const double y = ds.outcome[i];
    acc += (d * y - (d - e) * mu1[i]) / e;
    acc -= ((1.0 - d) * y + (d - e) * mu0[i]) / (1.0 - e);
  }
  return {AteMethod::dr, acc / n, n};
}

double ipw_leaf_effect(const std::vector<Eigen::Index>& rows,
                       const Dataset& ds) {
  if (rows.empty()) throw DataError("ipw_leaf_effect: empty row set");
  double acc = 0;
  for (const Eigen::Index i : rows) {
    const double e = ds.propensity[i];
    if (ds.treatment[i] > 0) {
      acc += ds.outcome[i] / e;
    } else {
      acc -= ds.outcome[i] / (1.0 - e);
    }
  }
  return acc / static_cast<double>(rows.size());
}

std::string to_string(AteMethod m) {
  switch (m) {
    case AteMethod::naive: return "naive";
    case AteMethod::ipw: return "ipw";
    case AteMethod::dr: return "dr";
  }
  return "?";
}

}  // namespace uplift
