#include <nlohmann/json.hpp>

#include "uplift/errors.hpp"
#include "uplift/models.hpp"

namespace uplift {

Eigen::VectorXd TwoModel::predict(const Eigen::MatrixXd& x) const {
  return model_treated_.predict(x) - model_control_.predict(x);
}

std::string TwoModel::to_json() const {
  nlohmann::json j;
  auto coeffs = [](const LogisticModel& m) {
    return std::vector<double>(m.coefficients.data(),
                               m.coefficients.data() + m.coefficients.size());
  };
  j["kind"] = "two_model";
  j["treated"] = {{"coefficients", coeffs(model_treated_)},
                  {"converged", model_treated_.converged},
                  {"iterations", model_treated_.iterations}};
  j["control"] = {{"coefficients", coeffs(model_control_)},
                  {"converged", model_control_.converged},
                  {"iterations", model_control_.iterations}};
  return j.dump();
}

TwoModel fit_two_model(const Dataset& ds, bool ipw_weighting,
                       const LogisticOptions& opt) {
  std::vector<Eigen::Index> treated, control;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    (ds.treatment[i] > 0 ? treated : control).push_back(i);
  }
  constexpr std::size_t kMinArm = 25;
  if (treated.size() < kMinArm || control.size() < kMinArm) {
    throw DataError("fit_two_model: arm smaller than " +
                    std::to_string(kMinArm) + " rows");
  }

  auto fit_arm = [&](const std::vector<Eigen::Index>& rows, bool is_treated) {
    const Eigen::MatrixXd x = ds.observed_x(rows);
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    Eigen::VectorXd w(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r = rows[i];
      y[static_cast<Eigen::Index>(i)] = ds.outcome[r];
      const double e = ds.propensity[r];
      w[static_cast<Eigen::Index>(i)] =
          ipw_weighting ? (is_treated ? 1.0 / e : 1.0 / (1.0 - e)) : 1.0;
    }
    return fit_logistic(x, y, w, opt);
  };

  return TwoModel(fit_arm(treated, true), fit_arm(control, false));
}

}  // namespace uplift
