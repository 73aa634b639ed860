#include <doctest.h>

#include <cmath>

#include "uplift/errors.hpp"
#include "uplift/logistic.hpp"

using namespace uplift;

TEST_CASE("constant feature recovers logit of the base rate") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(8, 1);
  Eigen::VectorXd y(8);
  y << 1, 1, 1, 0, 0, 0, 0, 0;
  const LogisticModel m = fit_logistic(x, y);
  CHECK(m.converged);
  const double p = 3.0 / 8.0;
  CHECK(m.coefficients[0] ==
        doctest::Approx(std::log(p / (1 - p))).epsilon(1e-7));
  CHECK(m.coefficients[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("separable data stays finite under a tiny ridge") {
  Eigen::MatrixXd x(8, 1);
  x << -2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0;
  Eigen::VectorXd y(8);
  y << 0, 0, 0, 0, 1, 1, 1, 1;
  const LogisticModel m = fit_logistic(x, y, {.ridge = 1e-6});
  CHECK(m.converged);
  CHECK(std::isfinite(m.coefficients[0]));
  CHECK(std::isfinite(m.coefficients[1]));

  // Probabilities frozen from an independent convex-optimizer fit.
  const double expected[] = {2.13473444e-19, 9.93134081e-15, 4.62031850e-10,
                             2.14944634e-05, 9.99978506e-01, 1.0, 1.0, 1.0};
  const Eigen::VectorXd p = m.predict(x);
  for (int i = 0; i < 8; ++i) {
    CHECK(p[i] == doctest::Approx(expected[i]).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("weighted ridge fit matches an independent optimizer") {
  Eigen::MatrixXd x(10, 1);
  x << -1.2, -0.7, -0.3, 0.1, 0.4, 0.9, 1.3, 1.8, -0.5, 0.6;
  Eigen::VectorXd y(10);
  y << 0, 0, 1, 0, 1, 1, 0, 1, 0, 1;
  Eigen::VectorXd w(10);
  w << 1, 2, 1, 1, 3, 1, 1, 2, 1, 1;
  const LogisticModel m = fit_logistic(x, y, w, {.ridge = 0.5});
  CHECK(m.converged);
  CHECK(m.coefficients[0] == doctest::Approx(0.01112918).epsilon(1e-5));
  CHECK(m.coefficients[1] == doctest::Approx(1.17332509).epsilon(1e-5));
}

TEST_CASE("coefficients are invariant to the weight scale") {
  Eigen::MatrixXd x(6, 1);
  x << -1, -0.5, 0, 0.2, 0.7, 1.4;
  Eigen::VectorXd y(6);
  y << 0, 1, 0, 1, 1, 1;
  Eigen::VectorXd w(6);
  w << 1, 2, 0.5, 1, 1, 3;
  const LogisticModel a = fit_logistic(x, y, w);
  const LogisticModel b = fit_logistic(x, y, w * 10.0);
  CHECK(a.coefficients.isApprox(b.coefficients, 1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  Eigen::VectorXd y(2);
  y << 0, 1;
  CHECK_THROWS_AS(fit_logistic(x, Eigen::VectorXd::Zero(3)), DataError);
  CHECK_THROWS_AS(fit_logistic(x, y, Eigen::VectorXd::Zero(2)), DataError);
}
