#include "uplift/logistic.hpp"

#include <cmath>

#include "uplift/errors.hpp"

namespace uplift {

namespace {

inline double sigmoid(double z) {
  if (z >= 0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Eigen::VectorXd LogisticModel::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd z =
      (x * coefficients.tail(coefficients.size() - 1)).array() +
      coefficients[0];
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

double LogisticModel::predict_one(const Eigen::VectorXd& x) const {
  return sigmoid(coefficients[0] +
                 coefficients.tail(coefficients.size() - 1).dot(x));
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& weights,
                           const LogisticOptions& opt) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (y.size() != n || weights.size() != n) {
    throw DataError("logistic fit: length mismatch");
  }
  if (n == 0) throw DataError("logistic fit: empty data");

  // Normalize weights to mean 1 so the ridge strength is scale invariant.
  const double wsum = weights.sum();
  if (!(wsum > 0)) throw DataError("logistic fit: weights sum to zero");
  const Eigen::VectorXd w = weights * (static_cast<double>(n) / wsum);

  LogisticModel model;
  model.ridge = opt.ridge;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);

  Eigen::MatrixXd xd(n, d + 1);
  xd.col(0).setOnes();
  xd.rightCols(d) = x;

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(d + 1, opt.ridge);
  penalty[0] = 0.0;  // intercept unpenalized

  for (int it = 0; it < opt.max_iterations; ++it) {
    Eigen::VectorXd eta = xd * beta;
    Eigen::VectorXd mu = eta.unaryExpr([](double v) { return sigmoid(v); });
    Eigen::VectorXd irls_w =
        (w.array() * mu.array() * (1.0 - mu.array())).max(1e-12);

    // Solve (X' W X + P) delta = X' w (y - mu) - P beta
    Eigen::MatrixXd h = xd.transpose() * irls_w.asDiagonal() * xd;
    h.diagonal() += penalty;
    Eigen::VectorXd grad =
        xd.transpose() * (w.array() * (y - mu).array()).matrix() -
        penalty.asDiagonal() * beta;

    Eigen::LDLT<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
      throw NumericError("logistic fit: IRLS linear solve failed");
    }
    Eigen::VectorXd delta = solver.solve(grad);
    if (!delta.allFinite()) {
      throw NumericError("logistic fit: non-finite IRLS step");
    }
    beta += delta;
    model.iterations = it + 1;
    if (delta.cwiseAbs().maxCoeff() < opt.tolerance) {
      model.converged = true;
      break;
    }
  }

  if (!beta.allFinite()) {
    throw NumericError("logistic fit: non-finite coefficients");
  }
  model.coefficients = beta;
  return model;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const LogisticOptions& opt) {
  return fit_logistic(x, y, Eigen::VectorXd::Ones(x.rows()), opt);
}

}  // namespace uplift
