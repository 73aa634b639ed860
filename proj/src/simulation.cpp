#include "uplift/simulation.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "uplift/errors.hpp"
#include "uplift/rng.hpp"

namespace uplift {

namespace {

constexpr double kProbClipLo = 0.001;
constexpr double kProbClipHi = 0.999;

double clip_prob(double p) {
  return std::min(kProbClipHi, std::max(kProbClipLo, p));
}

}  // namespace

std::string TauNetwork::to_json() const {
  nlohmann::json j;
  auto mat = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    return rows;
  };
  auto vec = [](const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
  };
  j["w1"] = mat(w1);
  j["b1"] = vec(b1);
  j["w2"] = vec(w2);
  j["b2"] = b2;
  j["input_columns"] = input_columns;
  j["target_ate"] = target_ate;
  j["target_sd"] = target_sd;
  j["scale"] = scale;
  j["shift"] = shift;
  j["input_mean"] = vec(input_mean);
  j["input_sd"] = vec(input_sd);
  return j.dump(2);
}

TauResult simulate_tau(const Dataset& ds,
                       const std::vector<std::string>& column_subset,
                       std::uint64_t seed, double target_ate,
                       double target_sd) {
  const auto cols = ds.schema.encoded_indices(column_subset);
  const auto n = ds.n();
  const auto d = static_cast<Eigen::Index>(cols.size());
  if (d == 0) throw DataError("simulate_tau: empty column subset");

  Eigen::MatrixXd inputs(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    inputs.col(j) = ds.x.col(cols[static_cast<std::size_t>(j)]);
  }

  // z-score with in-sample moments; constant columns stay at zero.
  Eigen::VectorXd mean = inputs.colwise().mean();
  Eigen::VectorXd sd(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var =
        (inputs.col(j).array() - mean[j]).square().sum() / (n - 1);
    sd[j] = std::sqrt(var);
    if (sd[j] > 0) {
      inputs.col(j) = (inputs.col(j).array() - mean[j]) / sd[j];
    } else {
      inputs.col(j).setZero();
    }
  }

  TauNetwork net;
  net.input_columns = column_subset;
  net.target_ate = target_ate;
  net.target_sd = target_sd;
  net.input_mean = mean;
  net.input_sd = sd;

  rng::Stream weights(rng::key(seed, 0x7461756e));  // "taun"
  net.w1.resize(d, d);  // hidden_dim == input_dim
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) net.w1(i, j) = weights.gaussian();
  }
  net.b1.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) net.b1[i] = weights.gaussian();
  net.w2.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) net.w2[i] = weights.gaussian();
  net.b2 = weights.gaussian();

  Eigen::MatrixXd hidden = (inputs * net.w1.transpose()).rowwise() +
                           net.b1.transpose();
  hidden = hidden.unaryExpr(
      [](double z) { return 1.0 / (1.0 + std::exp(-z)); });
  Eigen::VectorXd g = (hidden * net.w2).array() + net.b2;

  const double g_mean = g.mean();
  const double g_sd =
      std::sqrt((g.array() - g_mean).square().sum() / (n - 1));
  if (target_sd > 0 && g_sd <= 0) {
    throw NumericError("simulate_tau: degenerate network output, cannot rescale");
  }
  net.scale = target_sd > 0 ? target_sd / g_sd : 0.0;
  net.shift = target_ate - net.scale * g_mean;

  TauResult out;
  out.tau = (g.array() * net.scale + net.shift).matrix();
  out.network = std::move(net);
  return out;
}

Dataset make_potential_outcomes_synthetic(const Dataset& ds,
                                          const Eigen::VectorXd& tau,
                                          const Eigen::VectorXd& beta,
                                          std::uint64_t seed) {
  const auto n = ds.n();
  if (tau.size() != n) throw DataError("tau length mismatch");
  if (beta.size() != ds.d() + 1) {
    throw DataError("base model beta has wrong dimension");
  }

  Dataset out = ds;
  out.truth = Truth{tau, Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = beta[0] + beta.tail(beta.size() - 1).dot(ds.x.row(i));
    const double p0 = clip_prob(1.0 / (1.0 + std::exp(-z)));
    const double p1 = clip_prob(p0 + tau[i]);
    const double u = rng::uniform(
        rng::key(seed, 0x706f7574, static_cast<std::uint64_t>(i)));  // "pout"
    out.truth->y0[i] = u < p0 ? 1.0 : 0.0;
    out.truth->y1[i] = u < p1 ? 1.0 : 0.0;
    out.truth->ite[i] = p1 - p0;
  }
  out.treatment.setZero();
  out.outcome = out.truth->y0;
  out.validate();
  return out;
}

Dataset make_potential_outcomes_flip(const Dataset& ds_all_treated,
                                     const Eigen::VectorXd& tau,
                                     const Eigen::VectorXd& p1_hat,
                                     std::uint64_t seed) {
  const auto n = ds_all_treated.n();
  if (tau.size() != n || p1_hat.size() != n) {
    throw DataError("flip construction: length mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(p1_hat[i] > 0.0 && p1_hat[i] < 1.0)) {
      throw DataError("p1_hat outside (0,1) at row " + std::to_string(i));
    }
  }

  Dataset out = ds_all_treated;
  out.truth =
      Truth{Eigen::VectorXd(n), ds_all_treated.outcome, Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y1 = out.truth->y1[i];
    double y0 = y1;
    const double u = rng::uniform(
        rng::key(seed, 0x666c6970, static_cast<std::uint64_t>(i)));  // "flip"
    if (tau[i] >= 0) {
      const double q = std::min(1.0, tau[i] / p1_hat[i]);
      if (y1 == 1.0 && u < q) y0 = 0.0;
    } else {
      const double q = std::min(1.0, -tau[i] / (1.0 - p1_hat[i]));
      if (y1 == 0.0 && u < q) y0 = 1.0;
    }
    out.truth->y0[i] = y0;
    // Implanted conditional effect under the flip scheme.
    out.truth->ite[i] = std::clamp(tau[i], p1_hat[i] - 1.0, p1_hat[i]);
  }
  out.treatment.setOnes();
  out.outcome = out.truth->y1;
  out.validate();
  return out;
}

Eigen::VectorXd oracle_scores(const Dataset& ds, const NoisyOracle& oracle,
                              std::uint64_t repetition) {
  if (!ds.truth) throw DataError("oracle_scores: truth absent");
  const auto n = ds.n();
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double eps =
        oracle.sigma == 0.0
            ? 0.0
            : oracle.sigma *
                  rng::gaussian(rng::key(oracle.seed, 0x6f72636c, repetition,
                                         static_cast<std::uint64_t>(i)));
    s[i] = ds.truth->ite[i] + eps;
  }
  return s;
}

}  // namespace uplift
