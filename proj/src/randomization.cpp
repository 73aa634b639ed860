#include "uplift/randomization.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "uplift/errors.hpp"
#include "uplift/rng.hpp"

namespace uplift {

double PropensityMapping::operator()(double score) const {
  // upper_bound: score <= thresholds[j] lands in bin j.
  const auto it =
      std::lower_bound(thresholds.begin(), thresholds.end(), score);
  const auto bin = static_cast<std::size_t>(it - thresholds.begin());
  return probabilities[std::min(bin, probabilities.size() - 1)];
}

std::string PropensityMapping::to_json() const {
  nlohmann::json j;
  j["thresholds"] = thresholds;
  j["probabilities"] = probabilities;
  return j.dump();
}

PropensityMapping PropensityMapping::from_json(const std::string& text) {
  PropensityMapping m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.thresholds = j.at("thresholds").get<std::vector<double>>();
    m.probabilities = j.at("probabilities").get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw DataError("invalid mapping JSON: " + std::string(e.what()));
  }
  if (m.probabilities.empty() ||
      m.thresholds.size() + 1 != m.probabilities.size()) {
    throw DataError("mapping has inconsistent threshold/probability counts");
  }
  return m;
}

PropensityMapping build_linear_mapping(const Eigen::VectorXd& train_scores,
                                       int k, double e_lo, double e_hi) {
  if (k < 1) throw DataError("mapping needs at least one bin");
  if (!(e_lo > 0 && e_lo <= e_hi && e_hi < 1)) {
    throw DataError("mapping probabilities must satisfy 0 < e_lo <= e_hi < 1");
  }
  const double lo = train_scores.minCoeff();
  const double hi = train_scores.maxCoeff();
  if (!(lo < hi)) throw DataError("degenerate score range");

  // Equal-frequency bins: thresholds at the k-quantiles of the training
  // scores, so each bin holds (about) the same number of customers and the
  // average treatment probability stays at (e_lo + e_hi) / 2.
  std::vector<double> sorted(train_scores.data(),
                             train_scores.data() + train_scores.size());
  std::sort(sorted.begin(), sorted.end());
  const auto m_rows = static_cast<std::size_t>(sorted.size());
  PropensityMapping m;
  for (int j = 1; j < k; ++j) {
    const auto pos = static_cast<std::size_t>(
        (static_cast<unsigned long long>(j) * m_rows) / k);
    const double thr = pos == 0 ? sorted.front()
                                : 0.5 * (sorted[pos - 1] + sorted[pos]);
    if (m.thresholds.empty() || thr > m.thresholds.back()) {
      m.thresholds.push_back(thr);
    }
  }
  // Tied scores can collapse adjacent thresholds; spread the probabilities
  // over however many bins survive.
  const auto bins = static_cast<int>(m.thresholds.size()) + 1;
  for (int j = 0; j < bins; ++j) {
    m.probabilities.push_back(
        bins == 1 ? e_lo : e_lo + j * (e_hi - e_lo) / (bins - 1));
  }
  return m;
}

Dataset assign(const Dataset& ds, const AssignmentScheme& scheme,
               std::uint64_t repetition) {
  if (!ds.truth) {
    throw DataError("assign: dataset has no potential outcomes to realize");
  }
  const auto n = ds.n();
  if (const auto* sup = std::get_if<SupervisedScheme>(&scheme.variant)) {
    if (sup->scores.size() != n) {
      throw DataError("assign: score vector length mismatch");
    }
  }

  Dataset out = ds;
  for (Eigen::Index i = 0; i < n; ++i) {
    double e;
    if (const auto* full = std::get_if<FullScheme>(&scheme.variant)) {
      e = full->e;
    } else {
      const auto& sup = std::get<SupervisedScheme>(scheme.variant);
      e = sup.mapping(sup.scores[i]);
    }
    if (!(e > 0.0 && e < 1.0)) {
      throw DataError("assign: treatment probability outside (0,1) at row " +
                      std::to_string(i));
    }
    const double u = rng::uniform(rng::key(scheme.seed, 0x61736e67, repetition,
                                           static_cast<std::uint64_t>(i)));
    const bool treated = u < e;
    out.treatment[i] = treated ? 1 : 0;
    out.propensity[i] = e;
    out.outcome[i] = treated ? ds.truth->y1[i] : ds.truth->y0[i];
  }
  return out;
}

Eigen::VectorXi deterministic_policy(const Eigen::VectorXd& scores,
                                     double threshold) {
  Eigen::VectorXi out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    out[i] = scores[i] > threshold ? 1 : 0;
  }
  return out;
}

}  // namespace uplift
