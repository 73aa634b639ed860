#include "uplift/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uplift/errors.hpp"

namespace uplift {

double mae_ite(const Eigen::VectorXd& predictions,
               const Eigen::VectorXd& truth) {
  if (predictions.size() != truth.size()) {
    throw DataError("mae_ite: length mismatch");
  }
  return (predictions - truth).cwiseAbs().mean();
}

QiniResult qini(const Eigen::VectorXd& predictions, const Dataset& ds,
                bool weighted) {
  const auto n = ds.n();
  if (predictions.size() != n) throw DataError("qini: length mismatch");
  if ((ds.treatment.array() > 0).count() == 0 ||
      (ds.treatment.array() == 0).count() == 0) {
    throw DataError("qini: empty arm");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return predictions[a] > predictions[b];
                   });

  QiniResult out;
  out.curve.emplace_back(0.0, 0.0);

  double y_t = 0, y_c = 0, n_t = 0, n_c = 0;
  double last_ratio = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = order[static_cast<std::size_t>(k)];
    const double e = ds.propensity[i];
    const double w =
        weighted ? (ds.treatment[i] > 0 ? 1.0 / e : 1.0 / (1.0 - e)) : 1.0;
    if (ds.treatment[i] > 0) {
      y_t += w * ds.outcome[i];
      n_t += w;
    } else {
      y_c += w * ds.outcome[i];
      n_c += w;
    }
    // Emit a curve point only at tie-group boundaries, so tied scores move
    // in one step and a constant predictor's curve is exactly its chord.
    const bool boundary =
        k + 1 == n ||
        predictions[order[static_cast<std::size_t>(k + 1)]] != predictions[i];
    if (!boundary) continue;
    const double ratio = n_c > 0 ? n_t / n_c : last_ratio;
    if (n_c > 0) last_ratio = ratio;
    const double gain = (y_t - y_c * ratio) / static_cast<double>(n);
    out.curve.emplace_back(static_cast<double>(k + 1) / n, gain);
  }

  double area = 0;
  for (std::size_t p = 0; p + 1 < out.curve.size(); ++p) {
    const auto& [x0, g0] = out.curve[p];
    const auto& [x1, g1] = out.curve[p + 1];
    area += 0.5 * (g0 + g1) * (x1 - x0);
  }
  const double chord = 0.5 * out.curve.back().second;
  out.coefficient = area - chord;
  return out;
}

CampaignStats campaign_stats(const Dataset& ds) {
  CampaignStats s;
  s.targeted_fraction =
      static_cast<double>((ds.treatment.array() > 0).count()) / ds.n();
  s.conversion_rate = ds.outcome.mean();
  return s;
}

double experiment_profit(const Dataset& ds, const ProfitSetting& setting) {
  const auto s = campaign_stats(ds);
  return s.conversion_rate * setting.conversion_value -
         s.targeted_fraction * setting.contact_cost;
}

double policy_profit(const Eigen::VectorXd& predictions,
                     const Dataset& ds_truth, const ProfitSetting& setting) {
  if (!ds_truth.truth) throw DataError("policy_profit: truth absent");
  const auto n = ds_truth.n();
  if (predictions.size() != n) throw DataError("policy_profit: length mismatch");
  const double v = setting.conversion_value;
  const double c = setting.contact_cost;
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += ds_truth.truth->y0[i] * v;
    if (predictions[i] * v > c) {
      acc += (ds_truth.truth->y1[i] - ds_truth.truth->y0[i]) * v - c;
    }
  }
  return acc / n;
}

KruskalWallisResult kruskal_wallis(
    const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw DataError("kruskal_wallis: needs >= 2 groups");
  std::vector<std::pair<double, int>> pooled;  // (value, group)
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw DataError("kruskal_wallis: empty group");
    for (double v : groups[g]) pooled.emplace_back(v, static_cast<int>(g));
  }
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  KruskalWallisResult res;
  res.df = static_cast<int>(groups.size()) - 1;
  const auto n = pooled.size();
  if (pooled.front().first == pooled.back().first) {
    res.degenerate = true;  // H undefined when every value ties
    return res;
  }

  // Mid-ranks and tie correction.
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      rank_sum[static_cast<std::size_t>(pooled[k].second)] += mid;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  const double nn = static_cast<double>(n);
  double h = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    h += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
  }
  h = 12.0 / (nn * (nn + 1.0)) * h - 3.0 * (nn + 1.0);
  const double correction = 1.0 - tie_term / (nn * nn * nn - nn);
  res.h = h / correction;
  return res;
}

LeveneResult levene(const std::vector<std::vector<double>>& groups,
                    LeveneCenter center) {
  if (groups.size() < 2) throw DataError("levene: needs >= 2 groups");
  std::size_t n = 0;
  std::vector<std::vector<double>> z(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) throw DataError("levene: group smaller than 2");
    n += groups[g].size();
    double loc;
    if (center == LeveneCenter::mean) {
      loc = std::accumulate(groups[g].begin(), groups[g].end(), 0.0) /
            static_cast<double>(groups[g].size());
    } else {
      std::vector<double> sorted = groups[g];
      std::sort(sorted.begin(), sorted.end());
      const std::size_t m = sorted.size();
      loc = m % 2 == 1 ? sorted[m / 2]
                       : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    }
    z[g].reserve(groups[g].size());
    for (double v : groups[g]) z[g].push_back(std::fabs(v - loc));
  }

  double grand = 0;
  std::vector<double> z_mean(groups.size());
  for (std::size_t g = 0; g < z.size(); ++g) {
    z_mean[g] = std::accumulate(z[g].begin(), z[g].end(), 0.0) /
                static_cast<double>(z[g].size());
    grand += z_mean[g] * static_cast<double>(z[g].size());
  }
  grand /= static_cast<double>(n);

  double between = 0, within = 0;
  for (std::size_t g = 0; g < z.size(); ++g) {
    between += static_cast<double>(z[g].size()) *
               (z_mean[g] - grand) * (z_mean[g] - grand);
    for (double v : z[g]) within += (v - z_mean[g]) * (v - z_mean[g]);
  }

  LeveneResult res;
  res.df1 = static_cast<int>(groups.size()) - 1;
  res.df2 = static_cast<int>(n) - static_cast<int>(groups.size());
  if (within == 0) {
    if (between == 0) {
      res.f = 0.0;
      return res;
    }
    throw NumericError("levene: zero within-group deviation everywhere");
  }
  res.f = (between / res.df1) / (within / res.df2);
  return res;
}

namespace {

// Regularized incomplete gamma P(a, x), series and continued fraction forms.
double gamma_p(double a, double x) {
  if (x < 0 || a <= 0) throw NumericError("gamma_p: invalid arguments");
  if (x == 0) return 0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int it = 0; it < 500; ++it) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x).
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int it = 1; it < 500; ++it) {
    const double an = -static_cast<double>(it) * (it - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

double beta_cf(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < 1e-300) d = 1e-300;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = 1.0 + aa / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = 1.0 + aa / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double beta_i(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double chi_squared_sf(double x, int df) {
  if (x <= 0) return 1.0;
  return 1.0 - gamma_p(0.5 * df, 0.5 * x);
}

double f_sf(double x, int df1, int df2) {
  if (x <= 0) return 1.0;
  return beta_i(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x));
}

}  // namespace uplift
