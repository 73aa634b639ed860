// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "uplift/dataset.hpp"
#include "uplift/estimators.hpp"
#include "uplift/evaluation.hpp"
#include "uplift/harness.hpp"
#include "uplift/models.hpp"
#include "uplift/randomization.hpp"
#include "uplift/rng.hpp"
#include "uplift/simulation.hpp"

using namespace uplift;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("criterion %d [%s]: %s%s%s\n", id, name.c_str(),
              pass ? "PASS" : "FAIL", detail.empty() ? "" : " — ",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

// Exact two-sided binomial test against p = 0.5.
double binomial_two_sided_p(int k, int n) {
  auto logpmf = [&](int i) {
    return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
           std::lgamma(n - i + 1.0) - n * std::log(2.0);
  };
  const double pk = logpmf(k);
  double p = 0;
  for (int i = 0; i <= n; ++i) {
    if (logpmf(i) <= pk + 1e-12) p += std::exp(logpmf(i));
  }
  return std::min(1.0, p);
}

ExperimentConfig synthetic_config(Eigen::Index n, std::uint64_t master_seed,
                                  std::uint64_t tau_seed) {
  ExperimentConfig cfg;
  cfg.synthetic->n = n;
  cfg.master_seed = master_seed;
  cfg.tau_seed = tau_seed;
  return cfg;
}

AssignmentScheme supervised_scheme(const Eigen::VectorXd& scores,
                                   std::uint64_t seed) {
  return {SupervisedScheme{build_linear_mapping(scores, 10, 0.05, 0.95),
                           scores},
          seed};
}

// ---------------------------------------------------------------------------
// 1. Profit identity against the published campaign table.
void criterion_1() {
  struct Row {
    const char* name;
    double fraction, conversion;
  };
  const Row rows[] = {{"none", 0.0, 0.109},
                      {"full", 0.5, 0.135},
                      {"supervised", 0.5, 0.143},
                      {"full_imbalanced", 0.666, 0.143},
                      {"all", 1.0, 0.160}};
  // Printed profit cells, V = 10..50 by column order of rows above.
  const double table[9][5] = {
      {1.09, 0.85, 0.93, 0.76, 0.60}, {1.64, 1.52, 1.65, 1.48, 1.40},
      {2.18, 2.19, 2.37, 2.19, 2.20}, {2.73, 2.86, 3.09, 2.91, 3.00},
      {3.27, 3.54, 3.80, 3.62, 3.80}, {3.82, 4.21, 4.52, 4.34, 4.60},
      {4.36, 4.88, 5.24, 5.05, 5.40}, {4.91, 5.56, 5.96, 5.77, 6.20},
      {5.45, 6.23, 6.67, 6.48, 7.00}};

  bool pass = true;
  std::string detail;
  for (int vi = 0; vi < 9; ++vi) {
    const double v = 10.0 + 5.0 * vi;
    for (int ri = 0; ri < 5; ++ri) {
      const double profit =
          rows[ri].conversion * v - rows[ri].fraction * 1.0;
      // The published conversion rates are printed to three decimals
      // (+-0.0005, scaled by V in the profit), the targeted fractions to
      // three decimals (+-0.0005), and the profit cells themselves to two
      // (+-0.005). The reconstruction can therefore legitimately differ by
      // up to 0.0005*V + 0.0055; e.g. 0.143*45 - 0.5 = 5.935 against a
      // printed 5.96, because the unrounded rate was closer to 0.1436.
      if (std::abs(profit - table[vi][ri]) > 0.0005 * v + 0.0055 + 1e-9) {
        pass = false;
        detail = std::string(rows[ri].name) + " at V=" +
                 std::to_string(v) + ": got " + std::to_string(profit) +
                 " want " + std::to_string(table[vi][ri]);
      }
    }
  }
  report(1, "profit identity vs published table", pass, detail);
}

// ---------------------------------------------------------------------------
// Shared machinery for the Monte Carlo criteria: per-repetition corrected
// estimates under one scheme.
struct RepEstimates {
  double naive, ipw, dr;
};

RepEstimates estimate_once(const Dataset& assigned, bool with_dr) {
  RepEstimates est{};
  est.naive = ate_naive(assigned).value;
  est.ipw = ate_ipw(assigned).value;
  if (with_dr) {
    const TwoModel two = fit_two_model(assigned, /*ipw_weighting=*/true);
    est.dr = ate_dr(assigned, two.treated(), two.control()).value;
  }
  return est;
}

// 2. ATE unbiasedness (reduced variant: n = 10,000, 40 repetitions, ±0.008)
// plus Kruskal-Wallis df=3 with p > 0.1.
void criterion_2() {
  const ExperimentConfig cfg = synthetic_config(10000, 42, 1);
  const GroundTruth gt = build_ground_truth(cfg);
  const NoisyOracle oracle{cfg.oracle_sigma,
                           rng::key(cfg.master_seed, 0x6f72636c)};
  const std::uint64_t assign_seed = rng::key(cfg.master_seed, 0x61736e67);

  const int reps = 40;
  std::vector<double> ipw_full, ipw_imb, ipw_sup;
  std::vector<double> dr_full, dr_imb, dr_sup;
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd scores =
        oracle_scores(gt.data, oracle, static_cast<std::uint64_t>(r));
    const auto rep = static_cast<std::uint64_t>(r);
    const auto full =
        estimate_once(assign(gt.data, {FullScheme{0.5}, assign_seed}, rep),
                      true);
    const auto imb =
        estimate_once(assign(gt.data, {FullScheme{0.666}, assign_seed}, rep),
                      true);
    const auto sup = estimate_once(
        assign(gt.data, supervised_scheme(scores, assign_seed), rep), true);
    ipw_full.push_back(full.ipw);
    ipw_imb.push_back(imb.ipw);
    ipw_sup.push_back(sup.ipw);
    dr_full.push_back(full.dr);
    dr_imb.push_back(imb.dr);
    dr_sup.push_back(sup.dr);
  }

  bool pass = true;
  std::string detail;
  const double truth = gt.data.truth->ite.mean();
  auto check_mean = [&](const char* name, const std::vector<double>& v) {
    const double m = mean_of(v);
    if (std::abs(m - 0.05) > 0.008) {
      pass = false;
      detail += std::string(name) + " mean " + std::to_string(m) + "; ";
    }
  };
  check_mean("full ipw", ipw_full);
  check_mean("imbalanced ipw", ipw_imb);
  check_mean("supervised ipw", ipw_sup);
  check_mean("full dr", dr_full);
  check_mean("imbalanced dr", dr_imb);
  check_mean("supervised dr", dr_sup);

  const auto kw = kruskal_wallis({ipw_full, ipw_imb, ipw_sup, dr_sup});
  const double p = kw.degenerate ? 1.0 : chi_squared_sf(kw.h, kw.df);
  if (kw.df != 3) {
    pass = false;
    detail += "kw df " + std::to_string(kw.df) + "; ";
  }
  if (p <= 0.1) {
    pass = false;
    detail += "kw p " + std::to_string(p) + "; ";
  }
  if (pass) {
    detail = "true ATE " + std::to_string(truth) + ", kw H " +
             std::to_string(kw.h) + " p " + std::to_string(p);
  }
  report(2, "ate unbiasedness + kruskal-wallis", pass, detail);
}

// 3. Variance ordering: Levene rejects with var(DR) < var(IPW) under
// supervised randomization in >= 8 of 10 master seeds.
void criterion_3() {
  int hits = 0;
  std::string detail;
  for (int s = 0; s < 10; ++s) {
    const ExperimentConfig cfg = synthetic_config(
        10000, 2000 + static_cast<std::uint64_t>(s),
        1000 + static_cast<std::uint64_t>(s));
    const GroundTruth gt = build_ground_truth(cfg);
    const NoisyOracle oracle{cfg.oracle_sigma,
                             rng::key(cfg.master_seed, 0x6f72636c)};
    const std::uint64_t assign_seed = rng::key(cfg.master_seed, 0x61736e67);

    // The DR variance advantage is real but modest on Bernoulli outcomes
    // (ratio ~1.5-2x), so Levene needs a few hundred repetitions per seed
    // to reach power ~0.9 and above.
    std::vector<double> ipw, dr;
    for (int r = 0; r < 300; ++r) {
      const Eigen::VectorXd scores =
          oracle_scores(gt.data, oracle, static_cast<std::uint64_t>(r));
      const auto est = estimate_once(
          assign(gt.data, supervised_scheme(scores, assign_seed),
                 static_cast<std::uint64_t>(r)),
          true);
      ipw.push_back(est.ipw);
      dr.push_back(est.dr);
    }
    const auto lv = levene({ipw, dr});
    const double p = f_sf(lv.f, lv.df1, lv.df2);
    const bool hit = lv.df1 == 1 && p < 0.05 && var_of(dr) < var_of(ipw);
    if (hit) ++hits;
    detail += (hit ? "+" : "-");
  }
  report(3, "levene variance ordering dr < ipw", hits >= 8,
         std::to_string(hits) + "/10 seeds [" + detail + "]");
}

// 4. Naive-estimator bias under supervised randomization at the full
// synthetic size, with unbiased IPW sign behavior.
void criterion_4() {
  const ExperimentConfig cfg = synthetic_config(45211, 42, 1);
  const GroundTruth gt = build_ground_truth(cfg);
  const NoisyOracle oracle{cfg.oracle_sigma,
                           rng::key(cfg.master_seed, 0x6f72636c)};
  const std::uint64_t assign_seed = rng::key(cfg.master_seed, 0x61736e67);

  // The ground truth is fixed across repetitions, so unbiased estimators
  // center on its realized ATE mean(y1 - y0), which differs from the 0.05
  // simulation target by finite-sample noise. The sign test must use the
  // realized value or that offset masquerades as estimator bias.
  const double realized_ate =
      (gt.data.truth->y1 - gt.data.truth->y0).mean();

  const int reps = 200;
  int naive_above = 0, ipw_above = 0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd scores =
        oracle_scores(gt.data, oracle, static_cast<std::uint64_t>(r));
    const Dataset assigned =
        assign(gt.data, supervised_scheme(scores, assign_seed),
               static_cast<std::uint64_t>(r));
    const auto est = estimate_once(assigned, false);
    if (est.naive > realized_ate) ++naive_above;
    if (est.ipw > realized_ate) ++ipw_above;
  }
  const double binom_p = binomial_two_sided_p(ipw_above, reps);
  const bool pass = naive_above >= reps * 9 / 10 && binom_p > 0.05;
  report(4, "naive bias, ipw sign-unbiased", pass,
         "realized ate " + std::to_string(realized_ate) + ", naive>ate in " +
             std::to_string(naive_above) + "/200, ipw>ate in " +
             std::to_string(ipw_above) + "/200 (binomial p " +
             std::to_string(binom_p) + ")");
}

// 5. Scheme cost ordering: supervised beats full(0.5) on conversion by
// >= 0.004 and on experiment profit for every V, in >= 9 of 10 seeds.
void criterion_5() {
  int hits = 0;
  std::string detail;
  for (int s = 0; s < 10; ++s) {
    const ExperimentConfig cfg = synthetic_config(
        20000, 3000 + static_cast<std::uint64_t>(s),
        1300 + static_cast<std::uint64_t>(s));
    const GroundTruth gt = build_ground_truth(cfg);
    const NoisyOracle oracle{cfg.oracle_sigma,
                             rng::key(cfg.master_seed, 0x6f72636c)};
    const std::uint64_t assign_seed = rng::key(cfg.master_seed, 0x61736e67);

    std::vector<double> conv_f, conv_s, frac_f, frac_s;
    for (int r = 0; r < 10; ++r) {
      const Eigen::VectorXd scores =
          oracle_scores(gt.data, oracle, static_cast<std::uint64_t>(r));
      const auto rep = static_cast<std::uint64_t>(r);
      const auto sf =
          campaign_stats(assign(gt.data, {FullScheme{0.5}, assign_seed}, rep));
      const auto ss = campaign_stats(
          assign(gt.data, supervised_scheme(scores, assign_seed), rep));
      conv_f.push_back(sf.conversion_rate);
      conv_s.push_back(ss.conversion_rate);
      frac_f.push_back(sf.targeted_fraction);
      frac_s.push_back(ss.targeted_fraction);
    }
    const double cf = mean_of(conv_f), cs = mean_of(conv_s);
    const double ff = mean_of(frac_f), fs = mean_of(frac_s);
    bool hit = cs - cf >= 0.004;
    for (double v = 10; v <= 50; v += 5) {
      if (cs * v - fs * 1.0 <= cf * v - ff * 1.0) hit = false;
    }
    if (hit) ++hits;
    detail += (hit ? "+" : "-");
  }
  report(5, "supervised cost ordering vs full", hits >= 9,
         std::to_string(hits) + "/10 seeds [" + detail + "]");
}

// ---------------------------------------------------------------------------
// 6 & 7 share a Monte Carlo design. Per seed:
//
//  - Main grid: train on 8,000 rows (2 of 5 folds), evaluate on the 12,000
//    held-out rows. Both the two-model and the forest are fit under full(0.5)
//    and under supervised assignment, coupled through the shared assignment
//    uniforms, and everything is averaged over three assignment draws. Qini
//    is additionally averaged over 20 independent holdout assignments, since
//    a single realized holdout experiment makes the coefficient itself a
//    noisy quantity. This grid answers "does the forest rank/fit better than
//    the two-model" (criterion 6, first half) and "how much policy profit is
//    lost by training under supervised assignment" (criterion 7).
//  - Small-sample grid: the efficiency-loss direction (criterion 6, second
//    half) is about estimation variance, so it is measured where variance
//    dominates: training sets of 1,000 and 2,000 rows, six draws each, with
//    MAE averaged across both sizes before comparing supervised to full.
//    At 8,000+ training rows both learners are close to converged and the
//    supervised-vs-full gap sits inside assignment noise.
struct ModelEval {
  double mae = 0.0;
  double qini_coef = 0.0;
  std::vector<double> profit;  // per V in 10..50 step 5
};

struct SeedEval {
  // [scheme 0 = full, 1 = supervised][model 0 = two_model, 1 = forest]
  ModelEval cell[2][2];
  double small_mae[2][2] = {{0, 0}, {0, 0}};  // same indexing, small grid
};

// Concatenate folds [first, last) of a fold partition into a sorted subset.
Dataset fold_subset(const Dataset& ds,
                    const std::vector<std::vector<Eigen::Index>>& folds,
                    std::size_t first, std::size_t last) {
  std::vector<Eigen::Index> idx;
  for (std::size_t f = first; f < last; ++f) {
    idx.insert(idx.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(idx.begin(), idx.end());
  return ds.subset(idx);
}

SeedEval evaluate_seed(int s) {
  const ExperimentConfig cfg = synthetic_config(
      20000, 4000 + static_cast<std::uint64_t>(s),
      1600 + static_cast<std::uint64_t>(s));
  const GroundTruth gt = build_ground_truth(cfg);
  const NoisyOracle oracle{cfg.oracle_sigma,
                           rng::key(cfg.master_seed, 0x6f72636c)};
  const std::uint64_t assign_seed = rng::key(cfg.master_seed, 0x61736e67);

  SeedEval out;

  // Main grid: 8,000 train / 12,000 hold, three coupled draws.
  {
    const auto folds = split_folds(gt.data.n(), 5, cfg.master_seed);
    const Dataset train = fold_subset(gt.data, folds, 0, 2);
    const Dataset hold = fold_subset(gt.data, folds, 2, 5);
    const Eigen::MatrixXd hold_x = hold.observed_x();
    std::vector<Dataset> hold_assignments;
    for (std::uint64_t h = 0; h < 20; ++h) {
      hold_assignments.push_back(assign(
          hold, {FullScheme{0.5}, rng::key(cfg.master_seed, 0x686c6471)}, h));
    }

    const int draws = 3;
    for (int sch = 0; sch < 2; ++sch) {
      for (int r = 0; r < draws; ++r) {
        const auto rep = static_cast<std::uint64_t>(r);
        const Eigen::VectorXd scores = oracle_scores(train, oracle, rep);
        const AssignmentScheme scheme =
            sch == 0 ? AssignmentScheme{FullScheme{0.5}, assign_seed}
                     : supervised_scheme(scores, assign_seed);
        const Dataset assigned = assign(train, scheme, rep);

        const TwoModel two = fit_two_model(assigned, /*ipw_weighting=*/true);
        ForestParams fp;
        fp.trees = 300;
        // Larger leaves than the production default: at 8,000 training rows
        // (vs the full campaign's tens of thousands) 20-row honest leaves are
        // dominated by within-leaf IPW noise.
        fp.min_node = 60;
        fp.seed = rng::key(cfg.master_seed, 0x66727374, rep);
        const CausalForest forest = fit_causal_forest(assigned, fp);

        const Eigen::VectorXd preds[2] = {two.predict(hold_x),
                                          forest.predict(hold_x)};
        for (int m = 0; m < 2; ++m) {
          ModelEval& cell = out.cell[sch][m];
          cell.mae += mae_ite(preds[m], hold.truth->ite) / draws;
          for (const Dataset& ha : hold_assignments) {
            cell.qini_coef +=
                qini(preds[m], ha, false).coefficient / (20.0 * draws);
          }
          std::size_t vi = 0;
          for (double v = 10; v <= 50; v += 5, ++vi) {
            if (cell.profit.size() <= vi) cell.profit.push_back(0.0);
            cell.profit[vi] += policy_profit(preds[m], hold, {v, 1.0}) / draws;
          }
        }
      }
    }
  }

  // Small-sample grid: 1,000- and 2,000-row training sets, six draws each.
  for (const int pieces : {20, 10}) {
    const auto folds =
        split_folds(gt.data.n(), pieces, cfg.master_seed);
    const Dataset train = fold_subset(gt.data, folds, 0, 1);
    const Dataset hold =
        fold_subset(gt.data, folds, 1, static_cast<std::size_t>(pieces));
    const Eigen::MatrixXd hold_x = hold.observed_x();

    const int draws = 6;
    for (int sch = 0; sch < 2; ++sch) {
      for (int r = 0; r < draws; ++r) {
        const auto rep = static_cast<std::uint64_t>(r);
        const Eigen::VectorXd scores = oracle_scores(train, oracle, rep);
        const AssignmentScheme scheme =
            sch == 0 ? AssignmentScheme{FullScheme{0.5}, assign_seed}
                     : supervised_scheme(scores, assign_seed);
        const Dataset assigned = assign(train, scheme, rep);

        const TwoModel two = fit_two_model(assigned, /*ipw_weighting=*/true);
        ForestParams fp;
        fp.trees = 200;
        fp.seed = rng::key(cfg.master_seed, 0x66727374, rep);
        const CausalForest forest = fit_causal_forest(assigned, fp);

        out.small_mae[sch][0] +=
            mae_ite(two.predict(hold_x), hold.truth->ite) / (2.0 * draws);
        out.small_mae[sch][1] +=
            mae_ite(forest.predict(hold_x), hold.truth->ite) / (2.0 * draws);
      }
    }
  }

  return out;
}

void criteria_6_and_7() {
  std::vector<SeedEval> seeds;
  for (int s = 0; s < 10; ++s) seeds.push_back(evaluate_seed(s));

  int forest_better = 0, efficiency_loss = 0, profit_close = 0;
  std::string d6a, d6b, d7;
  for (const SeedEval& se : seeds) {
    const bool fb = se.cell[0][1].mae < se.cell[0][0].mae &&
                    se.cell[0][1].qini_coef >= se.cell[0][0].qini_coef;
    const bool el = se.small_mae[1][0] >= se.small_mae[0][0] &&
                    se.small_mae[1][1] >= se.small_mae[0][1];
    bool pc = true;
    for (int m = 0; m < 2; ++m) {
      for (std::size_t vi = 0; vi < se.cell[0][m].profit.size(); ++vi) {
        const double full_p = se.cell[0][m].profit[vi];
        const double sup_p = se.cell[1][m].profit[vi];
        if (std::abs(sup_p - full_p) > 0.02 * std::abs(full_p)) pc = false;
      }
    }
    forest_better += fb;
    efficiency_loss += el;
    profit_close += pc;
    d6a += (fb ? "+" : "-");
    d6b += (el ? "+" : "-");
    d7 += (pc ? "+" : "-");
  }
  report(6, "model ordering (forest vs two-model, supervised vs full)",
         forest_better >= 8 && efficiency_loss >= 8,
         "forest better " + std::to_string(forest_better) + "/10 [" + d6a +
             "], efficiency loss " + std::to_string(efficiency_loss) +
             "/10 [" + d6b + "]");
  report(7, "policy profit gap within 2%", profit_close >= 8,
         std::to_string(profit_close) + "/10 seeds [" + d7 + "]");
}

// ---------------------------------------------------------------------------
// 8. Exact oracle identities.
void criterion_8() {
  bool pass = true;
  std::string detail;
  auto fail = [&](const std::string& what) {
    pass = false;
    detail += what + "; ";
  };

  // DR with zero outcome models collapses to IPW, 100 random fixtures.
  for (int f = 0; f < 100; ++f) {
    Dataset ds;
    ds.schema = FeatureSchema({Column{"x", NumericKind{}, true}});
    rng::Stream s(9000 + static_cast<std::uint64_t>(f));
    const Eigen::Index n = 20 + static_cast<Eigen::Index>(s.below(80));
    ds.x.resize(n, 1);
    ds.treatment.resize(n);
    ds.outcome.resize(n);
    ds.propensity.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ds.x(i, 0) = s.gaussian();
      ds.treatment[i] = s.uniform() < 0.5 ? 1 : 0;
      ds.outcome[i] = s.uniform() < 0.3 ? 1.0 : 0.0;
      ds.propensity[i] = 0.05 + 0.9 * s.uniform();
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    if (std::abs(ate_dr(ds, zero, zero).value - ate_ipw(ds).value) > 1e-12) {
      fail("dr collapse fixture " + std::to_string(f));
      break;
    }
  }

  // Hand-computed 5-row IPW fixtures.
  {
    Dataset ds;
    ds.schema = FeatureSchema({Column{"x", NumericKind{}, true}});
    ds.x = Eigen::MatrixXd::Zero(5, 1);
    ds.treatment.resize(5);
    ds.treatment << 1, 0, 1, 0, 1;
    ds.outcome.resize(5);
    ds.outcome << 1, 1, 0, 0, 1;
    ds.propensity.resize(5);
    ds.propensity << 0.5, 0.5, 0.25, 0.4, 0.8;
    // (1/5)(1/0.5 - 1/0.5 + 0 - 0 + 1/0.8) = 0.25
    if (std::abs(ate_ipw(ds).value - 0.25) > 1e-12) fail("ipw fixture A");
    ds.propensity << 0.2, 0.9, 0.5, 0.1, 0.5;
    // (1/5)(1/0.2 - 1/0.1 + 1/0.5) = (1/5)(5 - 10 + 2) = -0.6
    if (std::abs(ate_ipw(ds).value - (-0.6)) > 1e-12) fail("ipw fixture B");
  }

  // Depth-0 single causal tree equals the estimation-half IPW effect.
  {
    Dataset ds;
    ds.schema = FeatureSchema({Column{"x", NumericKind{}, true}});
    rng::Stream s(777);
    const Eigen::Index n = 400;
    ds.x.resize(n, 1);
    ds.treatment.resize(n);
    ds.outcome.resize(n);
    ds.propensity.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ds.x(i, 0) = s.gaussian();
      ds.treatment[i] = s.uniform() < 0.5 ? 1 : 0;
      ds.outcome[i] = s.uniform() < 0.3 ? 1.0 : 0.0;
      ds.propensity[i] = 0.5;
    }
    ForestParams p;
    p.trees = 1;
    p.max_depth = 0;
    p.seed = 3;
    const CausalForest forest = fit_causal_forest(ds, p);
    const CausalTree& tree = forest.trees()[0];
    if (tree.nodes.size() != 1 ||
        std::abs(tree.nodes[0].tau -
                 ipw_leaf_effect(tree.estimation_rows, ds)) > 1e-12) {
      fail("depth-0 tree identity");
    }

    // Qini of a constant score is exactly zero.
    if (qini(Eigen::VectorXd::Constant(n, 0.1), ds, false).coefficient !=
        0.0) {
      fail("constant qini");
    }
  }

  // Kruskal-Wallis and Levene against frozen reference values (20 fixtures).
  {
    struct KwFix {
      std::vector<std::vector<double>> groups;
      double h;
    };
    const std::vector<KwFix> kw_fixtures = {
        {{{-1.194, -0.385, -0.65, -1.618, 0.754, -0.486, 0.955},
          {-0.468, 1.85, -0.047},
          {1.083, -1.132, 0.599},
          {-0.118, 1.138, -1.358, 1.504}},
         2.3062558356675993},
        {{{-0.413, 1.438, -2.191},
          {-0.592, 1.4, -0.72, -0.368, 0.258, -0.066},
          {-0.113, 0.04, 1.42, 0.389, 0.455}},
         1.9599999999999937},
        {{{0.001, 0.166, -0.962, -0.104, -0.374, -0.535},
          {0.495, 1.879, 0.576, 1.594, 0.257, 2.482, -1.514},
          {-1.022, -1.485, 0.333, -0.578}},
         5.802054154995332},
        {{{-1.671, -1.753, 0.855, -0.598, -0.506},
          {0.533, -0.721, -0.363},
          {1.131, -0.25, -0.726, 0.099}},
         1.6153846153846203},
        {{{-0.288, 1.089, 0.675, 1.187},
          {0.421, -0.047, 0.187, 1.146, 0.709, 1.297},
          {0.51, 1.571, -2.057, 0.92, 1.561}},
         0.3958333333333428},
        {{{0.793, 0.71, -2.237}, {-0.635, -0.495, 0.78}},
         0.04761904761904745},
        {{{-2.84, 1.366, 0.445, -0.07},
          {-1.841, -1.128, -0.941, 1.794, -0.589, 1.355},
          {-1.4, -0.035, 2.804, -0.168, -0.61, 1.518, 1.287}},
         0.6886087768440703},
        {{{-0.765, 0.918, -0.054, 0.06, 0.471, 0.005},
          {0.7, -0.431, -0.106, -0.554, -0.486, 1.521, 0.081},
          {-1.148, 2.065, 1.24, 0.304, -1.284}},
         0.05296574770258644},
        {{{1.603, -0.968, 1.201, 2.051, -1.008},
          {1.376, 0.485, -1.497},
          {0.609, -0.415, 1.4, 1.664, 1.843, 0.059, 0.763},
          {-0.437, -0.223, 1.708, 1.228, 1.011, 1.411, -0.176}},
         1.021230942970064},
        {{{-0.047, -0.016, 1.986, -0.592, 0.323, 2.392, -0.418},
          {0.615, 1.037, 1.011, 1.254, 0.176, -0.74, 1.728},
          {2.134, -0.6, -0.298},
          {-0.339, -0.092, 1.325, 1.705, 1.093}},
         0.4452851496329657},
    };
    for (std::size_t i = 0; i < kw_fixtures.size(); ++i) {
      const auto res = kruskal_wallis(kw_fixtures[i].groups);
      if (std::abs(res.h - kw_fixtures[i].h) > 1e-10) {
        fail("kw fixture " + std::to_string(i));
      }
    }

    struct LvFix {
      std::vector<std::vector<double>> groups;
      double f;
    };
    const std::vector<LvFix> lv_fixtures = {
        {{{1.357, 0.007, 1.11, 1.625, -1.103, -1.339, 1.794},
          {2.037, 2.779, -1.168, 0.414, -0.873, -0.387}},
         0.24649493803018996},
        {{{-1.462, 1.401, 1.351, 6.831, 5.903, 1.7},
          {-0.291, 0.268, 0.191, -0.071, -0.214, -0.137, 0.321, -0.51}},
         17.760044295616694},
        {{{-0.17, -0.687, -0.441, 1.251, -0.027, 0.754},
          {-0.933, -2.561, -2.326, -3.96, 2.366},
          {1.175, 2.234, -1.173, 3.249, 1.7}},
         1.9220310505663192},
        {{{-2.356, 1.196, 2.556, 0.015, 1.203, -2.089, -1.683, -0.069},
          {-3.91, 1.172, -2.095, -3.952},
          {4.356, 0.832, 1.002, 2.043, -2.542, -2.184, 0.673}},
         0.1251212625734846},
        {{{-1.787, -0.268, -0.899, -0.924, -0.55},
          {1.779, -1.012, -2.02, 0.319}},
         5.862204965398112},
        {{{0.374, -2.635, -0.386, 2.758},
          {2.906, -1.041, -2.688, -1.17},
          {-2.775, -1.545, -1.486, 0.689, 1.035}},
         0.1171164412594183},
        {{{1.289, 0.333, 1.127, 0.238, -1.696, 2.298},
          {0.687, -1.354, 0.369, 0.231, -0.151, -2.295, -0.289}},
         0.16292182792903806},
        {{{1.912, 2.15, 0.626, -1.007},
          {0.733, 1.089, -0.301, 0.854, 1.291, -1.666}},
         0.3406505265021981},
        {{{0.286, -0.307, 1.191, -0.267},
          {-0.019, -1.269, 2.121, -1.731, -0.087, 2.845, -2.667, 1.715},
          {1.447, -0.165, 2.166, -0.814, 0.201, 4.339}},
         1.9592551849086852},
        {{{0.069, 0.328, -0.004, 0.514, -0.018},
          {-0.039, 0.257, -1.874, 0.45, -1.752, -0.618, -0.76},
          {8.074, -0.502, -1.104, -0.078}},
         9.4424015329193},
    };
    for (std::size_t i = 0; i < lv_fixtures.size(); ++i) {
      const auto res = levene(lv_fixtures[i].groups);
      if (std::abs(res.f - lv_fixtures[i].f) > 1e-10) {
        fail("levene fixture " + std::to_string(i));
      }
    }
  }

  report(8, "exact oracle identities", pass, detail);
}

// ---------------------------------------------------------------------------
// 9. Property suites.
void criterion_9() {
  bool pass = true;
  std::string detail;
  auto fail = [&](const std::string& what) {
    pass = false;
    detail += what + "; ";
  };

  const ExperimentConfig cfg = synthetic_config(5000, 42, 1);
  const GroundTruth gt = build_ground_truth(cfg);
  const NoisyOracle oracle{cfg.oracle_sigma,
                           rng::key(cfg.master_seed, 0x6f72636c)};
  const Eigen::VectorXd scores = oracle_scores(gt.data, oracle, 0);

  // Propensity logging completeness and bounds.
  {
    const AssignmentScheme scheme = supervised_scheme(scores, 42);
    const Dataset a = assign(gt.data, scheme, 0);
    const auto& sup = std::get<SupervisedScheme>(scheme.variant);
    for (Eigen::Index i = 0; i < a.n(); ++i) {
      if (!(a.propensity[i] > 0.0 && a.propensity[i] < 1.0) ||
          a.propensity[i] != sup.mapping(scores[i])) {
        fail("propensity logging at row " + std::to_string(i));
        break;
      }
    }
    const Dataset b = assign(gt.data, {FullScheme{0.666}, 42}, 0);
    if ((b.propensity.array() != 0.666).any()) fail("full propensity log");
  }

  // Supervised with a constant mapping is bitwise identical to full.
  {
    PropensityMapping constant;
    constant.probabilities = {0.5};
    const Dataset sup =
        assign(gt.data, {SupervisedScheme{constant, scores}, 42}, 5);
    const Dataset full = assign(gt.data, {FullScheme{0.5}, 42}, 5);
    if (sup.treatment != full.treatment || sup.outcome != full.outcome) {
      fail("supervised != full under constant mapping");
    }
  }

  // Forest honesty: structure and estimation rows disjoint on every tree.
  {
    const Dataset assigned = assign(gt.data, {FullScheme{0.5}, 42}, 0);
    ForestParams p;
    p.trees = 30;
    p.seed = 3;
    const CausalForest forest = fit_causal_forest(assigned, p);
    for (const CausalTree& tree : forest.trees()) {
      std::vector<Eigen::Index> s = tree.structure_rows;
      std::vector<Eigen::Index> e = tree.estimation_rows;
      std::sort(s.begin(), s.end());
      std::sort(e.begin(), e.end());
      std::vector<Eigen::Index> overlap;
      std::set_intersection(s.begin(), s.end(), e.begin(), e.end(),
                            std::back_inserter(overlap));
      if (!overlap.empty()) {
        fail("tree with overlapping halves");
        break;
      }
    }
  }

  // Report determinism: byte-identical artifacts across reruns.
  {
    ExperimentConfig rcfg = synthetic_config(2000, 42, 1);
    rcfg.synthetic->num_columns = 6;
    rcfg.synthetic->tau_columns = 5;
    rcfg.synthetic->hidden_columns = 1;
    rcfg.folds = 2;
    rcfg.draws_per_fold = 2;
    rcfg.forest.trees = 20;
    rcfg.forest.mtry = 3;
    rcfg.threads = 1;
    const RunReport a = run_experiment(rcfg);
    const RunReport b = run_experiment(rcfg);
    if (a.to_json() != b.to_json()) fail("report json differs across reruns");

    const fs::path base = fs::temp_directory_path() / "uplift_acceptance";
    fs::remove_all(base);
    write_report(a, (base / "a").string());
    write_report(b, (base / "b").string());
    for (const char* f : {"table2.csv", "table3.csv", "table4.csv",
                          "table5.csv", "ate_estimates.csv", "report.json"}) {
      std::ifstream fa(base / "a" / f), fb(base / "b" / f);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      if (sa.str().empty() || sa.str() != sb.str()) {
        fail(std::string("artifact differs: ") + f);
      }
    }
    fs::remove_all(base);
  }

  report(9, "property suites", pass, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criteria_6_and_7();
  criterion_8();
  criterion_9();
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
