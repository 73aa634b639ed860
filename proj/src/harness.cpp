#include "uplift/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include <nlohmann/json.hpp>

#include "uplift/errors.hpp"
#include "uplift/estimators.hpp"
#include "uplift/evaluation.hpp"
#include "uplift/rng.hpp"

namespace uplift {

namespace {

using nlohmann::json;

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

MeanSd summarize(const std::vector<double>& v) {
  MeanSd out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) /
             static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0;
    for (double x : v) acc += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!synthetic && !csv) throw DataError("config: no data source");
  if (folds < 2) throw DataError("config: folds must be >= 2");
  if (draws_per_fold < 1) throw DataError("config: draws_per_fold must be >= 1");
  if (schemes.empty()) throw DataError("config: no schemes");
  for (const auto& s : schemes) {
    if (s.supervised()) {
      if (s.bins < 1 || !(s.e_lo > 0 && s.e_lo <= s.e_hi && s.e_hi < 1)) {
        throw DataError("config: invalid supervised scheme");
      }
    } else if (!(s.e > 0 && s.e < 1)) {
      throw DataError("config: full scheme probability outside (0,1)");
    }
  }
  if (profit_values.empty()) throw DataError("config: empty profit grid");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw DataError("invalid config JSON: " + std::string(e.what()));
  }
  ExperimentConfig cfg;
  if (j.contains("data_source")) {
    const auto& d = j["data_source"];
    const std::string type = d.value("type", "synthetic");
    if (type == "synthetic") {
      SyntheticSpec s;
      s.n = d.value("n", s.n);
      s.num_columns = d.value("num_columns", s.num_columns);
      s.tau_columns = d.value("tau_columns", s.tau_columns);
      s.hidden_columns = d.value("hidden_columns", s.hidden_columns);
      s.base_rate = d.value("base_rate", s.base_rate);
      cfg.synthetic = s;
      cfg.csv.reset();
    } else if (type == "csv") {
      CsvSpec c;
      c.data_path = d.at("data").get<std::string>();
      c.schema_path = d.at("schema").get<std::string>();
      c.target_column = d.value("target", c.target_column);
      if (d.contains("tau_columns")) {
        c.tau_columns = d["tau_columns"].get<std::vector<std::string>>();
      }
      cfg.csv = c;
      cfg.synthetic.reset();
    } else {
      throw DataError("config: unknown data_source type " + type);
    }
  }
  if (j.contains("tau")) {
    cfg.tau_seed = j["tau"].value("seed", cfg.tau_seed);
    cfg.target_ate = j["tau"].value("ate", cfg.target_ate);
    cfg.target_sd = j["tau"].value("sd", cfg.target_sd);
  }
  cfg.oracle_sigma = j.value("oracle_sigma", cfg.oracle_sigma);
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j["schemes"]) {
      SchemeSpec spec;
      spec.name = s.at("name").get<std::string>();
      spec.e = s.value("e", spec.e);
      spec.bins = s.value("bins", spec.bins);
      spec.e_lo = s.value("e_lo", spec.e_lo);
      spec.e_hi = s.value("e_hi", spec.e_hi);
      cfg.schemes.push_back(spec);
    }
  }
  cfg.folds = j.value("folds", cfg.folds);
  cfg.draws_per_fold = j.value("draws_per_fold", cfg.draws_per_fold);
  if (j.contains("forest")) {
    const auto& f = j["forest"];
    cfg.forest.trees = f.value("trees", cfg.forest.trees);
    cfg.forest.mtry = f.value("mtry", cfg.forest.mtry);
    cfg.forest.min_node = f.value("min_node", cfg.forest.min_node);
    cfg.forest.arm_min = f.value("arm_min", cfg.forest.arm_min);
    cfg.forest.honest_fraction =
        f.value("honest_fraction", cfg.forest.honest_fraction);
    cfg.forest.subsample_fraction =
        f.value("subsample_fraction", cfg.forest.subsample_fraction);
  }
  cfg.profit_values =
      j.value("profit_values", cfg.profit_values);
  cfg.contact_cost = j.value("contact_cost", cfg.contact_cost);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.validate();
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  json j;
  if (synthetic) {
    j["data_source"] = {{"type", "synthetic"},
                        {"n", synthetic->n},
                        {"num_columns", synthetic->num_columns},
                        {"tau_columns", synthetic->tau_columns},
                        {"hidden_columns", synthetic->hidden_columns},
                        {"base_rate", synthetic->base_rate}};
  } else if (csv) {
    j["data_source"] = {{"type", "csv"},
                        {"data", csv->data_path},
                        {"schema", csv->schema_path},
                        {"target", csv->target_column},
                        {"tau_columns", csv->tau_columns}};
  }
  j["tau"] = {{"seed", tau_seed}, {"ate", target_ate}, {"sd", target_sd}};
  j["oracle_sigma"] = oracle_sigma;
  json schemes_j = json::array();
  for (const auto& s : schemes) {
    schemes_j.push_back({{"name", s.name},
                         {"e", s.e},
                         {"bins", s.bins},
                         {"e_lo", s.e_lo},
                         {"e_hi", s.e_hi}});
  }
  j["schemes"] = std::move(schemes_j);
  j["folds"] = folds;
  j["draws_per_fold"] = draws_per_fold;
  j["forest"] = {{"trees", forest.trees},
                 {"mtry", forest.mtry},
                 {"min_node", forest.min_node},
                 {"arm_min", forest.arm_min},
                 {"honest_fraction", forest.honest_fraction},
                 {"subsample_fraction", forest.subsample_fraction}};
  j["profit_values"] = profit_values;
  j["contact_cost"] = contact_cost;
  j["master_seed"] = master_seed;
  j["threads"] = threads;
  return j.dump(2);
}

GroundTruth build_ground_truth(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.synthetic) {
    const SyntheticSpec& spec = *cfg.synthetic;
    std::vector<Column> cols;
    std::vector<std::string> tau_cols;
    for (int c = 0; c < spec.num_columns; ++c) {
      char name[8];
      std::snprintf(name, sizeof(name), "c%02d", c + 1);
      cols.push_back(Column{name, NumericKind{}, c >= spec.hidden_columns});
      if (c < spec.tau_columns) tau_cols.emplace_back(name);
    }

    Dataset ds;
    ds.schema = FeatureSchema(std::move(cols));
    ds.x.resize(spec.n, spec.num_columns);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
      for (int c = 0; c < spec.num_columns; ++c) {
        ds.x(i, c) = rng::gaussian(
            rng::key(cfg.master_seed, 0x636f7678,
                     static_cast<std::uint64_t>(i),
                     static_cast<std::uint64_t>(c)));  // "covx"
      }
    }
    ds.treatment = Eigen::VectorXi::Zero(spec.n);
    ds.outcome = Eigen::VectorXd::Zero(spec.n);
    ds.propensity = Eigen::VectorXd::Constant(spec.n, 0.5);

    auto tau = simulate_tau(ds, tau_cols, cfg.tau_seed, cfg.target_ate,
                            cfg.target_sd);

    // Base conversion model: random slopes, intercept calibrated by
    // bisection so mean(p0) hits the configured base rate.
    Eigen::VectorXd beta(spec.num_columns + 1);
    rng::Stream bs(rng::key(cfg.master_seed, 0x62617365));  // "base"
    // Steep enough that the outcome is substantially predictable from x,
    // as in the semi-synthetic setting; this is what gives doubly robust
    // estimation its variance advantage over plain IPW.
    const double slope_sd = 3.0 / std::sqrt(spec.num_columns);
    for (int c = 0; c < spec.num_columns; ++c) {
      beta[c + 1] = slope_sd * bs.gaussian();
    }
    const Eigen::VectorXd z = ds.x * beta.tail(spec.num_columns);
    double lo = -10, hi = 10;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double mean =
          (1.0 / (1.0 + (-(z.array() + mid)).exp())).mean();
      (mean < spec.base_rate ? lo : hi) = mid;
    }
    beta[0] = 0.5 * (lo + hi);

    GroundTruth gt{make_potential_outcomes_synthetic(
                       ds, tau.tau, beta,
                       rng::key(cfg.master_seed, 0x706f7365)),  // "pose"
                   std::move(tau.network)};
    return gt;
  }

  // Semi-synthetic path: observed data are all-treated; derive y0 by label
  // flipping against a ridge-logistic outcome model.
  const CsvSpec& spec = *cfg.csv;
  const FeatureSchema schema = schema_from_json_file(spec.schema_path);
  Dataset ds = ingest_csv(spec.data_path, schema, spec.target_column);

  std::vector<std::string> tau_cols = spec.tau_columns;
  if (tau_cols.empty()) {
    for (const auto& c : schema.columns()) {
      if (c.observed) tau_cols.push_back(c.name);
    }
  }
  auto tau =
      simulate_tau(ds, tau_cols, cfg.tau_seed, cfg.target_ate, cfg.target_sd);

  const LogisticModel p1_model = fit_logistic(ds.observed_x(), ds.outcome);
  Eigen::VectorXd p1 = p1_model.predict(ds.observed_x());
  p1 = p1.cwiseMax(0.001).cwiseMin(0.999);

  // Mark every observed row as treated before the flip construction.
  ds.treatment.setOnes();
  GroundTruth gt{make_potential_outcomes_flip(
                     ds, tau.tau, p1,
                     rng::key(cfg.master_seed, 0x666c6970)),  // "flip"
                 std::move(tau.network)};
  return gt;
}

namespace {

struct RepModelResult {
  double mae = 0.0;
  double qini = 0.0;
  bool qini_applicable = true;
  std::map<double, double> policy_profit;
};

struct RepSchemeResult {
  double targeted_fraction = 0.0;
  double conversion_rate = 0.0;
  double ate_naive = 0.0;
  double ate_ipw = 0.0;
  double ate_dr = 0.0;
  std::map<std::string, RepModelResult> models;
};

using RepResult = std::map<std::string, RepSchemeResult>;

RepResult run_repetition(const ExperimentConfig& cfg, const GroundTruth& gt,
                         const std::vector<std::vector<Eigen::Index>>& folds,
                         int rep, int forest_threads) {
  const int fold = rep / cfg.draws_per_fold;
  std::vector<Eigen::Index> train_idx;
  for (int f = 0; f < cfg.folds; ++f) {
    if (f == fold) continue;
    train_idx.insert(train_idx.end(), folds[static_cast<std::size_t>(f)].begin(),
                     folds[static_cast<std::size_t>(f)].end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  const auto& hold_idx = folds[static_cast<std::size_t>(fold)];

  const Dataset train = gt.data.subset(train_idx);
  const Dataset hold = gt.data.subset(hold_idx);

  const NoisyOracle oracle{cfg.oracle_sigma,
                           rng::key(cfg.master_seed, 0x6f72636c)};
  const Eigen::VectorXd train_scores =
      oracle_scores(train, oracle, static_cast<std::uint64_t>(rep));

  // Holdout assigned under full(0.5) purely for Qini evaluation.
  AssignmentScheme hold_scheme{FullScheme{0.5},
                               rng::key(cfg.master_seed, 0x686c6471)};
  const Dataset hold_assigned =
      assign(hold, hold_scheme, static_cast<std::uint64_t>(rep));

  const std::uint64_t assign_seed = rng::key(cfg.master_seed, 0x61736e67);
  const Eigen::MatrixXd hold_x = hold.observed_x();

  RepResult out;
  for (const auto& spec : cfg.schemes) {
    AssignmentScheme scheme;
    scheme.seed = assign_seed;  // shared: coupled randomness across schemes
    if (spec.supervised()) {
      scheme.variant = SupervisedScheme{
          build_linear_mapping(train_scores, spec.bins, spec.e_lo, spec.e_hi),
          train_scores};
    } else {
      scheme.variant = FullScheme{spec.e};
    }
    const Dataset assigned =
        assign(train, scheme, static_cast<std::uint64_t>(rep));

    RepSchemeResult res;
    const auto stats = campaign_stats(assigned);
    res.targeted_fraction = stats.targeted_fraction;
    res.conversion_rate = stats.conversion_rate;
    res.ate_naive = ate_naive(assigned).value;
    res.ate_ipw = ate_ipw(assigned).value;

    const TwoModel two = fit_two_model(assigned, /*ipw_weighting=*/true);
    res.ate_dr = ate_dr(assigned, two.treated(), two.control()).value;

    ForestParams fp = cfg.forest;
    fp.seed = rng::key(cfg.master_seed, 0x66727374,
                       static_cast<std::uint64_t>(rep));  // "frst"
    const CausalForest forest = fit_causal_forest(assigned, fp, forest_threads);

    const Eigen::VectorXd& hold_ite = hold.truth->ite;
    auto eval_model = [&](const Eigen::VectorXd& pred, bool with_qini) {
      RepModelResult m;
      m.mae = mae_ite(pred, hold_ite);
      m.qini_applicable = with_qini;
      if (with_qini) {
        m.qini = qini(pred, hold_assigned, /*weighted=*/false).coefficient;
      }
      for (double v : cfg.profit_values) {
        m.policy_profit[v] =
            policy_profit(pred, hold, ProfitSetting{v, cfg.contact_cost});
      }
      return m;
    };

    res.models["ate"] = eval_model(
        Eigen::VectorXd::Constant(hold.n(), res.ate_ipw), false);
    res.models["two_model"] = eval_model(two.predict(hold_x), true);
    res.models["forest"] = eval_model(forest.predict(hold_x), true);

    out[spec.name] = std::move(res);
  }
  return out;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.config = cfg;
  report.config_hash = fnv1a_hex(cfg.to_json());
  report.started_at = timestamp_now();

  const GroundTruth gt = build_ground_truth(cfg);
  report.none_all.none_conversion = gt.data.truth->y0.mean();
  report.none_all.all_conversion = gt.data.truth->y1.mean();

  const auto folds = split_folds(gt.data.n(), cfg.folds, cfg.master_seed);
  const int reps = cfg.folds * cfg.draws_per_fold;
  report.repetitions = reps;

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int threads = cfg.threads > 0 ? cfg.threads : std::max(1, hw);
  const int outer = std::min(threads, reps);
  const int forest_threads = outer > 1 ? 1 : threads;

  std::vector<RepResult> results(static_cast<std::size_t>(reps));
  std::vector<std::string> failures;
  std::mutex failure_mu;
  auto work = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      try {
        results[static_cast<std::size_t>(r)] =
            run_repetition(cfg, gt, folds, r, forest_threads);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mu);
        failures.push_back("repetition " + std::to_string(r) + " (fold " +
                           std::to_string(r / cfg.draws_per_fold) + ", draw " +
                           std::to_string(r % cfg.draws_per_fold) +
                           "): " + e.what());
      }
    }
  };
  if (outer == 1) {
    work(0, reps);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < outer; ++w) {
      pool.emplace_back(work, reps * w / outer, reps * (w + 1) / outer);
    }
    for (auto& th : pool) th.join();
  }
  if (!failures.empty()) {
    // Aborting keeps aggregates unbiased; a silent skip would not.
    throw NumericError("run aborted: " + failures.front());
  }

  // Aggregate in scheme-declaration order.
  for (const auto& spec : cfg.schemes) {
    SchemeCells cells;
    std::vector<double> fracs, convs;
    std::map<std::string, std::vector<double>> maes, qinis;
    std::map<std::string, std::map<double, std::vector<double>>> profits;
    for (const auto& rep : results) {
      const RepSchemeResult& r = rep.at(spec.name);
      fracs.push_back(r.targeted_fraction);
      convs.push_back(r.conversion_rate);
      cells.ate_naive.push_back(r.ate_naive);
      cells.ate_ipw.push_back(r.ate_ipw);
      cells.ate_dr.push_back(r.ate_dr);
      for (const auto& [model, m] : r.models) {
        maes[model].push_back(m.mae);
        if (m.qini_applicable) qinis[model].push_back(m.qini);
        for (const auto& [v, p] : m.policy_profit) {
          profits[model][v].push_back(p);
        }
      }
    }
    cells.targeted_fraction = summarize(fracs);
    cells.conversion_rate = summarize(convs);
    for (double v : cfg.profit_values) {
      cells.experiment_profit[v] =
          cells.conversion_rate.mean * v -
          cells.targeted_fraction.mean * cfg.contact_cost;
    }
    for (const auto& [model, vals] : maes) {
      ModelCells mc;
      mc.mae = summarize(vals);
      if (qinis.count(model)) {
        mc.qini = summarize(qinis[model]);
        mc.qini_applicable = true;
      } else {
        mc.qini_applicable = false;
      }
      for (const auto& [v, ps] : profits[model]) {
        mc.policy_profit[v] = summarize(ps);
      }
      cells.models[model] = std::move(mc);
    }
    report.schemes[spec.name] = std::move(cells);
  }

  // Hypothesis tests over the corrected estimate groups.
  std::vector<std::vector<double>> kw_groups;
  for (const auto& spec : cfg.schemes) {
    kw_groups.push_back(report.schemes[spec.name].ate_ipw);
  }
  const SchemeCells* supervised = nullptr;
  for (const auto& spec : cfg.schemes) {
    if (spec.supervised()) supervised = &report.schemes[spec.name];
  }
  if (supervised) kw_groups.push_back(supervised->ate_dr);
  if (kw_groups.size() >= 2 && reps >= 2) {
    const auto kw = kruskal_wallis(kw_groups);
    report.kw_h = kw.h;
    report.kw_df = kw.df;
    report.kw_p = kw.degenerate ? 1.0 : chi_squared_sf(kw.h, kw.df);
  }
  if (supervised && reps >= 2) {
    const auto lv = levene({supervised->ate_ipw, supervised->ate_dr});
    report.levene_f = lv.f;
    report.levene_df1 = lv.df1;
    report.levene_df2 = lv.df2;
    report.levene_p = f_sf(lv.f, lv.df1, lv.df2);
  }

  report.finished_at = timestamp_now();
  return report;
}

std::string RunReport::to_json() const {
  json j;
  j["config"] = json::parse(config.to_json());
  j["config_hash"] = config_hash;
  // Timestamps live in run_meta.json so report.json is byte-identical
  // across reruns with the same seed.
  j["repetitions"] = repetitions;
  j["reference"] = {{"none_conversion", none_all.none_conversion},
                    {"all_conversion", none_all.all_conversion}};
  json sj;
  for (const auto& [name, cells] : schemes) {
    json s;
    s["targeted_fraction"] = {{"mean", cells.targeted_fraction.mean},
                              {"sd", cells.targeted_fraction.sd}};
    s["conversion_rate"] = {{"mean", cells.conversion_rate.mean},
                            {"sd", cells.conversion_rate.sd}};
    json profit;
    for (const auto& [v, p] : cells.experiment_profit) {
      profit[std::to_string(v)] = p;
    }
    s["experiment_profit"] = std::move(profit);
    s["ate"] = {{"naive", cells.ate_naive},
                {"ipw", cells.ate_ipw},
                {"dr", cells.ate_dr}};
    json models;
    for (const auto& [model, mc] : cells.models) {
      json m;
      m["mae"] = {{"mean", mc.mae.mean}, {"sd", mc.mae.sd}};
      if (mc.qini_applicable) {
        m["qini"] = {{"mean", mc.qini.mean}, {"sd", mc.qini.sd}};
      } else {
        m["qini"] = nullptr;
      }
      json pp;
      for (const auto& [v, p] : mc.policy_profit) {
        pp[std::to_string(v)] = {{"mean", p.mean}, {"sd", p.sd}};
      }
      m["policy_profit"] = std::move(pp);
      models[model] = std::move(m);
    }
    s["models"] = std::move(models);
    sj[name] = std::move(s);
  }
  j["schemes"] = std::move(sj);
  j["tests"] = {{"kruskal_wallis",
                 {{"h", kw_h}, {"df", kw_df}, {"p", kw_p}}},
                {"levene",
                 {{"f", levene_f},
                  {"df1", levene_df1},
                  {"df2", levene_df2},
                  {"p", levene_p}}}};
  return j.dump(2);
}

void write_report(const RunReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };

  {
    std::ofstream out(path("table2.csv"));
    out << "scheme,targeted_fraction,conversion_rate\n";
    out << "none,0," << report.none_all.none_conversion << "\n";
    for (const auto& spec : report.config.schemes) {
      const auto& c = report.schemes.at(spec.name);
      out << spec.name << "," << c.targeted_fraction.mean << ","
          << c.conversion_rate.mean << "\n";
    }
    out << "all,1," << report.none_all.all_conversion << "\n";
  }
  {
    std::ofstream out(path("table3.csv"));
    out << "scheme,model,mae,qini\n";
    for (const auto& spec : report.config.schemes) {
      for (const std::string model : {"ate", "two_model", "forest"}) {
        const auto& models = report.schemes.at(spec.name).models;
        if (!models.count(model)) continue;
        const auto& m = models.at(model);
        out << spec.name << "," << model << "," << m.mae.mean << ",";
        if (m.qini_applicable) out << m.qini.mean;
        else out << "-";
        out << "\n";
      }
    }
  }
  {
    std::ofstream out(path("table4.csv"));
    out << "V,scheme,profit\n";
    for (double v : report.config.profit_values) {
      out << v << ",none,"
          << report.none_all.none_conversion * v << "\n";
      for (const auto& spec : report.config.schemes) {
        out << v << "," << spec.name << ","
            << report.schemes.at(spec.name).experiment_profit.at(v) << "\n";
      }
      out << v << ",all,"
          << report.none_all.all_conversion * v - report.config.contact_cost
          << "\n";
    }
  }
  {
    std::ofstream out(path("table5.csv"));
    out << "V,model,scheme,profit\n";
    for (double v : report.config.profit_values) {
      for (const std::string model : {"two_model", "forest"}) {
        for (const auto& spec : report.config.schemes) {
          const auto& models = report.schemes.at(spec.name).models;
          if (!models.count(model)) continue;
          out << v << "," << model << "," << spec.name << ","
              << models.at(model).policy_profit.at(v).mean << "\n";
        }
      }
    }
  }
  {
    std::ofstream out(path("ate_estimates.csv"));
    out << "scheme,method,repetition,value\n";
    for (const auto& spec : report.config.schemes) {
      const auto& c = report.schemes.at(spec.name);
      for (int r = 0; r < report.repetitions; ++r) {
        out << spec.name << ",naive," << r << ","
            << c.ate_naive[static_cast<std::size_t>(r)] << "\n";
        out << spec.name << ",ipw," << r << ","
            << c.ate_ipw[static_cast<std::size_t>(r)] << "\n";
        out << spec.name << ",dr," << r << ","
            << c.ate_dr[static_cast<std::size_t>(r)] << "\n";
      }
    }
  }
  {
    std::ofstream out(path("report.json"));
    out << report.to_json() << "\n";
  }
  {
    std::ofstream out(path("config_resolved.json"));
    out << report.config.to_json() << "\n";
  }
  {
    std::ofstream out(path("run_meta.json"));
    json meta = {{"config_hash", report.config_hash},
                 {"started_at", report.started_at},
                 {"finished_at", report.finished_at}};
    out << meta.dump(2) << "\n";
  }
}

}  // namespace uplift
