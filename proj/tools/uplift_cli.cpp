#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uplift/errors.hpp"
#include "uplift/estimators.hpp"
#include "uplift/evaluation.hpp"
#include "uplift/harness.hpp"
#include "uplift/models.hpp"
#include "uplift/randomization.hpp"
#include "uplift/rng.hpp"
#include "uplift/simulation.hpp"

namespace {

using namespace uplift;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const std::string& path) {
  return ExperimentConfig::from_json(read_file(path));
}

// "full:0.5" or "supervised" or "supervised:10:0.05:0.95"
AssignmentScheme parse_scheme(const std::string& text, const Dataset& ds,
                              double sigma, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.empty()) throw DataError("empty scheme spec");

  AssignmentScheme scheme;
  scheme.seed = seed;
  if (parts[0] == "full") {
    FullScheme full;
    if (parts.size() > 1) full.e = std::stod(parts[1]);
    scheme.variant = full;
  } else if (parts[0] == "supervised") {
    const int bins = parts.size() > 1 ? std::stoi(parts[1]) : 10;
    const double e_lo = parts.size() > 2 ? std::stod(parts[2]) : 0.05;
    const double e_hi = parts.size() > 3 ? std::stod(parts[3]) : 0.95;
    const Eigen::VectorXd scores =
        oracle_scores(ds, NoisyOracle{sigma, rng::key(seed, 0x6f72636c)}, 0);
    scheme.variant = SupervisedScheme{
        build_linear_mapping(scores, bins, e_lo, e_hi), scores};
  } else {
    throw DataError("unknown scheme: " + parts[0]);
  }
  return scheme;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const GroundTruth gt = build_ground_truth(cfg);
  emit_csv(gt.data, out_path);
  std::ofstream net(out_path + ".tau_network.json");
  net << gt.network.to_json() << "\n";
  std::cerr << "wrote " << gt.data.n() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_assign(const std::string& data_path, const std::string& scheme_spec,
               double sigma, std::uint64_t seed, const std::string& out_path) {
  const Dataset ds = read_emitted_csv(data_path);
  const AssignmentScheme scheme = parse_scheme(scheme_spec, ds, sigma, seed);
  const Dataset assigned = assign(ds, scheme);
  emit_csv(assigned, out_path);
  const auto stats = campaign_stats(assigned);
  std::cerr << "targeted fraction " << stats.targeted_fraction
            << ", conversion rate " << stats.conversion_rate << "\n";
  return 0;
}

int cmd_estimate(const std::string& data_path, const std::string& out_path,
                 std::uint64_t seed, int threads) {
  const Dataset ds = read_emitted_csv(data_path);
  nlohmann::json j;
  j["naive"] = ate_naive(ds).value;
  j["ipw"] = ate_ipw(ds).value;

  const TwoModel two = fit_two_model(ds, true);
  j["dr"] = ate_dr(ds, two.treated(), two.control()).value;

  ForestParams fp;
  fp.seed = seed;
  const CausalForest forest = fit_causal_forest(ds, fp, std::max(1, threads));
  const Eigen::MatrixXd x = ds.observed_x();
  const Eigen::VectorXd pred_two = two.predict(x);
  const Eigen::VectorXd pred_forest = forest.predict(x);
  if (ds.truth) {
    j["two_model"]["mae"] = mae_ite(pred_two, ds.truth->ite);
    j["forest"]["mae"] = mae_ite(pred_forest, ds.truth->ite);
  }
  j["two_model"]["qini"] = qini(pred_two, ds, true).coefficient;
  j["forest"]["qini"] = qini(pred_forest, ds, true).coefficient;

  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_report(const std::string& config_path, const std::string& out_dir,
               std::uint64_t seed_override, bool has_seed, int threads) {
  ExperimentConfig cfg = load_config(config_path);
  if (has_seed) cfg.master_seed = seed_override;
  if (threads > 0) cfg.threads = threads;
  const RunReport report = run_experiment(cfg);
  write_report(report, out_dir);
  std::cerr << "report written to " << out_dir << "\n";
  return 0;
}

#define SELFTEST_CHECK(cond)                                        \
  do {                                                              \
    if (!(cond)) {                                                  \
      std::cerr << "selftest FAILED: " << #cond << "\n";            \
      return 3;                                                     \
    }                                                               \
  } while (0)

int cmd_selftest() {
  // Hand-evaluated IPW fixture: treated Y=1 e=0.2 and control Y=1 e=0.8
  // cancel exactly.
  Dataset ds;
  ds.schema = FeatureSchema({Column{"x", NumericKind{}, true}});
  ds.x = Eigen::MatrixXd::Zero(2, 1);
  ds.treatment.resize(2);
  ds.treatment << 1, 0;
  ds.outcome.resize(2);
  ds.outcome << 1, 1;
  ds.propensity.resize(2);
  ds.propensity << 0.2, 0.8;
  SELFTEST_CHECK(std::fabs(ate_ipw(ds).value) < 1e-12);

  // DR with zero outcome models collapses to IPW on random fixtures.
  rng::Stream s(7);
  for (int rep = 0; rep < 20; ++rep) {
    Dataset f;
    f.schema = ds.schema;
    const Eigen::Index n = 20;
    f.x = Eigen::MatrixXd::Zero(n, 1);
    f.treatment.resize(n);
    f.outcome.resize(n);
    f.propensity.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      f.treatment[i] = s.uniform() < 0.5 ? 1 : 0;
      f.outcome[i] = s.uniform() < 0.3 ? 1.0 : 0.0;
      f.propensity[i] = 0.05 + 0.9 * s.uniform();
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    SELFTEST_CHECK(std::fabs(ate_dr(f, zero, zero).value -
                             ate_ipw(f).value) < 1e-12);
  }

  // Constant score has zero Qini.
  Dataset q = ds;
  SELFTEST_CHECK(
      std::fabs(qini(Eigen::VectorXd::Constant(2, 0.1), q, false).coefficient) <
      1e-15);

  // Rank test fixture {1,2,3} vs {4,5,6}.
  const auto kw = kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
  SELFTEST_CHECK(std::fabs(kw.h - 27.0 / 7.0) < 1e-12);

  // Calibration exactness on a small synthetic draw.
  ExperimentConfig cfg;
  cfg.synthetic->n = 2000;
  const GroundTruth gt = build_ground_truth(cfg);
  std::vector<std::string> cols;
  for (int c = 0; c < cfg.synthetic->tau_columns; ++c) {
    char name[8];
    std::snprintf(name, sizeof(name), "c%02d", c + 1);
    cols.emplace_back(name);
  }
  const auto tau = simulate_tau(gt.data, cols, cfg.tau_seed, 0.05, 0.04);
  const double mean = tau.tau.mean();
  const double sd = std::sqrt((tau.tau.array() - mean).square().sum() /
                              (tau.tau.size() - 1));
  SELFTEST_CHECK(std::fabs(mean - 0.05) < 1e-9);
  SELFTEST_CHECK(std::fabs(sd - 0.04) < 1e-9);

  std::cerr << "selftest passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervised-randomization experiment simulator"};
  app.require_subcommand(1);

  std::string config_path, data_path, out_path, scheme_spec = "full:0.5";
  double sigma = 0.025;
  std::uint64_t seed = 42;
  int threads = 0;

  auto* sim = app.add_subcommand("simulate", "generate a ground-truth dataset");
  sim->add_option("--config", config_path, "config JSON")->required();
  sim->add_option("--out", out_path, "output CSV path")->required();

  auto* asn = app.add_subcommand("assign", "apply a randomization scheme");
  asn->add_option("--data", data_path, "ground-truth CSV")->required();
  asn->add_option("--scheme", scheme_spec,
                  "full:E or supervised[:bins[:e_lo:e_hi]]");
  asn->add_option("--sigma", sigma, "oracle noise sd for supervised");
  asn->add_option("--seed", seed, "assignment seed");
  asn->add_option("--out", out_path, "assigned CSV path")->required();

  auto* est = app.add_subcommand("estimate", "ATEs and models on assigned data");
  est->add_option("--data", data_path, "assigned CSV")->required();
  est->add_option("--out", out_path, "output JSON (default stdout)");
  est->add_option("--seed", seed, "forest seed");
  est->add_option("--threads", threads, "worker threads");

  auto* rep = app.add_subcommand("report", "full Monte Carlo run");
  rep->add_option("--config", config_path, "config JSON")->required();
  rep->add_option("--out", out_path, "output directory")->required();
  auto* seed_opt = rep->add_option("--seed", seed, "master seed override");
  rep->add_option("--threads", threads, "worker threads");

  auto* self = app.add_subcommand("selftest", "run built-in oracle checks");
  (void)self;

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_path);
    if (asn->parsed()) return cmd_assign(data_path, scheme_spec, sigma, seed, out_path);
    if (est->parsed()) return cmd_estimate(data_path, out_path, seed, threads);
    if (rep->parsed()) {
      return cmd_report(config_path, out_path, seed, seed_opt->count() > 0,
                        threads);
    }
    if (self->parsed()) return cmd_selftest();
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
