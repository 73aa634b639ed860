#include <algorithm>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "uplift/errors.hpp"
#include "uplift/models.hpp"
#include "uplift/rng.hpp"

namespace uplift {

int CausalTree::route(const Eigen::RowVectorXd& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
    node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return node;
}

Eigen::VectorXd CausalForest::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (const auto& tree : trees_) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const int leaf = tree.route(x.row(i));
      out[i] += tree.nodes[static_cast<std::size_t>(leaf)].tau;
    }
  }
  return out / static_cast<double>(trees_.size());
}

std::string CausalForest::to_json() const {
  nlohmann::json j;
  j["kind"] = "causal_forest";
  j["params"] = {{"trees", params_.trees},
                 {"mtry", params_.mtry},
                 {"min_node", params_.min_node},
                 {"arm_min", params_.arm_min},
                 {"honest_fraction", params_.honest_fraction},
                 {"subsample_fraction", params_.subsample_fraction},
                 {"seed", params_.seed}};
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : tree.nodes) {
      nodes.push_back({{"feature", nd.feature},
                       {"threshold", nd.threshold},
                       {"left", nd.left},
                       {"right", nd.right},
                       {"tau", nd.tau},
                       {"n_treated", nd.n_treated},
                       {"n_control", nd.n_control}});
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

namespace {

struct GrowContext {
  const Eigen::MatrixXd& x;       // observed covariates of all rows
  const Eigen::VectorXd& signed_w;  // D y/e - (1-D) y/(1-e) per row
  const Eigen::VectorXi& treatment;
  const ForestParams& params;
  std::vector<TreeNode>& nodes;
  rng::Stream& stream;
};

struct ArmCounts {
  int total = 0;
  int treated = 0;
  int control = 0;
};

double subset_effect(const GrowContext& ctx,
                     const std::vector<Eigen::Index>& rows) {
  if (rows.empty()) return 0.0;
  double s = 0;
  for (const auto r : rows) s += ctx.signed_w[r];
  return s / static_cast<double>(rows.size());
}

ArmCounts count_arms(const GrowContext& ctx,
                     const std::vector<Eigen::Index>& rows) {
  ArmCounts c;
  c.total = static_cast<int>(rows.size());
  for (const auto r : rows) {
    if (ctx.treatment[r] > 0) ++c.treated; else ++c.control;
  }
  return c;
}

bool child_ok(const GrowContext& ctx, const ArmCounts& s, const ArmCounts& e) {
  return s.total >= ctx.params.min_node &&
         s.treated >= ctx.params.arm_min && s.control >= ctx.params.arm_min &&
         e.treated >= ctx.params.arm_min && e.control >= ctx.params.arm_min;
}

// Candidate thresholds: midpoints between consecutive distinct values of up
// to 32 evenly spaced sample quantiles at this node.
std::vector<double> candidate_thresholds(const GrowContext& ctx, int feature,
                                         const std::vector<Eigen::Index>& rows) {
  std::vector<double> vals;
  vals.reserve(rows.size());
  for (const auto r : rows) vals.push_back(ctx.x(r, feature));
  std::sort(vals.begin(), vals.end());

  constexpr int kQuantiles = 32;
  std::vector<double> qs;
  const auto m = static_cast<int>(vals.size());
  for (int q = 0; q < kQuantiles; ++q) {
    const int pos = kQuantiles == 1
                        ? 0
                        : static_cast<int>(
                              (static_cast<long long>(q) * (m - 1)) /
                              (kQuantiles - 1));
    qs.push_back(vals[static_cast<std::size_t>(pos)]);
  }
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
    out.push_back(0.5 * (qs[i] + qs[i + 1]));
  }
  return out;
}

int grow(GrowContext& ctx, std::vector<Eigen::Index> structure,
         std::vector<Eigen::Index> estimation, int depth) {
  const int node_id = static_cast<int>(ctx.nodes.size());
  ctx.nodes.emplace_back();

  const double parent_tau = subset_effect(ctx, structure);
  const double parent_score =
      static_cast<double>(structure.size()) * parent_tau * parent_tau;

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_gain = parent_score;  // splits must not lose variance

  const bool depth_allowed =
      ctx.params.max_depth < 0 || depth < ctx.params.max_depth;
  if (depth_allowed && !structure.empty()) {
    // Sample mtry distinct features.
    const int d = static_cast<int>(ctx.x.cols());
    std::vector<int> features(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) features[static_cast<std::size_t>(j)] = j;
    ctx.stream.shuffle(features);
    const int take = std::min(ctx.params.mtry, d);
    features.resize(static_cast<std::size_t>(take));
    std::sort(features.begin(), features.end());

    const ArmCounts parent_s = count_arms(ctx, structure);
    const ArmCounts parent_e = count_arms(ctx, estimation);
    double sum_total = 0;
    for (const auto r : structure) sum_total += ctx.signed_w[r];

    for (const int f : features) {
      for (const double thr : candidate_thresholds(ctx, f, structure)) {
        ArmCounts sl, el;
        double sum_left = 0;
        int n_left = 0;
        for (const auto r : structure) {
          if (ctx.x(r, f) <= thr) {
            ++n_left;
            if (ctx.treatment[r] > 0) ++sl.treated; else ++sl.control;
            sum_left += ctx.signed_w[r];
          }
        }
        sl.total = n_left;
        ArmCounts sr;
        sr.total = static_cast<int>(structure.size()) - sl.total;
        sr.treated = parent_s.treated - sl.treated;
        sr.control = parent_s.control - sl.control;

        for (const auto r : estimation) {
          if (ctx.x(r, f) <= thr) {
            if (ctx.treatment[r] > 0) ++el.treated; else ++el.control;
          }
        }
        el.total = el.treated + el.control;
        ArmCounts er;
        er.treated = parent_e.treated - el.treated;
        er.control = parent_e.control - el.control;
        er.total = er.treated + er.control;

        if (!child_ok(ctx, sl, el) || !child_ok(ctx, sr, er)) continue;

        const double sum_right = sum_total - sum_left;
        const double gain = sum_left * sum_left / sl.total +
                            sum_right * sum_right / sr.total;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = thr;
        }
      }
    }
  }

  if (best_feature < 0) {
    TreeNode& leaf = ctx.nodes[static_cast<std::size_t>(node_id)];
    leaf.feature = -1;
    leaf.tau = subset_effect(ctx, estimation);
    const auto e = count_arms(ctx, estimation);
    leaf.n_treated = e.treated;
    leaf.n_control = e.control;
    return node_id;
  }

  std::vector<Eigen::Index> s_left, s_right, e_left, e_right;
  for (const auto r : structure) {
    (ctx.x(r, best_feature) <= best_threshold ? s_left : s_right).push_back(r);
  }
  for (const auto r : estimation) {
    (ctx.x(r, best_feature) <= best_threshold ? e_left : e_right).push_back(r);
  }
  structure.clear();
  estimation.clear();

  const int left = grow(ctx, std::move(s_left), std::move(e_left), depth + 1);
  const int right =
      grow(ctx, std::move(s_right), std::move(e_right), depth + 1);
  TreeNode& nd = ctx.nodes[static_cast<std::size_t>(node_id)];
  nd.feature = best_feature;
  nd.threshold = best_threshold;
  nd.left = left;
  nd.right = right;
  return node_id;
}

CausalTree grow_tree(const Eigen::MatrixXd& x,
                     const Eigen::VectorXd& signed_w,
                     const Eigen::VectorXi& treatment,
                     const ForestParams& params, std::uint64_t tree_key) {
  rng::Stream stream(tree_key);
  const auto n = x.rows();

  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  stream.shuffle(all);
  const auto sub_n = static_cast<std::size_t>(
      std::floor(params.subsample_fraction * static_cast<double>(n)));
  all.resize(std::max<std::size_t>(sub_n, 2));

  const auto struct_n = static_cast<std::size_t>(
      std::floor(params.honest_fraction * static_cast<double>(all.size())));
  CausalTree tree;
  tree.structure_rows.assign(all.begin(),
                             all.begin() + static_cast<long>(struct_n));
  tree.estimation_rows.assign(all.begin() + static_cast<long>(struct_n),
                              all.end());

  GrowContext ctx{x, signed_w, treatment, params, tree.nodes, stream};
  grow(ctx, tree.structure_rows, tree.estimation_rows, 0);
  return tree;
}

}  // namespace

CausalForest fit_causal_forest(const Dataset& ds, const ForestParams& params,
                               int threads) {
  if (ds.n() < 4 * params.min_node) {
    throw DataError("fit_causal_forest: dataset too small for min_node");
  }
  if (params.trees < 1) throw DataError("fit_causal_forest: needs >= 1 tree");

  const Eigen::MatrixXd x = ds.observed_x();
  Eigen::VectorXd signed_w(ds.n());
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const double e = ds.propensity[i];
    signed_w[i] = ds.treatment[i] > 0 ? ds.outcome[i] / e
                                      : -ds.outcome[i] / (1.0 - e);
  }

  std::vector<CausalTree> trees(static_cast<std::size_t>(params.trees));
  auto build_range = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      trees[static_cast<std::size_t>(t)] =
          grow_tree(x, signed_w, ds.treatment, params,
                    rng::key(params.seed, 0x74726565,
                             static_cast<std::uint64_t>(t)));  // "tree"
    }
  };

  const int workers = std::max(1, std::min(threads, params.trees));
  if (workers == 1) {
    build_range(0, params.trees);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const int begin = params.trees * w / workers;
      const int end = params.trees * (w + 1) / workers;
      pool.emplace_back(build_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return CausalForest(std::move(trees), params);
}

}  // namespace uplift
