#ifndef CHURN_CLASSIFIER_HPP
#define CHURN_CLASSIFIER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "churn/confusion.hpp"
#include "churn/features.hpp"

namespace churn {

enum class ClassifierKind { logreg, linear_svm, random_forest };

inline const char* classifier_kind_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::logreg: return "logreg";
        case ClassifierKind::linear_svm: return "svm";
        default: return "forest";
    }
}

inline ClassifierKind parse_classifier_kind(const std::string& s) {
    if (s == "logreg") return ClassifierKind::logreg;
    if (s == "svm" || s == "linear_svm") return ClassifierKind::linear_svm;
    if (s == "forest" || s == "random_forest") return ClassifierKind::random_forest;
    throw DataError("unknown classifier kind: " + s);
}

/// Per-feature training mean/std. Zero-std features transform to 0.
struct StandardizationParams {
    std::vector<double> mean;
    std::vector<double> stddev;
};

inline StandardizationParams fit_standardizer(const FeatureMatrix& m) {
    if (m.rows.empty()) throw DataError("fit_standardizer: empty matrix");
    const std::size_t k = m.column_count();
    const double n = static_cast<double>(m.rows.size());
    StandardizationParams p;
    p.mean.assign(k, 0.0);
    p.stddev.assign(k, 0.0);
    for (const auto& r : m.rows)
        for (std::size_t j = 0; j < k; ++j) p.mean[j] += r.values[j];
    for (auto& v : p.mean) v /= n;
    for (const auto& r : m.rows)
        for (std::size_t j = 0; j < k; ++j) {
            double d = r.values[j] - p.mean[j];
            p.stddev[j] += d * d;
        }
    for (auto& v : p.stddev) v = std::sqrt(v / n);
    return p;
}

inline std::vector<double> apply_standardizer(const StandardizationParams& p,
                                              const std::vector<double>& values) {
    if (values.size() != p.mean.size())
        throw DataError("standardizer dimension mismatch");
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j)
        out[j] = p.stddev[j] == 0.0 ? 0.0 : (values[j] - p.mean[j]) / p.stddev[j];
    return out;
}

inline FeatureMatrix apply_standardizer(const StandardizationParams& p, const FeatureMatrix& m) {
    FeatureMatrix out = m;
    for (auto& r : out.rows) r.values = apply_standardizer(p, r.values);
    return out;
}

struct LogRegConfig {
    double learning_rate = 0.1;
    int epochs = 2000;
    double l2 = 1e-3;
    double tolerance = 1e-6;
    std::uint32_t seed = 42;
};

struct SvmConfig {
    double learning_rate = 0.05;
    int epochs = 2000;
    double l2 = 1e-3;
    std::uint32_t seed = 42;
};

struct ForestConfig {
    int n_trees = 100;
    int max_depth = 0;  // 0 = unlimited
    int min_samples_split = 2;
    std::uint32_t seed = 42;
};

/// One decision-tree node; children index into the owning tree's node
/// vector, -1 for leaves.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t count_false = 0;
    std::size_t count_true = 0;

    bool is_leaf() const { return left < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    bool vote(const std::vector<double>& x) const {
        int idx = 0;
        while (!nodes[idx].is_leaf())
            idx = x[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                                : nodes[idx].right;
        return nodes[idx].count_true > nodes[idx].count_false;
    }
};

struct TrainedModel {
    ClassifierKind kind = ClassifierKind::logreg;
    std::vector<std::string> columns;  // training column names, order-sensitive
    StandardizationParams standardization;
    double decision_threshold = 0.5;

    // linear models
    std::vector<double> weights;
    double bias = 0.0;

    // forest
    std::vector<DecisionTree> trees;

    nlohmann::json training_config;
};

namespace detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<bool> y;
};

inline Dataset standardized_dataset(const FeatureMatrix& m, const StandardizationParams& p) {
    Dataset d;
    d.x.reserve(m.rows.size());
    for (const auto& r : m.rows) {
        d.x.push_back(apply_standardizer(p, r.values));
        d.y.push_back(r.leave_label);
    }
    return d;
}

inline void require_both_classes(const FeatureMatrix& m) {
    bool any_true = false, any_false = false;
    for (const auto& r : m.rows) (r.leave_label ? any_true : any_false) = true;
    if (!any_true || !any_false)
        throw DataError("training set must contain both classes");
}

}  // namespace detail

/// L2-regularized negative log-likelihood (mean over rows, bias
/// unregularized) and its gradient. Exposed so the analytic gradient
/// can be checked against finite differences.
struct LogRegGradient {
    double loss = 0.0;
    std::vector<double> d_weights;
    double d_bias = 0.0;
};

inline LogRegGradient logreg_loss_and_gradient(const std::vector<std::vector<double>>& x,
                                               const std::vector<bool>& y,
                                               const std::vector<double>& w, double b, double l2) {
    const std::size_t n = x.size();
    LogRegGradient g;
    g.d_weights.assign(w.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double z = detail::dot(w, x[i]) + b;
        double p = detail::sigmoid(z);
        double target = y[i] ? 1.0 : 0.0;
        // numerically stable log-loss via log1p(exp(-|z|))
        double log1pe = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        g.loss += log1pe - target * z;
        double resid = p - target;
        for (std::size_t j = 0; j < w.size(); ++j) g.d_weights[j] += resid * x[i][j];
        g.d_bias += resid;
    }
    g.loss /= static_cast<double>(n);
    g.d_bias /= static_cast<double>(n);
    for (std::size_t j = 0; j < w.size(); ++j) {
        g.d_weights[j] /= static_cast<double>(n);
        g.d_weights[j] += l2 * w[j];
        g.loss += 0.5 * l2 * w[j] * w[j];
    }
    return g;
}

inline TrainedModel train_logreg(const FeatureMatrix& m, const LogRegConfig& cfg = {}) {
    detail::require_both_classes(m);
    TrainedModel model;
    model.kind = ClassifierKind::logreg;
    model.columns = m.columns();
    model.standardization = fit_standardizer(m);
    model.training_config = {{"learning_rate", cfg.learning_rate}, {"epochs", cfg.epochs},
                             {"l2", cfg.l2},       {"tolerance", cfg.tolerance},
                             {"seed", cfg.seed}};
    auto d = detail::standardized_dataset(m, model.standardization);

    std::vector<double> w(model.columns.size(), 0.0);
    double b = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto g = logreg_loss_and_gradient(d.x, d.y, w, b, cfg.l2);
        double max_grad = std::abs(g.d_bias);
        for (double dg : g.d_weights) max_grad = std::max(max_grad, std::abs(dg));
        if (max_grad < cfg.tolerance) break;
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= cfg.learning_rate * g.d_weights[j];
        b -= cfg.learning_rate * g.d_bias;
    }
    model.weights = std::move(w);
    model.bias = b;
    return model;
}

inline TrainedModel train_linear_svm(const FeatureMatrix& m, const SvmConfig& cfg = {}) {
    detail::require_both_classes(m);
    TrainedModel model;
    model.kind = ClassifierKind::linear_svm;
    model.columns = m.columns();
    model.standardization = fit_standardizer(m);
    model.training_config = {{"learning_rate", cfg.learning_rate}, {"epochs", cfg.epochs},
                             {"l2", cfg.l2},       {"seed", cfg.seed}};
    auto d = detail::standardized_dataset(m, model.standardization);
    const std::size_t n = d.x.size();
    const std::size_t k = model.columns.size();

    // full-batch subgradient descent on (l2/2)||w||^2 + mean hinge loss
    std::vector<double> w(k, 0.0);
    double b = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<double> gw(k, 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double yi = d.y[i] ? 1.0 : -1.0;
            double margin = yi * (detail::dot(w, d.x[i]) + b);
            if (margin < 1.0) {
                for (std::size_t j = 0; j < k; ++j) gw[j] -= yi * d.x[i][j];
                gb -= yi;
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            gw[j] = gw[j] / static_cast<double>(n) + cfg.l2 * w[j];
            w[j] -= cfg.learning_rate * gw[j];
        }
        b -= cfg.learning_rate * gb / static_cast<double>(n);
    }
    model.weights = std::move(w);
    model.bias = b;
    return model;
}

inline double svm_hinge_objective(const TrainedModel& model, const FeatureMatrix& m, double l2) {
    auto d = detail::standardized_dataset(m, model.standardization);
    double loss = 0.0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        double yi = d.y[i] ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - yi * (detail::dot(model.weights, d.x[i]) + model.bias));
    }
    loss /= static_cast<double>(d.x.size());
    for (double wj : model.weights) loss += 0.5 * l2 * wj * wj;
    return loss;
}

namespace detail {

inline double gini(std::size_t n_false, std::size_t n_true) {
    std::size_t n = n_false + n_true;
    if (n == 0) return 0.0;
    double pf = static_cast<double>(n_false) / static_cast<double>(n);
    double pt = static_cast<double>(n_true) / static_cast<double>(n);
    return 1.0 - pf * pf - pt * pt;
}

struct TreeBuilder {
    const Dataset& data;
    const ForestConfig& cfg;
    std::mt19937& rng;
    std::size_t n_features;
    std::size_t mtry;
    DecisionTree tree;
    std::vector<double>& importance_accum;  // per-feature weighted impurity decrease
    std::size_t total_samples;

    int build(std::vector<std::size_t>& samples, int depth) {
        std::size_t n_true = 0;
        for (auto i : samples) n_true += data.y[i];
        std::size_t n_false = samples.size() - n_true;

        int node_idx = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[node_idx].count_false = n_false;
        tree.nodes[node_idx].count_true = n_true;

        bool pure = (n_true == 0 || n_false == 0);
        bool depth_capped = cfg.max_depth > 0 && depth >= cfg.max_depth;
        if (pure || depth_capped ||
            samples.size() < static_cast<std::size_t>(cfg.min_samples_split))
            return node_idx;

        // sample mtry candidate features without replacement
        std::vector<std::size_t> feats(n_features);
        std::iota(feats.begin(), feats.end(), 0);
        for (std::size_t i = 0; i < mtry; ++i) {
            std::size_t j = i + rng() % (feats.size() - i);
            std::swap(feats[i], feats[j]);
        }
        feats.resize(mtry);
        std::sort(feats.begin(), feats.end());  // deterministic evaluation order

        double parent_impurity = gini(n_false, n_true);
        double best_decrease = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;

        for (auto f : feats) {
            std::vector<std::pair<double, bool>> vals;
            vals.reserve(samples.size());
            for (auto i : samples) vals.emplace_back(data.x[i][f], data.y[i]);
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::size_t left_true = 0, left_n = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left_true += vals[i].second;
                ++left_n;
                if (vals[i].first == vals[i + 1].first) continue;
                double thr = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                std::size_t right_n = vals.size() - left_n;
                std::size_t right_true = n_true - left_true;
                double wl = static_cast<double>(left_n) / static_cast<double>(vals.size());
                double wr = static_cast<double>(right_n) / static_cast<double>(vals.size());
                double child = wl * gini(left_n - left_true, left_true) +
                               wr * gini(right_n - right_true, right_true);
                double decrease = parent_impurity - child;
                if (decrease > best_decrease + 1e-15) {
                    best_decrease = decrease;
                    best_feature = static_cast<int>(f);
                    best_threshold = thr;
                }
            }
        }

        if (best_feature < 0) return node_idx;  // no informative split among candidates

        std::vector<std::size_t> left_samples, right_samples;
        for (auto i : samples)
            (data.x[i][best_feature] <= best_threshold ? left_samples : right_samples).push_back(i);

        importance_accum[best_feature] +=
            static_cast<double>(samples.size()) / static_cast<double>(total_samples) *
            best_decrease;

        tree.nodes[node_idx].feature = best_feature;
        tree.nodes[node_idx].threshold = best_threshold;
        int left = build(left_samples, depth + 1);
        tree.nodes[node_idx].left = left;
        int right = build(right_samples, depth + 1);
        tree.nodes[node_idx].right = right;
        return node_idx;
    }
};

}  // namespace detail

/// Random forest of bootstrap-sampled Gini CART trees; per-tree RNG is
/// derived from the master seed so training is deterministic.
inline TrainedModel train_random_forest(const FeatureMatrix& m, const ForestConfig& cfg = {}) {
    detail::require_both_classes(m);
    TrainedModel model;
    model.kind = ClassifierKind::random_forest;
    model.columns = m.columns();
    model.standardization = fit_standardizer(m);
    model.training_config = {{"n_trees", cfg.n_trees},
                             {"max_depth", cfg.max_depth},
                             {"min_samples_split", cfg.min_samples_split},
                             {"seed", cfg.seed}};
    auto d = detail::standardized_dataset(m, model.standardization);
    const std::size_t n = d.x.size();
    const std::size_t k = model.columns.size();
    const std::size_t mtry =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(
                                     static_cast<double>(k)))));

    std::vector<double> importance(k, 0.0);
    for (int t = 0; t < cfg.n_trees; ++t) {
        std::mt19937 rng(cfg.seed + static_cast<std::uint32_t>(t) * 0x9e3779b9u);
        std::vector<std::size_t> samples(n);
        for (auto& s : samples) s = rng() % n;  // bootstrap with replacement
        std::sort(samples.begin(), samples.end());
        detail::TreeBuilder builder{d, cfg, rng, k, mtry, {}, importance, n};
        builder.build(samples, 0);
        model.trees.push_back(std::move(builder.tree));
    }
    // stash the raw per-feature accumulations for feature_importance
    model.training_config["importance_accum"] = importance;
    return model;
}

struct ImportanceRanking {
    std::vector<std::pair<std::string, double>> entries;  // nonincreasing weight, sums to 1
};

/// Mean decrease in Gini impurity per feature, averaged over trees and
/// normalized to sum 1. All-leaf forests fall back to uniform weights.
inline ImportanceRanking feature_importance(const TrainedModel& model) {
    if (model.kind != ClassifierKind::random_forest)
        throw DataError("feature_importance requires a random forest model");
    auto accum = model.training_config.at("importance_accum").get<std::vector<double>>();
    double total = std::accumulate(accum.begin(), accum.end(), 0.0);
    ImportanceRanking out;
    for (std::size_t j = 0; j < model.columns.size(); ++j) {
        double w = total > 0.0 ? accum[j] / total : 1.0 / static_cast<double>(accum.size());
        out.entries.emplace_back(model.columns[j], w);
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

struct Prediction {
    double probability = 0.0;
    bool label = false;
};

inline std::vector<Prediction> predict(const TrainedModel& model, const FeatureMatrix& m) {
    if (m.columns() != model.columns) {
        std::string msg = "feature columns do not match the trained model; expected [";
        for (const auto& c : model.columns) msg += c + " ";
        msg += "] got [";
        for (const auto& c : m.columns()) msg += c + " ";
        msg += "]";
        throw DataError(msg);
    }
    std::vector<Prediction> out;
    out.reserve(m.rows.size());
    for (const auto& r : m.rows) {
        auto x = apply_standardizer(model.standardization, r.values);
        Prediction p;
        if (model.kind == ClassifierKind::random_forest) {
            std::size_t votes = 0;
            for (const auto& t : model.trees) votes += t.vote(x);
            p.probability = static_cast<double>(votes) / static_cast<double>(model.trees.size());
        } else {
            // linear models score via the logistic link on the margin
            p.probability = detail::sigmoid(detail::dot(model.weights, x) + model.bias);
        }
        p.label = p.probability >= model.decision_threshold;
        out.push_back(p);
    }
    return out;
}

inline std::vector<bool> predict_labels(const TrainedModel& model, const FeatureMatrix& m) {
    std::vector<bool> out;
    for (const auto& p : predict(model, m)) out.push_back(p.label);
    return out;
}

// --- model (de)serialization ---

namespace detail {

inline nlohmann::json tree_to_json(const DecisionTree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"leaf_class_counts", {n.count_false, n.count_true}}});
    return nodes;
}

inline DecisionTree tree_from_json(const nlohmann::json& j) {
    DecisionTree t;
    for (const auto& n : j) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.count_false = n.at("leaf_class_counts")[0].get<std::size_t>();
        node.count_true = n.at("leaf_class_counts")[1].get<std::size_t>();
        t.nodes.push_back(node);
    }
    return t;
}

}  // namespace detail

inline nlohmann::json model_to_json(const TrainedModel& m) {
    nlohmann::json j{{"kind", classifier_kind_name(m.kind)},
                     {"columns", m.columns},
                     {"decision_threshold", m.decision_threshold},
                     {"standardization", {{"mean", m.standardization.mean},
                                          {"stddev", m.standardization.stddev}}},
                     {"training_config", m.training_config}};
    if (m.kind == ClassifierKind::random_forest) {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& t : m.trees) trees.push_back(detail::tree_to_json(t));
        j["trees"] = trees;
    } else {
        j["weights"] = m.weights;
        j["bias"] = m.bias;
    }
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    TrainedModel m;
    m.kind = parse_classifier_kind(j.at("kind").get<std::string>());
    m.columns = j.at("columns").get<std::vector<std::string>>();
    m.decision_threshold = j.at("decision_threshold").get<double>();
    m.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    m.standardization.stddev = j.at("standardization").at("stddev").get<std::vector<double>>();
    m.training_config = j.at("training_config");
    if (m.kind == ClassifierKind::random_forest) {
        for (const auto& t : j.at("trees")) m.trees.push_back(detail::tree_from_json(t));
    } else {
        m.weights = j.at("weights").get<std::vector<double>>();
        m.bias = j.at("bias").get<double>();
    }
    return m;
}

}  // namespace churn

#endif  // CHURN_CLASSIFIER_HPP
