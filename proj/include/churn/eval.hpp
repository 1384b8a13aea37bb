#ifndef CHURN_EVAL_HPP
#define CHURN_EVAL_HPP

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "churn/classifier.hpp"
#include "churn/confusion.hpp"
#include "churn/features.hpp"
#include "churn/ingest.hpp"
#include "churn/stm.hpp"

namespace churn {

struct EvalReport {
    std::string train_start;
    int train_window_days = 0;
    int horizon_months = 0;
    std::string variant;
    std::string method;
    Confusion confusion;
    MetricValues metrics;
    bool empty_window = false;
};

inline void save_reports(const std::vector<EvalReport>& reports, std::ostream& os) {
    os << "train_start,train_window_days,horizon_months,variant,method,"
          "tp,fp,fn,tn,precision,recall,accuracy,f1,flag\n";
    for (const auto& r : reports) {
        os << r.train_start << ',' << r.train_window_days << ',' << r.horizon_months << ','
           << r.variant << ',' << r.method << ',' << r.confusion.tp << ',' << r.confusion.fp
           << ',' << r.confusion.fn << ',' << r.confusion.tn << ','
           << csv::format_double(r.metrics.precision) << ',' << csv::format_double(r.metrics.recall)
           << ',' << csv::format_double(r.metrics.accuracy) << ',' << csv::format_double(r.metrics.f1)
           << ',' << (r.empty_window ? "empty_window" : (r.metrics.degenerate ? "degenerate" : ""))
           << '\n';
    }
}

inline void save_reports(const std::vector<EvalReport>& reports, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    save_reports(reports, os);
}

// --- stratified k-fold cross-validation ---

struct KFoldResult {
    std::vector<MetricValues> folds;
    MetricValues mean;
};

/// A predictor is whatever a fold trainer returns: labels for a test
/// matrix with the training-time columns.
using FoldPredictor = std::function<std::vector<bool>(const FeatureMatrix&)>;
using FoldTrainer = std::function<FoldPredictor(const FeatureMatrix&)>;

/// Stratified k-fold CV: each fold receives the same per-class
/// proportions (round-robin after a seeded shuffle). Folds partition
/// the rows; train and test never overlap.
inline KFoldResult kfold_cv(const FeatureMatrix& m, int k, const FoldTrainer& trainer,
                            std::uint32_t seed = 42) {
    if (k < 2) throw DataError("kfold_cv requires k >= 2");
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        (m.rows[i].leave_label ? pos_idx : neg_idx).push_back(i);
    if (pos_idx.size() < static_cast<std::size_t>(k) ||
        neg_idx.size() < static_cast<std::size_t>(k))
        throw DataError("kfold_cv: a class has fewer rows than k, cannot stratify");

    std::mt19937 rng(seed);
    auto shuffle = [&rng](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
    };
    shuffle(pos_idx);
    shuffle(neg_idx);

    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < pos_idx.size(); ++i) folds[i % k].push_back(pos_idx[i]);
    for (std::size_t i = 0; i < neg_idx.size(); ++i) folds[i % k].push_back(neg_idx[i]);

    KFoldResult res;
    for (int f = 0; f < k; ++f) {
        FeatureMatrix train, test;
        train.network_columns = test.network_columns = m.network_columns;
        train.exogenous_columns = test.exogenous_columns = m.exogenous_columns;
        std::vector<bool> in_test(m.rows.size(), false);
        for (auto i : folds[f]) in_test[i] = true;
        for (std::size_t i = 0; i < m.rows.size(); ++i)
            (in_test[i] ? test : train).rows.push_back(m.rows[i]);
        auto predictor = trainer(train);
        auto predicted = predictor(test);
        res.folds.push_back(compute_metrics(confusion_from_labels(predicted, test.labels())));
    }
    for (const auto& f : res.folds) {
        res.mean.precision += f.precision / k;
        res.mean.recall += f.recall / k;
        res.mean.accuracy += f.accuracy / k;
        res.mean.f1 += f.f1 / k;
        res.mean.degenerate = res.mean.degenerate || f.degenerate;
    }
    return res;
}

// --- prediction methods (STM on one attribute, or a classifier) ---

struct Method {
    bool is_stm = false;
    std::string stm_attribute;
    Metric stm_metric = Metric::F1;
    ClassifierKind kind = ClassifierKind::logreg;

    std::string name() const {
        return is_stm ? "stm:" + stm_attribute : classifier_kind_name(kind);
    }
};

/// "stm:<attribute>" | "logreg" | "svm" | "forest"
inline Method parse_method(const std::string& s) {
    Method m;
    if (s.rfind("stm:", 0) == 0) {
        m.is_stm = true;
        m.stm_attribute = s.substr(4);
        if (m.stm_attribute.empty()) throw DataError("stm method needs an attribute name");
    } else {
        m.kind = parse_classifier_kind(s);
    }
    return m;
}

struct FittedMethod {
    Method method;
    StmModel stm;
    TrainedModel model;

    std::vector<bool> predict(const FeatureMatrix& m) const {
        if (method.is_stm) {
            int col = m.column_index(method.stm_attribute);
            if (col < 0) throw DataError("feature matrix lacks attribute: " + method.stm_attribute);
            return stm_predict(stm, m.column_values(static_cast<std::size_t>(col)));
        }
        return predict_labels(model, m);
    }
};

inline FittedMethod fit_method(const Method& method, const FeatureMatrix& m,
                               std::uint32_t seed = 42) {
    FittedMethod fm;
    fm.method = method;
    if (method.is_stm) {
        int col = m.column_index(method.stm_attribute);
        if (col < 0) throw DataError("feature matrix lacks attribute: " + method.stm_attribute);
        fm.stm = stm_fit(m.column_values(static_cast<std::size_t>(col)), m.labels(),
                         method.stm_metric, method.stm_attribute);
        return fm;
    }
    switch (method.kind) {
        case ClassifierKind::logreg: {
            LogRegConfig cfg;
            cfg.seed = seed;
            fm.model = train_logreg(m, cfg);
            break;
        }
        case ClassifierKind::linear_svm: {
            SvmConfig cfg;
            cfg.seed = seed;
            fm.model = train_linear_svm(m, cfg);
            break;
        }
        default: {
            ForestConfig cfg;
            cfg.seed = seed;
            fm.model = train_random_forest(m, cfg);
            break;
        }
    }
    return fm;
}

// --- experiment protocols ---

/// Horizon offsets are whole months counted as 30 days from the
/// training window start.
constexpr Timestamp kSecondsPerMonth = 30 * kSecondsPerDay;

struct ExperimentPlan {
    Timestamp train_start = 0;  // t
    Timestamp t1_start = 0;     // t1, labels the training matrix
    int window_days = 45;       // delta
    std::vector<int> horizons_months;
    std::vector<VariantKind> variants{VariantKind::All};
    Method method;
    std::uint32_t seed = 42;
    MinCutOptions mincut;

    void validate() const {
        if (t1_start <= train_start) throw DataError("t1 must start after the training window start");
        if (window_days < 1) throw DataError("window_days must be >= 1");
        Timestamp train_end = t1_start + static_cast<Timestamp>(window_days) * kSecondsPerDay;
        int prev = 0;
        for (int h : horizons_months) {
            if (h <= prev && prev != 0) throw DataError("horizons must be strictly increasing");
            prev = h;
            if (train_start + h * kSecondsPerMonth <= t1_start)
                throw DataError("every horizon must start strictly after t1");
            (void)train_end;
        }
    }
};

namespace detail {

/// Ranking used by Best* variants: random-forest importance on the
/// full training matrix, deterministic given the plan seed.
inline std::vector<std::string> importance_ranking(const FeatureMatrix& m, std::uint32_t seed) {
    ForestConfig cfg;
    cfg.seed = seed;
    auto forest = train_random_forest(m, cfg);
    auto ranking = feature_importance(forest);
    std::vector<std::string> names;
    for (const auto& [name, w] : ranking.entries) names.push_back(name);
    return names;
}

inline std::vector<bool> horizon_labels(const FeatureMatrix& m, const LeaveLabeling& lab) {
    std::vector<bool> out;
    out.reserve(m.rows.size());
    for (const auto& r : m.rows) out.push_back(lab.departed.count(r.node_id) != 0);
    return out;
}

}  // namespace detail

/// Fits the plan's method on (G_t, G_t1) and evaluates leave
/// predictions over the initial nodes at every (horizon, variant).
inline std::vector<EvalReport> run_horizon_experiment(
    const std::vector<InteractionEvent>& events,
    const std::map<std::string, MemberAttributes>& attrs, const ExperimentPlan& plan) {
    plan.validate();
    Snapshot snap_t = build_snapshot(events, plan.train_start, plan.window_days, "t");
    Snapshot snap_t1 = build_snapshot(events, plan.t1_start, plan.window_days, "t1");
    auto labeling = label_leaves(snap_t, snap_t1);
    auto assembled = assemble(snap_t, labeling, attrs, plan.mincut);
    const FeatureMatrix& full = assembled.matrix;

    bool needs_ranking = false;
    for (auto v : plan.variants) needs_ranking = needs_ranking || v != VariantKind::All;
    std::vector<std::string> ranking;
    if (needs_ranking) ranking = detail::importance_ranking(full, plan.seed);

    std::vector<EvalReport> reports;
    for (auto variant : plan.variants) {
        VariantSpec spec{variant, ranking};
        FeatureMatrix mv = select_variant(full, spec);
        FittedMethod fitted = fit_method(plan.method, mv, plan.seed);
        auto predicted = fitted.predict(mv);

        for (int h : plan.horizons_months) {
            EvalReport r;
            r.train_start = format_timestamp(plan.train_start);
            r.train_window_days = plan.window_days;
            r.horizon_months = h;
            r.variant = variant_name(variant);
            r.method = plan.method.name();
            Snapshot snap_h = build_snapshot(events, plan.train_start + h * kSecondsPerMonth,
                                             plan.window_days, "t+" + std::to_string(h) + "m");
            if (snap_h.graph.node_count() == 0) {
                r.empty_window = true;
                reports.push_back(r);
                continue;
            }
            auto lab_h = label_leaves(snap_t, snap_h);
            auto actual = detail::horizon_labels(mv, lab_h);
            r.confusion = confusion_from_labels(predicted, actual);
            r.metrics = compute_metrics(r.confusion);
            reports.push_back(r);
        }
    }
    return reports;
}

/// Cross-dataset protocol at the library level: fit on corpus A, evaluate on
/// corpus B. Standardization (and every other fitted parameter) comes
/// from A; B's labels are never read during fitting.
inline std::vector<EvalReport> run_cross_dataset(
    const std::vector<InteractionEvent>& train_events,
    const std::map<std::string, MemberAttributes>& train_attrs, const ExperimentPlan& train_plan,
    const std::vector<InteractionEvent>& test_events,
    const std::map<std::string, MemberAttributes>& test_attrs, const ExperimentPlan& test_plan) {
    train_plan.validate();
    test_plan.validate();

    Snapshot a_t = build_snapshot(train_events, train_plan.train_start, train_plan.window_days, "A:t");
    Snapshot a_t1 = build_snapshot(train_events, train_plan.t1_start, train_plan.window_days, "A:t1");
    auto a_lab = label_leaves(a_t, a_t1);
    FeatureMatrix a_full = assemble(a_t, a_lab, train_attrs, train_plan.mincut).matrix;

    Snapshot b_t = build_snapshot(test_events, test_plan.train_start, test_plan.window_days, "B:t");
    Snapshot b_t1 = build_snapshot(test_events, test_plan.t1_start, test_plan.window_days, "B:t1");
    auto b_lab = label_leaves(b_t, b_t1);
    FeatureMatrix b_full = assemble(b_t, b_lab, test_attrs, test_plan.mincut).matrix;

    if (a_full.columns() != b_full.columns())
        throw DataError("train and test corpora have mismatching feature schemas");

    bool needs_ranking = false;
    for (auto v : train_plan.variants) needs_ranking = needs_ranking || v != VariantKind::All;
    std::vector<std::string> ranking;
    if (needs_ranking) ranking = detail::importance_ranking(a_full, train_plan.seed);

    std::vector<EvalReport> reports;
    for (auto variant : train_plan.variants) {
        VariantSpec spec{variant, ranking};
        FeatureMatrix a_v = select_variant(a_full, spec);
        FeatureMatrix b_v = select_variant(b_full, spec);
        FittedMethod fitted = fit_method(train_plan.method, a_v, train_plan.seed);
        auto predicted = fitted.predict(b_v);

        for (int h : test_plan.horizons_months) {
            EvalReport r;
            r.train_start = format_timestamp(train_plan.train_start);
            r.train_window_days = train_plan.window_days;
            r.horizon_months = h;
            r.variant = variant_name(variant);
            r.method = std::string("cross:") + train_plan.method.name();
            Snapshot snap_h = build_snapshot(test_events, test_plan.train_start + h * kSecondsPerMonth,
                                             test_plan.window_days, "B:t+" + std::to_string(h) + "m");
            if (snap_h.graph.node_count() == 0) {
                r.empty_window = true;
                reports.push_back(r);
                continue;
            }
            auto lab_h = label_leaves(b_t, snap_h);
            auto actual = detail::horizon_labels(b_v, lab_h);
            r.confusion = confusion_from_labels(predicted, actual);
            r.metrics = compute_metrics(r.confusion);
            reports.push_back(r);
        }
    }
    return reports;
}

}  // namespace churn

#endif  // CHURN_EVAL_HPP
