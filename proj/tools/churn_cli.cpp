// churn-tool: command-line pipeline for community inactivity prediction.
//
// Subcommands: synth, snapshot, features, fit, predict, evaluate,
// importance, correlate, cdf. Exit codes: 0 success, 1 data/validation
// error, 2 missing artifact.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "churn/churn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class MissingArtifact : public std::runtime_error {
public:
    explicit MissingArtifact(const std::string& path)
        : std::runtime_error("missing artifact: " + path) {}
};

void require_file(const std::string& path) {
    if (!fs::exists(path)) throw MissingArtifact(path);
}

/// Expand `--config file.json` into ordinary flags before parsing. Keys in
/// the JSON object are long option names without the leading dashes; flags
/// given explicitly on the command line win over config values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    require_file(path);
    std::ifstream is(path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw churn::DataError("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw churn::DataError("config file " + path + ": expected a JSON object");

    auto given = [&args](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    auto scalar = [](const json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    for (auto& [key, value] : j.items()) {
        std::string flag = "--" + key;
        if (given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                if (!joined.empty()) joined += ',';
                joined += scalar(v);
            }
            args.push_back(flag + "=" + joined);
        } else {
            args.push_back(flag + "=" + scalar(value));
        }
    }
    return args;
}

churn::Timestamp parse_ts_flag(const std::string& s, const std::string& flag) {
    try {
        return churn::parse_timestamp(s);
    } catch (const std::exception&) {
        throw churn::DataError(flag + ": unparseable timestamp '" + s + "'");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw churn::DataError("cannot open for writing: " + path);
    return os;
}

// model files carry a type tag so predict can dispatch
json load_model_json(const std::string& path) {
    require_file(path);
    std::ifstream is(path);
    return json::parse(is);
}

struct EvaluateArgs {
    std::string events, attributes, out = "report.csv";
    std::string train_start, t1_start;
    int window_days = 45;
    std::vector<int> horizons;
    std::string method = "stm:degree";
    std::vector<std::string> variants{"all"};
    unsigned seed = 42;
    std::size_t mincut_sample_threshold = 2000;
    std::size_t mincut_sample_size = 200;
    // cross-dataset test corpus (optional)
    std::string cross_events, cross_attributes;
    std::string cross_train_start, cross_t1_start;
    // staged mode
    std::string predictions, labeled_features;
};

churn::ExperimentPlan plan_from_args(const EvaluateArgs& a) {
    churn::ExperimentPlan plan;
    plan.train_start = parse_ts_flag(a.train_start, "--train-start");
    plan.t1_start = parse_ts_flag(a.t1_start, "--t1-start");
    plan.window_days = a.window_days;
    plan.horizons_months = a.horizons;
    plan.variants.clear();
    for (const auto& v : a.variants) plan.variants.push_back(churn::parse_variant(v));
    plan.method = churn::parse_method(a.method);
    plan.seed = a.seed;
    plan.mincut.sample_threshold = a.mincut_sample_threshold;
    plan.mincut.sample_size = a.mincut_sample_size;
    plan.mincut.seed = a.seed;
    return plan;
}

int run(int argc, char** argv) {
    CLI::App app{"Online-community inactivity prediction pipeline"};
    app.require_subcommand(1);

    // the flag is consumed by expand_config before parsing; the option
    // exists so it appears in the subcommand help text
    static std::string config_path_for_help;
    auto add_config = [](CLI::App* cmd) {
        cmd->add_option("--config", config_path_for_help,
                        "JSON config file whose keys are long option names");
    };

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a synthetic community corpus");
    add_config(synth);
    churn::SyntheticSpec spec;
    std::string synth_out = ".";
    std::string synth_start = "2020-01-01";
    bool depart_above = false;
    synth->add_option("--out-dir", synth_out, "Output directory");
    synth->add_option("--nodes", spec.node_count, "Member count");
    synth->add_option("--density", spec.edge_density, "Edge probability");
    synth->add_option("--attribute", spec.planted_attribute, "Planted departure attribute");
    synth->add_option("--threshold", spec.threshold, "Departure rule threshold");
    synth->add_flag("--depart-above", depart_above, "Depart when value >= threshold");
    synth->add_option("--noise", spec.noise_rate, "Label flip probability in [0, 0.5)");
    synth->add_option("--months", spec.months, "Monthly activity steps");
    synth->add_option("--start", synth_start, "First month start (ISO-8601)");
    synth->add_option("--seed", spec.seed, "RNG seed");
    synth->callback([&]() {
        spec.start = parse_ts_flag(synth_start, "--start");
        spec.depart_below = !depart_above;
        auto corpus = churn::generate_synthetic(spec);
        fs::create_directories(synth_out);
        {
            auto os = open_out(synth_out + "/events.csv");
            churn::save_events(corpus.events, os);
        }
        {
            auto os = open_out(synth_out + "/attributes.csv");
            churn::save_attributes(corpus.attributes, os);
        }
        {
            auto os = open_out(synth_out + "/ground_truth.csv");
            churn::save_ground_truth(corpus, os);
        }
        std::size_t departed = 0;
        for (const auto& [id, d] : corpus.departed) departed += d;
        std::cout << "synth: " << corpus.departed.size() << " active members, " << departed
                  << " departures, " << corpus.events.size() << " events -> " << synth_out
                  << "\n";
    });

    // --- snapshot ---
    auto* snapshot = app.add_subcommand("snapshot", "Build windowed network snapshots");
    add_config(snapshot);
    struct {
        std::string events, out_dir = ".";
        std::string train_start, t1_start;
        int window_days = 45;
        std::vector<int> horizons;
    } snap_args;
    snapshot->add_option("--events", snap_args.events, "Events CSV")->required();
    snapshot->add_option("--train-start", snap_args.train_start, "t (ISO-8601)")->required();
    snapshot->add_option("--t1-start", snap_args.t1_start, "t1 (ISO-8601)")->required();
    snapshot->add_option("--window-days", snap_args.window_days, "Window length in days");
    snapshot->add_option("--horizons", snap_args.horizons, "Horizon month offsets")
        ->delimiter(',');
    snapshot->add_option("--out-dir", snap_args.out_dir, "Output directory");
    snapshot->callback([&]() {
        if (snap_args.window_days < 1) throw churn::DataError("--window-days must be >= 1");
        require_file(snap_args.events);
        auto parsed = churn::parse_events_file(snap_args.events);
        if (parsed.self_loop_rows_dropped > 0)
            std::cerr << "warning: dropped " << parsed.self_loop_rows_dropped
                      << " self-interaction rows\n";
        if (parsed.events.empty()) std::cerr << "warning: no usable events; snapshots are empty\n";
        fs::create_directories(snap_args.out_dir);
        auto emit = [&](const churn::Snapshot& s, const std::string& name) {
            churn::save_snapshot(s, snap_args.out_dir + "/" + name);
            std::cout << name << ": " << s.graph.node_count() << " nodes, "
                      << s.graph.edge_count() << " edges\n";
        };
        churn::Timestamp t = parse_ts_flag(snap_args.train_start, "--train-start");
        churn::Timestamp t1 = parse_ts_flag(snap_args.t1_start, "--t1-start");
        emit(churn::build_snapshot(parsed.events, t, snap_args.window_days, "t"), "snapshot_t");
        emit(churn::build_snapshot(parsed.events, t1, snap_args.window_days, "t1"), "snapshot_t1");
        for (int h : snap_args.horizons)
            emit(churn::build_snapshot(parsed.events, t + h * churn::kSecondsPerMonth,
                                       snap_args.window_days, "t+" + std::to_string(h) + "m"),
                 "horizon_" + std::to_string(h));
    });

    // --- features ---
    auto* features = app.add_subcommand("features", "Assemble the labeled feature matrix");
    add_config(features);
    struct {
        std::string snapshot_t, snapshot_future, attributes, out = "features.csv";
        std::size_t mincut_sample_threshold = 2000;
        std::size_t mincut_sample_size = 200;
        unsigned seed = 42;
    } feat_args;
    features->add_option("--snapshot-t", feat_args.snapshot_t, "Training snapshot prefix")
        ->required();
    features
        ->add_option("--snapshot-future", feat_args.snapshot_future,
                     "Later snapshot prefix providing leave labels")
        ->required();
    features->add_option("--attributes", feat_args.attributes, "Member attributes CSV")
        ->required();
    features->add_option("--out", feat_args.out, "Output feature matrix CSV");
    features->add_option("--mincut-sample-threshold", feat_args.mincut_sample_threshold,
                         "Node count above which avg_min_cut samples counterparts");
    features->add_option("--mincut-sample-size", feat_args.mincut_sample_size,
                         "Counterpart sample size when sampling");
    features->add_option("--seed", feat_args.seed, "RNG seed");
    features->callback([&]() {
        require_file(feat_args.snapshot_t + ".edges");
        require_file(feat_args.snapshot_t + ".json");
        require_file(feat_args.snapshot_future + ".edges");
        require_file(feat_args.attributes);
        auto snap_t = churn::load_snapshot(feat_args.snapshot_t);
        auto snap_f = churn::load_snapshot(feat_args.snapshot_future);
        auto attrs = churn::parse_attributes_file(feat_args.attributes);
        auto labeling = churn::label_leaves(snap_t, snap_f);
        churn::MinCutOptions mc{feat_args.mincut_sample_threshold, feat_args.mincut_sample_size,
                                feat_args.seed};
        auto res = churn::assemble(snap_t, labeling, attrs, mc);
        if (res.members_missing_attributes > 0)
            std::cerr << "warning: " << res.members_missing_attributes
                      << " members missing from the attributes table; exogenous features set to 0\n";
        churn::save_feature_matrix(res.matrix, feat_args.out);
        std::cout << "features: " << res.matrix.rows.size() << " rows, "
                  << res.matrix.column_count() << " columns -> " << feat_args.out << "\n";
    });

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "Fit an STM or classifier on a feature matrix");
    add_config(fit);
    struct {
        std::string features, method = "stm:degree", out = "model.json", metric = "f1";
        unsigned seed = 42;
    } fit_args;
    fit->add_option("--features", fit_args.features, "Labeled feature matrix CSV")->required();
    fit->add_option("--method", fit_args.method, "stm:<attribute> | logreg | svm | forest");
    fit->add_option("--metric", fit_args.metric, "STM fitting metric: f1|accuracy|precision|recall");
    fit->add_option("--seed", fit_args.seed, "RNG seed");
    fit->add_option("--out", fit_args.out, "Output model JSON");
    fit->callback([&]() {
        require_file(fit_args.features);
        auto m = churn::load_feature_matrix_file(fit_args.features);
        auto method = churn::parse_method(fit_args.method);
        method.stm_metric = churn::parse_metric(fit_args.metric);
        auto fitted = churn::fit_method(method, m, fit_args.seed);
        json out;
        if (method.is_stm) {
            out = {{"type", "stm"}, {"model", churn::stm_to_json(fitted.stm)}};
            if (fitted.stm.degenerate)
                std::cerr << "warning: fitted lambda sits at the minimum attribute value; "
                             "the threshold carries no information\n";
            std::cout << "fit " << method.name() << ": lambda=" << fitted.stm.lambda
                      << " orientation=" << churn::orientation_name(fitted.stm.orientation)
                      << " training_" << churn::metric_name(fitted.stm.metric) << "="
                      << fitted.stm.training_score << "\n";
        } else {
            out = {{"type", "classifier"}, {"model", churn::model_to_json(fitted.model)}};
            auto train_pred = fitted.predict(m);
            auto mv = churn::compute_metrics(churn::confusion_from_labels(train_pred, m.labels()));
            std::cout << "fit " << method.name() << ": training f1=" << mv.f1
                      << " accuracy=" << mv.accuracy << "\n";
        }
        auto os = open_out(fit_args.out);
        os << out.dump(2) << '\n';
    });

    // --- predict ---
    auto* predict = app.add_subcommand("predict", "Predict leave labels with a fitted model");
    add_config(predict);
    struct {
        std::string model, features, out = "predictions.csv";
    } pred_args;
    predict->add_option("--model", pred_args.model, "Model JSON from fit")->required();
    predict->add_option("--features", pred_args.features, "Feature matrix CSV")->required();
    predict->add_option("--out", pred_args.out, "Output predictions CSV");
    predict->callback([&]() {
        require_file(pred_args.features);
        auto m = churn::load_feature_matrix_file(pred_args.features);
        json mj = load_model_json(pred_args.model);
        auto os = open_out(pred_args.out);
        os << "node_id,probability,label\n";
        if (mj.at("type") == "stm") {
            auto stm = churn::stm_from_json(mj.at("model"));
            int col = m.column_index(stm.attribute);
            if (col < 0) throw churn::DataError("feature matrix lacks attribute: " + stm.attribute);
            auto labels = churn::stm_predict(stm, m.column_values(col));
            for (std::size_t i = 0; i < m.rows.size(); ++i)
                os << m.rows[i].node_id << ',' << (labels[i] ? 1 : 0) << ','
                   << (labels[i] ? "true" : "false") << '\n';
        } else {
            auto model = churn::model_from_json(mj.at("model"));
            auto preds = churn::predict(model, m);
            for (std::size_t i = 0; i < m.rows.size(); ++i)
                os << m.rows[i].node_id << ',' << churn::csv::format_double(preds[i].probability)
                   << ',' << (preds[i].label ? "true" : "false") << '\n';
        }
        std::cout << "predict: " << m.rows.size() << " rows -> " << pred_args.out << "\n";
    });

    // --- evaluate ---
    auto* evaluate = app.add_subcommand(
        "evaluate", "Run the horizon experiment (or score staged predictions)");
    add_config(evaluate);
    EvaluateArgs ev;
    evaluate->add_option("--events", ev.events, "Events CSV");
    evaluate->add_option("--attributes", ev.attributes, "Member attributes CSV");
    evaluate->add_option("--train-start", ev.train_start, "t (ISO-8601)");
    evaluate->add_option("--t1-start", ev.t1_start, "t1 (ISO-8601)");
    evaluate->add_option("--window-days", ev.window_days, "Window length in days");
    evaluate->add_option("--horizons", ev.horizons, "Horizon month offsets")->delimiter(',');
    evaluate->add_option("--method", ev.method, "stm:<attribute> | logreg | svm | forest");
    evaluate->add_option("--variants", ev.variants, "all|best4|best2|best1")->delimiter(',');
    evaluate->add_option("--seed", ev.seed, "RNG seed");
    evaluate->add_option("--mincut-sample-threshold", ev.mincut_sample_threshold,
                         "avg_min_cut sampling threshold");
    evaluate->add_option("--mincut-sample-size", ev.mincut_sample_size, "avg_min_cut sample size");
    evaluate->add_option("--out", ev.out, "Output report CSV");
    evaluate->add_option("--cross-events", ev.cross_events,
                         "Test-corpus events CSV (cross-dataset protocol)");
    evaluate->add_option("--cross-attributes", ev.cross_attributes, "Test-corpus attributes CSV");
    evaluate->add_option("--cross-train-start", ev.cross_train_start, "Test-corpus t");
    evaluate->add_option("--cross-t1-start", ev.cross_t1_start, "Test-corpus t1");
    evaluate->add_option("--predictions", ev.predictions,
                         "Staged mode: predictions CSV from the predict stage");
    evaluate->add_option("--labeled-features", ev.labeled_features,
                         "Staged mode: feature matrix CSV carrying the evaluation labels");
    evaluate->callback([&]() {
        // staged mode: score an existing prediction file against labels
        if (!ev.predictions.empty() || !ev.labeled_features.empty()) {
            if (ev.predictions.empty() || ev.labeled_features.empty())
                throw churn::DataError(
                    "staged mode needs both --predictions and --labeled-features");
            require_file(ev.predictions);
            require_file(ev.labeled_features);
            auto m = churn::load_feature_matrix_file(ev.labeled_features);
            auto table = churn::csv::read_file(ev.predictions);
            int c_id = table.require_column("node_id");
            int c_label = table.require_column("label");
            std::map<std::string, bool> pred;
            for (const auto& row : table.rows) pred[row[c_id]] = (row[c_label] == "true");
            std::vector<bool> predicted, actual;
            for (const auto& r : m.rows) {
                auto it = pred.find(r.node_id);
                if (it == pred.end())
                    throw churn::DataError("predictions missing node: " + r.node_id);
                predicted.push_back(it->second);
                actual.push_back(r.leave_label);
            }
            churn::EvalReport r;
            r.train_start = ev.train_start;
            r.train_window_days = ev.window_days;
            r.horizon_months = ev.horizons.empty() ? 0 : ev.horizons.front();
            r.variant = ev.variants.empty() ? "all" : ev.variants.front();
            r.method = ev.method;
            r.confusion = churn::confusion_from_labels(predicted, actual);
            r.metrics = churn::compute_metrics(r.confusion);
            churn::save_reports({r}, ev.out);
            std::cout << "evaluate: f1=" << r.metrics.f1 << " accuracy=" << r.metrics.accuracy
                      << " -> " << ev.out << "\n";
            return;
        }

        for (const auto* flag : {&ev.events, &ev.attributes, &ev.train_start, &ev.t1_start})
            if (flag->empty())
                throw churn::DataError(
                    "evaluate needs --events, --attributes, --train-start and --t1-start");
        require_file(ev.events);
        require_file(ev.attributes);
        auto plan = plan_from_args(ev);
        auto parsed = churn::parse_events_file(ev.events);
        auto attrs = churn::parse_attributes_file(ev.attributes);

        std::vector<churn::EvalReport> reports;
        if (!ev.cross_events.empty()) {
            require_file(ev.cross_events);
            require_file(ev.cross_attributes);
            auto test_parsed = churn::parse_events_file(ev.cross_events);
            auto test_attrs = churn::parse_attributes_file(ev.cross_attributes);
            churn::ExperimentPlan test_plan = plan;
            test_plan.train_start = parse_ts_flag(
                ev.cross_train_start.empty() ? ev.train_start : ev.cross_train_start,
                "--cross-train-start");
            test_plan.t1_start = parse_ts_flag(
                ev.cross_t1_start.empty() ? ev.t1_start : ev.cross_t1_start, "--cross-t1-start");
            reports = churn::run_cross_dataset(parsed.events, attrs, plan, test_parsed.events,
                                               test_attrs, test_plan);
        } else {
            reports = churn::run_horizon_experiment(parsed.events, attrs, plan);
        }
        churn::save_reports(reports, ev.out);
        std::cout << "evaluate: " << reports.size() << " report rows -> " << ev.out << "\n";
    });

    // --- importance ---
    auto* importance = app.add_subcommand("importance", "Random-forest feature importance");
    add_config(importance);
    struct {
        std::string features, out = "importance.csv";
        unsigned seed = 42;
    } imp_args;
    importance->add_option("--features", imp_args.features, "Labeled feature matrix CSV")
        ->required();
    importance->add_option("--seed", imp_args.seed, "RNG seed");
    importance->add_option("--out", imp_args.out, "Output CSV (feature,weight)");
    importance->callback([&]() {
        require_file(imp_args.features);
        auto m = churn::load_feature_matrix_file(imp_args.features);
        churn::ForestConfig cfg;
        cfg.seed = imp_args.seed;
        auto forest = churn::train_random_forest(m, cfg);
        auto ranking = churn::feature_importance(forest);
        auto os = open_out(imp_args.out);
        os << "feature,weight\n";
        for (const auto& [name, w] : ranking.entries)
            os << name << ',' << churn::csv::format_double(w) << '\n';
        std::cout << "importance: top feature is " << ranking.entries.front().first << " ("
                  << ranking.entries.front().second << ") -> " << imp_args.out << "\n";
    });

    // --- correlate ---
    auto* correlate = app.add_subcommand("correlate", "Pearson correlation matrix of features");
    add_config(correlate);
    struct {
        std::string features, out = "correlation.csv";
    } corr_args;
    correlate->add_option("--features", corr_args.features, "Feature matrix CSV")->required();
    correlate->add_option("--out", corr_args.out, "Output correlation CSV");
    correlate->callback([&]() {
        require_file(corr_args.features);
        auto m = churn::load_feature_matrix_file(corr_args.features);
        auto pm = churn::pearson_matrix(m);
        for (std::size_t i = 0; i < pm.features.size(); ++i)
            if (pm.constant[i])
                std::cerr << "warning: feature '" << pm.features[i]
                          << "' is constant; its correlations are reported as 0\n";
        auto os = open_out(corr_args.out);
        churn::save_pearson_matrix(pm, os);
        std::cout << "correlate: " << pm.features.size() << " features -> " << corr_args.out
                  << "\n";
    });

    // --- cdf ---
    auto* cdf = app.add_subcommand("cdf", "Active-weeks CDF from member attributes");
    add_config(cdf);
    struct {
        std::string attributes, out = "cdf.csv";
    } cdf_args;
    cdf->add_option("--attributes", cdf_args.attributes, "Member attributes CSV")->required();
    cdf->add_option("--out", cdf_args.out, "Output CSV (weeks,cdf)");
    cdf->callback([&]() {
        require_file(cdf_args.attributes);
        auto attrs = churn::parse_attributes_file(cdf_args.attributes);
        auto points = churn::active_weeks_cdf(attrs);
        auto os = open_out(cdf_args.out);
        os << "weeks,cdf\n";
        for (const auto& [weeks, frac] : points)
            os << weeks << ',' << churn::csv::format_double(frac) << '\n';
        std::cout << "cdf: " << points.size() << " points -> " << cdf_args.out << "\n";
    });

    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const MissingArtifact& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
