#ifndef CHURN_STM_HPP
#define CHURN_STM_HPP

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "churn/confusion.hpp"
#include "churn/csv.hpp"

namespace churn {

/// Which side of the threshold predicts leaving. Boundary semantics:
/// leave_if_below predicts true for value < lambda; leave_if_at_or_above
/// for value >= lambda, so the two orientations partition outcomes.
enum class Orientation { leave_if_below, leave_if_at_or_above };

inline const char* orientation_name(Orientation o) {
    return o == Orientation::leave_if_below ? "leave_if_below" : "leave_if_at_or_above";
}

inline Orientation parse_orientation(const std::string& s) {
    if (s == "leave_if_below") return Orientation::leave_if_below;
    if (s == "leave_if_at_or_above") return Orientation::leave_if_at_or_above;
    throw DataError("unknown orientation: " + s);
}

/// One-attribute threshold model: leave is predicted by comparing the
/// attribute value against the fitted lambda.
struct StmModel {
    std::string attribute;
    double lambda = 0.0;
    Orientation orientation = Orientation::leave_if_below;
    Metric metric = Metric::F1;
    double training_score = 0.0;
    bool degenerate = false;  // lambda sits at the minimum attribute value
};

/// One scored threshold candidate during fitting.
struct StmCandidate {
    double lambda = 0.0;
    Orientation orientation = Orientation::leave_if_below;
    double score = 0.0;
};

/// Argmax over candidates with the deterministic tie-break: higher
/// score, then smaller lambda, then leave_if_below.
inline StmCandidate select_best_candidate(const std::vector<StmCandidate>& candidates) {
    if (candidates.empty()) throw DataError("no threshold candidates");
    const StmCandidate* best = &candidates.front();
    for (const auto& c : candidates) {
        if (c.score > best->score) {
            best = &c;
        } else if (c.score == best->score) {
            if (c.lambda < best->lambda ||
                (c.lambda == best->lambda && c.orientation == Orientation::leave_if_below &&
                 best->orientation != Orientation::leave_if_below))
                best = &c;
        }
    }
    return *best;
}

inline std::vector<bool> stm_predict(const StmModel& model, const std::vector<double>& values) {
    std::vector<bool> out;
    out.reserve(values.size());
    for (double v : values)
        out.push_back(model.orientation == Orientation::leave_if_below ? v < model.lambda
                                                                       : v >= model.lambda);
    return out;
}

/// Fits lambda over the distinct observed values, trying both
/// orientations, maximizing the chosen metric on the training labels.
/// Candidates scoring with a zero denominator count as 0.
inline StmModel stm_fit(const std::vector<double>& values, const std::vector<bool>& labels,
                        Metric metric, const std::string& attribute = "") {
    if (values.empty() || values.size() != labels.size())
        throw DataError("stm_fit: values and labels must be nonempty and equal length");

    // sort once; prefix counts give each candidate's confusion in O(1)
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const std::size_t n = values.size();
    std::size_t total_true = 0;
    for (bool b : labels) total_true += b;

    std::vector<StmCandidate> candidates;
    std::size_t i = 0;
    std::size_t below = 0, true_below = 0;  // counts of items with value < current lambda
    while (i < n) {
        double lambda = values[order[i]];
        // leave_if_below: predicted true <=> value < lambda
        {
            Confusion c;
            c.tp = true_below;
            c.fp = below - true_below;
            c.fn = total_true - true_below;
            c.tn = n - below - c.fn;
            candidates.push_back({lambda, Orientation::leave_if_below,
                                  compute_metrics(c).get(metric)});
        }
        // leave_if_at_or_above: predicted true <=> value >= lambda
        {
            Confusion c;
            c.tp = total_true - true_below;
            c.fp = (n - below) - c.tp;
            c.fn = true_below;
            c.tn = below - true_below;
            candidates.push_back({lambda, Orientation::leave_if_at_or_above,
                                  compute_metrics(c).get(metric)});
        }
        while (i < n && values[order[i]] == lambda) {
            if (labels[order[i]]) ++true_below;
            ++below;
            ++i;
        }
    }

    StmCandidate best = select_best_candidate(candidates);
    StmModel model;
    model.attribute = attribute;
    model.lambda = best.lambda;
    model.orientation = best.orientation;
    model.metric = metric;
    model.training_score = best.score;
    model.degenerate = (best.lambda == values[order[0]]);
    return model;
}

/// For a binary attribute no threshold is needed: the attribute itself
/// is the prediction. Both polarities are tried; the better one wins.
struct BinaryAttributeResult {
    double score = 0.0;
    bool flipped = false;  // true when the negated attribute scored better
};

inline BinaryAttributeResult evaluate_binary_attribute(const std::vector<bool>& values,
                                                       const std::vector<bool>& labels,
                                                       Metric metric) {
    if (values.empty() || values.size() != labels.size())
        throw DataError("evaluate_binary_attribute: nonempty equal-length inputs required");
    double direct = score_predictions(values, labels, metric);
    std::vector<bool> negated(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) negated[i] = !values[i];
    double flipped = score_predictions(negated, labels, metric);
    if (flipped > direct) return {flipped, true};
    return {direct, false};
}

inline nlohmann::json stm_to_json(const StmModel& m) {
    return nlohmann::json{{"attribute", m.attribute},
                          {"lambda", m.lambda},
                          {"orientation", orientation_name(m.orientation)},
                          {"metric", metric_name(m.metric)},
                          {"training_score", m.training_score},
                          {"degenerate", m.degenerate}};
}

inline StmModel stm_from_json(const nlohmann::json& j) {
    StmModel m;
    m.attribute = j.at("attribute").get<std::string>();
    m.lambda = j.at("lambda").get<double>();
    m.orientation = parse_orientation(j.at("orientation").get<std::string>());
    m.metric = parse_metric(j.at("metric").get<std::string>());
    m.training_score = j.at("training_score").get<double>();
    m.degenerate = j.at("degenerate").get<bool>();
    return m;
}

}  // namespace churn

#endif  // CHURN_STM_HPP
