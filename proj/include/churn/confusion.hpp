#ifndef CHURN_CONFUSION_HPP
#define CHURN_CONFUSION_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace churn {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
};

inline Confusion confusion_from_labels(const std::vector<bool>& predicted,
                                       const std::vector<bool>& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("prediction/label length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (predicted[i] && actual[i]) ++c.tp;
        else if (predicted[i] && !actual[i]) ++c.fp;
        else if (!predicted[i] && actual[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

enum class Metric { F1, accuracy, precision, recall };

inline const char* metric_name(Metric m) {
    switch (m) {
        case Metric::F1: return "f1";
        case Metric::accuracy: return "accuracy";
        case Metric::precision: return "precision";
        default: return "recall";
    }
}

inline Metric parse_metric(const std::string& s) {
    if (s == "f1") return Metric::F1;
    if (s == "accuracy") return Metric::accuracy;
    if (s == "precision") return Metric::precision;
    if (s == "recall") return Metric::recall;
    throw std::invalid_argument("unknown metric: " + s);
}

struct MetricValues {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    bool degenerate = false;  // some denominator was zero

    double get(Metric m) const {
        switch (m) {
            case Metric::F1: return f1;
            case Metric::accuracy: return accuracy;
            case Metric::precision: return precision;
            default: return recall;
        }
    }
};

/// Precision, recall, accuracy and F1 from a confusion. A zero
/// denominator yields 0 and sets the degenerate flag.
inline MetricValues compute_metrics(const Confusion& c) {
    if (c.total() == 0) throw std::invalid_argument("empty confusion");
    MetricValues m;
    if (c.tp + c.fp > 0)
        m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    else
        m.degenerate = true;
    if (c.tp + c.fn > 0)
        m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    else
        m.degenerate = true;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (m.precision + m.recall > 0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else
        m.degenerate = true;
    return m;
}

/// Convenience: one metric straight from prediction/label vectors.
inline double score_predictions(const std::vector<bool>& predicted,
                                const std::vector<bool>& actual, Metric metric) {
    return compute_metrics(confusion_from_labels(predicted, actual)).get(metric);
}

}  // namespace churn

#endif  // CHURN_CONFUSION_HPP
