#ifndef CHURN_FEATURES_HPP
#define CHURN_FEATURES_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "churn/csv.hpp"
#include "churn/ingest.hpp"
#include "churn/metrics.hpp"

namespace churn {

/// Column order is deterministic: network features in alphabetical
/// order, then exogenous features in alphabetical order.
inline const std::vector<std::string>& network_feature_names() {
    static const std::vector<std::string> names = {
        "betweenness", "closeness", "coreness", "degree", "eccentricity", "is_articulation",
        "min_cut"};
    return names;
}

inline const std::vector<std::string>& exogenous_feature_names() {
    static const std::vector<std::string> names = {"downvotes", "reputation", "upvotes", "views"};
    return names;
}

inline bool is_exogenous_feature(const std::string& name) {
    const auto& exo = exogenous_feature_names();
    return std::find(exo.begin(), exo.end(), name) != exo.end();
}

/// Per-node feature vectors with leave labels. Values are stored in
/// column order: network columns first, then exogenous columns.
struct FeatureMatrix {
    std::vector<std::string> network_columns;
    std::vector<std::string> exogenous_columns;

    struct Row {
        std::string node_id;
        std::vector<double> values;
        bool leave_label = false;
    };
    std::vector<Row> rows;
    std::string provenance;

    std::vector<std::string> columns() const {
        std::vector<std::string> out = network_columns;
        out.insert(out.end(), exogenous_columns.begin(), exogenous_columns.end());
        return out;
    }

    std::size_t column_count() const { return network_columns.size() + exogenous_columns.size(); }

    int column_index(const std::string& name) const {
        auto cols = columns();
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return static_cast<int>(i);
        return -1;
    }

    std::vector<double> column_values(std::size_t col) const {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.values.at(col));
        return out;
    }

    std::vector<bool> labels() const {
        std::vector<bool> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.leave_label);
        return out;
    }
};

struct AssembleResult {
    FeatureMatrix matrix;
    std::size_t members_missing_attributes = 0;
};

/// One row per initial node: the seven network measures of the training
/// snapshot plus the member's exogenous attributes, labeled by
/// departure. Members absent from the attributes table get all-zero
/// exogenous values, counted in the result.
inline AssembleResult assemble(const Snapshot& snap_t, const LeaveLabeling& labeling,
                               const std::map<std::string, MemberAttributes>& attrs,
                               const MinCutOptions& mc_opt = {}) {
    const Graph& g = snap_t.graph;
    {
        std::set<std::string> snap_nodes(g.node_ids().begin(), g.node_ids().end());
        if (snap_nodes != labeling.initial_nodes)
            throw DataError("labeling initial nodes do not match the snapshot node set");
    }
    auto metrics = all_metrics(g, mc_opt);

    AssembleResult res;
    FeatureMatrix& m = res.matrix;
    m.network_columns = network_feature_names();
    m.exogenous_columns = exogenous_feature_names();
    m.provenance = snap_t.label;

    // initial_nodes is an ordered set, so row order is deterministic
    for (const auto& id : labeling.initial_nodes) {
        FeatureMatrix::Row row;
        row.node_id = id;
        const NodeMetrics& nm = metrics[g.index_of(id)];
        row.values = {nm.betweenness,
                      nm.closeness,
                      static_cast<double>(nm.coreness),
                      static_cast<double>(nm.degree),
                      static_cast<double>(nm.eccentricity),
                      nm.is_articulation ? 1.0 : 0.0,
                      nm.avg_min_cut};
        auto it = attrs.find(id);
        if (it == attrs.end()) {
            ++res.members_missing_attributes;
            row.values.insert(row.values.end(), {0.0, 0.0, 0.0, 0.0});
        } else {
            const MemberAttributes& a = it->second;
            row.values.insert(row.values.end(),
                              {static_cast<double>(a.downvotes), static_cast<double>(a.reputation),
                               static_cast<double>(a.upvotes), static_cast<double>(a.views)});
        }
        row.leave_label = labeling.departed.count(id) != 0;
        m.rows.push_back(std::move(row));
    }
    return res;
}

struct PearsonMatrix {
    std::vector<std::string> features;
    std::vector<std::vector<double>> rho;
    std::vector<bool> constant;  // zero-variance features, rho forced to 0
};

/// Pearson correlation for every feature pair. Zero-variance features
/// get 0 in every entry involving them and are flagged.
inline PearsonMatrix pearson_matrix(const FeatureMatrix& m) {
    if (m.rows.size() < 2) throw DataError("pearson_matrix needs at least 2 rows");
    const std::size_t k = m.column_count();
    const std::size_t n = m.rows.size();
    PearsonMatrix out;
    out.features = m.columns();
    out.rho.assign(k, std::vector<double>(k, 0.0));
    out.constant.assign(k, false);

    std::vector<double> mean(k, 0.0);
    for (const auto& r : m.rows)
        for (std::size_t j = 0; j < k; ++j) mean[j] += r.values[j];
    for (auto& v : mean) v /= static_cast<double>(n);

    std::vector<double> var(k, 0.0);
    for (const auto& r : m.rows)
        for (std::size_t j = 0; j < k; ++j) {
            double d = r.values[j] - mean[j];
            var[j] += d * d;
        }
    for (std::size_t j = 0; j < k; ++j) out.constant[j] = (var[j] == 0.0);

    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            if (out.constant[a] || out.constant[b]) continue;
            if (a == b) {
                out.rho[a][a] = 1.0;
                continue;
            }
            double cov = 0.0;
            for (const auto& r : m.rows)
                cov += (r.values[a] - mean[a]) * (r.values[b] - mean[b]);
            double rho = cov / std::sqrt(var[a] * var[b]);
            out.rho[a][b] = out.rho[b][a] = rho;
        }
    }
    return out;
}

/// Empirical CDF of member lifetime in whole weeks,
/// weeks = floor((last_login - registration) / 7 days).
inline std::vector<std::pair<long long, double>> active_weeks_cdf(
    const std::map<std::string, MemberAttributes>& attrs) {
    if (attrs.empty()) throw DataError("active_weeks_cdf: empty attributes table");
    std::map<long long, std::size_t> counts;
    for (const auto& [id, a] : attrs) {
        Timestamp span = a.last_login_date - a.registration_date;
        if (span < 0) throw DataError("negative active span for member " + id);
        counts[span / (7 * kSecondsPerDay)]++;
    }
    std::vector<std::pair<long long, double>> out;
    std::size_t cum = 0;
    for (const auto& [weeks, c] : counts) {
        cum += c;
        out.emplace_back(weeks, static_cast<double>(cum) / static_cast<double>(attrs.size()));
    }
    out.back().second = 1.0;  // exact, regardless of rounding
    return out;
}

enum class VariantKind { All, Best4, Best1, Best2 };

inline const char* variant_name(VariantKind k) {
    switch (k) {
        case VariantKind::All: return "all";
        case VariantKind::Best4: return "best4";
        case VariantKind::Best1: return "best1";
        default: return "best2";
    }
}

inline VariantKind parse_variant(const std::string& s) {
    if (s == "all") return VariantKind::All;
    if (s == "best4") return VariantKind::Best4;
    if (s == "best1") return VariantKind::Best1;
    if (s == "best2") return VariantKind::Best2;
    throw DataError("unknown variant: " + s + " (expected all|best4|best1|best2)");
}

/// A feature-subset variant plus the importance ranking it draws from.
struct VariantSpec {
    VariantKind kind = VariantKind::All;
    std::vector<std::string> ranking;  // all feature names, best first
};

namespace detail {

inline FeatureMatrix project_columns(const FeatureMatrix& m, const std::set<std::string>& keep) {
    FeatureMatrix out;
    out.provenance = m.provenance;
    auto cols = m.columns();
    std::vector<std::size_t> keep_idx;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (!keep.count(cols[i])) continue;
        keep_idx.push_back(i);
        if (i < m.network_columns.size())
            out.network_columns.push_back(cols[i]);
        else
            out.exogenous_columns.push_back(cols[i]);
    }
    for (const auto& r : m.rows) {
        FeatureMatrix::Row nr;
        nr.node_id = r.node_id;
        nr.leave_label = r.leave_label;
        for (auto i : keep_idx) nr.values.push_back(r.values[i]);
        out.rows.push_back(std::move(nr));
    }
    return out;
}

}  // namespace detail

/// Filters columns per the variant. Best1 keeps the top network plus
/// the top exogenous feature; Best2 the top two of each; Best4 the top
/// four overall. Labels are untouched.
inline FeatureMatrix select_variant(const FeatureMatrix& m, const VariantSpec& spec) {
    if (spec.kind == VariantKind::All) return m;
    auto cols = m.columns();
    for (const auto& c : cols)
        if (std::find(spec.ranking.begin(), spec.ranking.end(), c) == spec.ranking.end())
            throw DataError("variant ranking missing column: " + c);

    std::set<std::string> col_set(cols.begin(), cols.end());
    std::set<std::string> keep;
    auto take = [&](bool want_exo, std::size_t count) {
        std::size_t taken = 0;
        for (const auto& name : spec.ranking) {
            if (taken == count) break;
            if (!col_set.count(name)) continue;
            if (is_exogenous_feature(name) != want_exo) continue;
            keep.insert(name);
            ++taken;
        }
        if (taken < count)
            throw DataError("not enough features to satisfy the variant selection");
    };
    switch (spec.kind) {
        case VariantKind::Best4: {
            std::size_t taken = 0;
            for (const auto& name : spec.ranking) {
                if (taken == 4) break;
                if (!col_set.count(name)) continue;
                keep.insert(name);
                ++taken;
            }
            if (taken < 4) throw DataError("not enough features for best4");
            break;
        }
        case VariantKind::Best1:
            take(false, 1);
            take(true, 1);
            break;
        case VariantKind::Best2:
            take(false, 2);
            take(true, 2);
            break;
        default: break;
    }
    return detail::project_columns(m, keep);
}

/// FeatureMatrix CSV: node_id, feature columns in documented order,
/// leave_label (true/false).
inline void save_feature_matrix(const FeatureMatrix& m, std::ostream& os) {
    os << "node_id";
    for (const auto& c : m.columns()) os << ',' << c;
    os << ",leave_label\n";
    for (const auto& r : m.rows) {
        os << r.node_id;
        for (double v : r.values) os << ',' << csv::format_double(v);
        os << ',' << (r.leave_label ? "true" : "false") << '\n';
    }
}

inline void save_feature_matrix(const FeatureMatrix& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    save_feature_matrix(m, os);
}

inline FeatureMatrix load_feature_matrix(std::istream& is, const std::string& what = "features") {
    auto table = csv::read(is, what);
    if (table.header.size() < 3 || table.header.front() != "node_id" ||
        table.header.back() != "leave_label")
        throw DataError(what + ": expected header node_id,<features...>,leave_label");
    FeatureMatrix m;
    for (std::size_t i = 1; i + 1 < table.header.size(); ++i) {
        const auto& name = table.header[i];
        if (is_exogenous_feature(name))
            m.exogenous_columns.push_back(name);
        else
            m.network_columns.push_back(name);
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        std::string ctx = what + " line " + std::to_string(table.line_numbers[i]);
        FeatureMatrix::Row r;
        r.node_id = row.front();
        for (std::size_t j = 1; j + 1 < row.size(); ++j)
            r.values.push_back(csv::parse_double(row[j], ctx));
        const auto& lbl = row.back();
        if (lbl == "true")
            r.leave_label = true;
        else if (lbl == "false")
            r.leave_label = false;
        else
            throw DataError(ctx + ": leave_label must be true or false, got '" + lbl + "'");
        m.rows.push_back(std::move(r));
    }
    return m;
}

inline FeatureMatrix load_feature_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    return load_feature_matrix(is, path);
}

/// Correlation matrix CSV with a feature-name header row and column.
inline void save_pearson_matrix(const PearsonMatrix& pm, std::ostream& os) {
    os << "feature";
    for (const auto& f : pm.features) os << ',' << f;
    os << '\n';
    for (std::size_t i = 0; i < pm.features.size(); ++i) {
        os << pm.features[i];
        for (std::size_t j = 0; j < pm.features.size(); ++j)
            os << ',' << csv::format_double(pm.rho[i][j]);
        os << '\n';
    }
}

}  // namespace churn

#endif  // CHURN_FEATURES_HPP
