#ifndef CHURN_SYNTH_HPP
#define CHURN_SYNTH_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "churn/features.hpp"
#include "churn/ingest.hpp"
#include "churn/metrics.hpp"

namespace churn {

/// Generator for a self-contained demo community: a random interaction
/// graph whose members depart when a planted attribute crosses a
/// threshold, with an optional label-noise rate.
struct SyntheticSpec {
    std::size_t node_count = 60;
    double edge_density = 0.08;
    std::string planted_attribute = "degree";  // any network or exogenous feature name
    double threshold = 3.0;
    bool depart_below = true;  // depart when value < threshold (else >=)
    double noise_rate = 0.0;   // in [0, 0.5): probability of flipping the rule's verdict
    int months = 6;            // monthly activity steps after the base month
    Timestamp start = 1577836800;  // 2020-01-01T00:00:00Z
    std::uint32_t seed = 42;

    void validate() const {
        if (node_count < 4) throw DataError("synthetic spec: node_count must be >= 4");
        if (edge_density <= 0.0 || edge_density > 1.0)
            throw DataError("synthetic spec: edge_density must be in (0, 1]");
        if (noise_rate < 0.0 || noise_rate >= 0.5)
            throw DataError("synthetic spec: noise_rate must be in [0, 0.5)");
        if (months < 2) throw DataError("synthetic spec: months must be >= 2");
    }
};

struct SyntheticCorpus {
    std::vector<InteractionEvent> events;
    std::map<std::string, MemberAttributes> attributes;
    std::map<std::string, bool> departed;  // ground truth over members present at month 0
};

namespace detail {

inline double planted_value(const std::string& attr, const NodeMetrics& nm,
                            const MemberAttributes& a) {
    if (attr == "degree") return static_cast<double>(nm.degree);
    if (attr == "betweenness") return nm.betweenness;
    if (attr == "closeness") return nm.closeness;
    if (attr == "coreness") return static_cast<double>(nm.coreness);
    if (attr == "eccentricity") return static_cast<double>(nm.eccentricity);
    if (attr == "is_articulation") return nm.is_articulation ? 1.0 : 0.0;
    if (attr == "min_cut") return nm.avg_min_cut;
    if (attr == "upvotes") return static_cast<double>(a.upvotes);
    if (attr == "downvotes") return static_cast<double>(a.downvotes);
    if (attr == "views") return static_cast<double>(a.views);
    if (attr == "reputation") return static_cast<double>(a.reputation);
    throw DataError("unknown planted attribute: " + attr);
}

}  // namespace detail

/// Month k activity occupies [start + k*30d, start + (k+1)*30d); events
/// sit in the first hours of the window so any window length >= 1 day
/// aligned to 30-day boundaries captures exactly one month.
inline SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937 rng(spec.seed);
    auto uniform01 = [&rng]() { return static_cast<double>(rng()) / 4294967296.0; };

    const std::size_t n = spec.node_count;
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string num = std::to_string(i);
        if (num.size() < 4) num.insert(0, 4 - num.size(), '0');
        ids[i] = "m" + num;
    }

    // base interaction graph for month 0
    Graph base;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (uniform01() < spec.edge_density) {
                base.add_edge(ids[i], ids[j]);
                edges.emplace_back(i, j);
            }

    SyntheticCorpus corpus;

    // exogenous attributes; the active span is filled in once departure
    // is known
    for (std::size_t i = 0; i < n; ++i) {
        MemberAttributes a;
        a.member_id = ids[i];
        a.registration_date = spec.start;
        a.upvotes = static_cast<long long>(rng() % 200);
        a.downvotes = static_cast<long long>(rng() % 50);
        a.views = static_cast<long long>(rng() % 2000);
        a.reputation = static_cast<long long>(rng() % 5000);
        corpus.attributes[ids[i]] = a;
    }

    auto metrics = all_metrics(base);
    std::map<std::string, bool> departs;
    for (std::size_t i = 0; i < n; ++i) {
        if (!base.has_node(ids[i])) continue;  // isolated members never enter a snapshot
        double v = detail::planted_value(spec.planted_attribute, metrics[base.index_of(ids[i])],
                                         corpus.attributes[ids[i]]);
        bool leave = spec.depart_below ? v < spec.threshold : v >= spec.threshold;
        if (spec.noise_rate > 0.0 && uniform01() < spec.noise_rate) leave = !leave;
        departs[ids[i]] = leave;
        corpus.departed[ids[i]] = leave;
        corpus.attributes[ids[i]].last_login_date =
            spec.start + (leave ? 1 : spec.months) * 30 * kSecondsPerDay;
    }
    for (auto& [id, a] : corpus.attributes)
        if (a.last_login_date == 0) a.last_login_date = a.registration_date;

    auto emit = [&corpus](Timestamp t, const std::string& u, const std::string& v) {
        corpus.events.push_back({t, u, v, EventKind::comment});
    };

    // month 0: every base edge interacts once
    for (std::size_t e = 0; e < edges.size(); ++e)
        emit(spec.start + static_cast<Timestamp>(e), ids[edges[e].first], ids[edges[e].second]);

    // later months: surviving members keep their mutual edges, plus a
    // chain so every survivor stays incident to at least one edge
    std::vector<std::string> survivors;
    for (const auto& [id, leave] : departs)
        if (!leave) survivors.push_back(id);
    if (survivors.size() < 2)
        throw DataError("synthetic spec leaves fewer than 2 survivors; adjust the rule");

    for (int month = 1; month <= spec.months; ++month) {
        Timestamp t0 = spec.start + static_cast<Timestamp>(month) * 30 * kSecondsPerDay;
        Timestamp tick = 0;
        for (const auto& [i, j] : edges)
            if (!departs[ids[i]] && !departs[ids[j]]) emit(t0 + tick++, ids[i], ids[j]);
        for (std::size_t i = 0; i + 1 < survivors.size(); ++i)
            emit(t0 + tick++, survivors[i], survivors[i + 1]);
    }

    return corpus;
}

inline void save_events(const std::vector<InteractionEvent>& events, std::ostream& os) {
    os << "timestamp,actor,target,kind\n";
    for (const auto& ev : events)
        os << format_timestamp(ev.timestamp) << ',' << ev.actor << ',' << ev.target << ','
           << event_kind_name(ev.kind) << '\n';
}

inline void save_attributes(const std::map<std::string, MemberAttributes>& attrs,
                            std::ostream& os) {
    os << "member_id,registration_date,last_login_date,upvotes,downvotes,views,reputation\n";
    for (const auto& [id, a] : attrs)
        os << id << ',' << format_timestamp(a.registration_date) << ','
           << format_timestamp(a.last_login_date) << ',' << a.upvotes << ',' << a.downvotes << ','
           << a.views << ',' << a.reputation << '\n';
}

inline void save_ground_truth(const SyntheticCorpus& corpus, std::ostream& os) {
    os << "member_id,departed\n";
    for (const auto& [id, leave] : corpus.departed)
        os << id << ',' << (leave ? "true" : "false") << '\n';
}

}  // namespace churn

#endif  // CHURN_SYNTH_HPP
