#ifndef CHURN_INGEST_HPP
#define CHURN_INGEST_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "churn/csv.hpp"
#include "churn/graph.hpp"
#include "churn/time.hpp"

namespace churn {

enum class EventKind { comment, answer, other };

inline EventKind parse_event_kind(const std::string& s) {
    if (s == "comment") return EventKind::comment;
    if (s == "answer") return EventKind::answer;
    return EventKind::other;
}

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::comment: return "comment";
        case EventKind::answer: return "answer";
        default: return "other";
    }
}

/// One timestamped interaction between two distinct members.
struct InteractionEvent {
    Timestamp timestamp;
    std::string actor;
    std::string target;
    EventKind kind;
};

struct MemberAttributes {
    std::string member_id;
    Timestamp registration_date = 0;
    Timestamp last_login_date = 0;
    long long upvotes = 0;
    long long downvotes = 0;
    long long views = 0;
    long long reputation = 0;
};

/// Undirected simple graph for one half-open time window [start, start+days).
struct Snapshot {
    Graph graph;
    Timestamp window_start = 0;
    int window_days = 0;
    std::string label;

    Timestamp window_end() const { return window_start + static_cast<Timestamp>(window_days) * kSecondsPerDay; }
};

/// Leave labels for the initial node set V_t against a later snapshot.
struct LeaveLabeling {
    std::set<std::string> initial_nodes;   // V_t
    std::set<std::string> departed;        // V_t \ V_t'
    std::set<std::string> ignored;         // nodes of t' absent at t
    std::string horizon_tag;
};

struct ParsedEvents {
    std::vector<InteractionEvent> events;
    std::size_t self_loop_rows_dropped = 0;
};

/// Events CSV: timestamp,actor,target,kind. Rows with actor == target are
/// dropped and counted; a malformed row is an error naming its line.
inline ParsedEvents parse_events(std::istream& is, const std::string& what = "events") {
    auto table = csv::read(is, what);
    int c_ts = table.require_column("timestamp");
    int c_actor = table.require_column("actor");
    int c_target = table.require_column("target");
    int c_kind = table.require_column("kind");

    ParsedEvents out;
    out.events.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        InteractionEvent ev;
        try {
            ev.timestamp = parse_timestamp(row[c_ts]);
        } catch (const std::exception& e) {
            throw DataError(what + " line " + std::to_string(table.line_numbers[i]) + ": " +
                            e.what());
        }
        ev.actor = row[c_actor];
        ev.target = row[c_target];
        if (ev.actor.empty() || ev.target.empty())
            throw DataError(what + " line " + std::to_string(table.line_numbers[i]) +
                            ": empty actor or target");
        ev.kind = parse_event_kind(row[c_kind]);
        if (ev.actor == ev.target) {
            ++out.self_loop_rows_dropped;
            continue;
        }
        out.events.push_back(std::move(ev));
    }
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const InteractionEvent& a, const InteractionEvent& b) {
                         return a.timestamp < b.timestamp;
                     });
    return out;
}

inline ParsedEvents parse_events_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    return parse_events(is, path);
}

/// Attributes CSV:
/// member_id,registration_date,last_login_date,upvotes,downvotes,views,reputation
inline std::map<std::string, MemberAttributes> parse_attributes(std::istream& is,
                                                                const std::string& what = "attributes") {
    auto table = csv::read(is, what);
    int c_id = table.require_column("member_id");
    int c_reg = table.require_column("registration_date");
    int c_login = table.require_column("last_login_date");
    int c_up = table.require_column("upvotes");
    int c_down = table.require_column("downvotes");
    int c_views = table.require_column("views");
    int c_rep = table.require_column("reputation");

    std::map<std::string, MemberAttributes> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        std::string ctx = what + " line " + std::to_string(table.line_numbers[i]);
        MemberAttributes a;
        a.member_id = row[c_id];
        try {
            a.registration_date = parse_timestamp(row[c_reg]);
            a.last_login_date = parse_timestamp(row[c_login]);
        } catch (const std::exception& e) {
            throw DataError(ctx + ": " + e.what());
        }
        if (a.last_login_date < a.registration_date)
            throw DataError(ctx + ": last_login_date precedes registration_date");
        a.upvotes = csv::parse_int(row[c_up], ctx);
        a.downvotes = csv::parse_int(row[c_down], ctx);
        a.views = csv::parse_int(row[c_views], ctx);
        a.reputation = csv::parse_int(row[c_rep], ctx);
        out[a.member_id] = std::move(a);
    }
    return out;
}

inline std::map<std::string, MemberAttributes> parse_attributes_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    return parse_attributes(is, path);
}

/// A link exists when the pair interacted at least once inside the
/// half-open window [window_start, window_start + window_days days).
/// Nodes enter only as edge endpoints.
inline Snapshot build_snapshot(const std::vector<InteractionEvent>& events, Timestamp window_start,
                               int window_days, const std::string& label = "") {
    if (window_days < 1) throw DataError("window_days must be >= 1");
    Snapshot snap;
    snap.window_start = window_start;
    snap.window_days = window_days;
    snap.label = label;
    Timestamp end = snap.window_end();
    // collect pairs first so graph node indices do not depend on event order
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& ev : events) {
        if (ev.timestamp < window_start || ev.timestamp >= end) continue;
        auto p = std::minmax(ev.actor, ev.target);
        pairs.emplace(p.first, p.second);
    }
    for (const auto& [u, v] : pairs) snap.graph.add_edge(u, v);
    return snap;
}

/// Initial nodes are V_t; departed are those absent from the future
/// snapshot's node set; nodes first seen after t are ignored.
inline LeaveLabeling label_leaves(const Snapshot& snap_t, const Snapshot& snap_future) {
    if (snap_future.window_start <= snap_t.window_start)
        throw DataError("future snapshot must start after the base snapshot");
    LeaveLabeling lab;
    lab.horizon_tag = snap_future.label;
    for (const auto& id : snap_t.graph.node_ids()) lab.initial_nodes.insert(id);
    std::set<std::string> future_nodes(snap_future.graph.node_ids().begin(),
                                       snap_future.graph.node_ids().end());
    for (const auto& id : lab.initial_nodes)
        if (!future_nodes.count(id)) lab.departed.insert(id);
    for (const auto& id : future_nodes)
        if (!lab.initial_nodes.count(id)) lab.ignored.insert(id);
    return lab;
}

struct NodeSetConfusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    // no true-negative exists in the node-set view; accuracy is undefined
};

/// Confusion counts for predicted vs observed departure node sets over
/// the initial population. Precision/recall/F1 only.
inline NodeSetConfusion node_prediction_confusion(const std::set<std::string>& observed,
                                                  const std::set<std::string>& predicted,
                                                  const std::set<std::string>& initial) {
    for (const auto& id : observed)
        if (!initial.count(id)) throw DataError("observed node not in initial set: " + id);
    for (const auto& id : predicted)
        if (!initial.count(id)) throw DataError("predicted node not in initial set: " + id);
    NodeSetConfusion c;
    for (const auto& id : predicted)
        observed.count(id) ? ++c.tp : ++c.fp;
    for (const auto& id : observed)
        if (!predicted.count(id)) ++c.fn;
    return c;
}

}  // namespace churn

#endif  // CHURN_INGEST_HPP
