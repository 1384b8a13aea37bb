#ifndef CHURN_SNAPSHOT_IO_HPP
#define CHURN_SNAPSHOT_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "churn/ingest.hpp"

namespace churn {

/// A snapshot is stored as <prefix>.edges (edge list) plus a
/// <prefix>.json sidecar with the window metadata.
inline void save_snapshot(const Snapshot& snap, const std::string& prefix) {
    save_edge_list(snap.graph, prefix + ".edges");
    nlohmann::json side{{"window_start", format_timestamp(snap.window_start)},
                        {"window_days", snap.window_days},
                        {"label", snap.label}};
    std::ofstream os(prefix + ".json");
    if (!os) throw DataError("cannot open for writing: " + prefix + ".json");
    os << side.dump(2) << '\n';
}

inline Snapshot load_snapshot(const std::string& prefix) {
    std::ifstream is(prefix + ".json");
    if (!is) throw DataError("cannot open: " + prefix + ".json");
    nlohmann::json side = nlohmann::json::parse(is);
    Snapshot snap;
    snap.window_start = parse_timestamp(side.at("window_start").get<std::string>());
    snap.window_days = side.at("window_days").get<int>();
    snap.label = side.value("label", "");
    snap.graph = load_edge_list(prefix + ".edges");
    return snap;
}

}  // namespace churn

#endif  // CHURN_SNAPSHOT_IO_HPP
