#ifndef CHURN_METRICS_IO_HPP
#define CHURN_METRICS_IO_HPP

#include <ostream>

#include "churn/csv.hpp"
#include "churn/metrics.hpp"

namespace churn {

inline void save_metrics_csv(const Graph& g, const std::vector<NodeMetrics>& metrics,
                             std::ostream& os) {
    os << "node_id,degree,betweenness,closeness,coreness,eccentricity,is_articulation,avg_min_cut\n";
    for (Graph::NodeIndex v = 0; v < g.node_count(); ++v) {
        const NodeMetrics& nm = metrics[v];
        os << g.id_of(v) << ',' << nm.degree << ',' << csv::format_double(nm.betweenness) << ','
           << csv::format_double(nm.closeness) << ',' << nm.coreness << ',' << nm.eccentricity
           << ',' << (nm.is_articulation ? "true" : "false") << ','
           << csv::format_double(nm.avg_min_cut) << '\n';
    }
}

}  // namespace churn

#endif  // CHURN_METRICS_IO_HPP
