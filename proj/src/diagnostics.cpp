#include "rwalk/diagnostics.hpp"

#include <ostream>

#include "rwalk/error.hpp"
#include "rwalk/format.hpp"

namespace rwalk {

OccupancyReport occupancy(const Trace& trace, const Dataset& data, double heavy_factor) {
    if (trace.total_updates == 0 || trace.records.empty()) throw InvalidParameter("empty trace");
    if (static_cast<int>(trace.visit_counts.size()) != data.size())
        throw DimensionMismatch("trace/dataset node count mismatch");
    OccupancyReport rep;
    rep.visit_counts = trace.visit_counts;
    rep.heavy_threshold = heavy_factor * data.l_bar;
    std::vector<double> w(rep.visit_counts.begin(), rep.visit_counts.end());
    rep.empirical = make_distribution(std::move(w));
    rep.tv_to_target = tv_distance(rep.empirical, importance_distribution(data.lipschitz_vector()));
    rep.max_dwell = trace.max_dwell;
    std::uint64_t heavy_updates = 0;
    for (int v = 0; v < data.size(); ++v)
        if (data.nodes[v].lipschitz > rep.heavy_threshold) heavy_updates += trace.visit_counts[v];
    rep.heavy_share = static_cast<double>(heavy_updates) / static_cast<double>(trace.total_updates);
    return rep;
}

DwellReport dwell_distribution(const Trace& trace, const Dataset& data, double heavy_factor) {
    if (trace.total_updates == 0) throw InvalidParameter("empty trace");
    if (static_cast<int>(trace.visit_counts.size()) != data.size())
        throw DimensionMismatch("trace/dataset node count mismatch");
    DwellReport rep;
    rep.heavy_threshold = heavy_factor * data.l_bar;
    rep.heavy_hist = trace.heavy_dwell_hist;
    rep.light_hist = trace.light_dwell_hist;
    rep.max_dwell = trace.max_dwell;
    std::uint64_t hv = 0, hr = 0, lv = 0, lr = 0;
    for (int v = 0; v < data.size(); ++v) {
        if (data.nodes[v].lipschitz > rep.heavy_threshold) {
            hv += trace.visit_counts[v];
            hr += trace.run_counts[v];
        } else {
            lv += trace.visit_counts[v];
            lr += trace.run_counts[v];
        }
    }
    rep.mean_heavy_dwell = hr > 0 ? static_cast<double>(hv) / static_cast<double>(hr) : 0.0;
    rep.mean_light_dwell = lr > 0 ? static_cast<double>(lv) / static_cast<double>(lr) : 0.0;
    return rep;
}

double expected_dwell(const RowStochasticMatrix& p, int v) {
    const double stay = p.at(v, v);
    if (stay >= 1.0) throw InvalidParameter("absorbing node has unbounded dwell");
    return 1.0 / (1.0 - stay);
}

void write_report(const OccupancyReport& occ, const DwellReport& dwell, std::ostream& out) {
    out << "tv_to_target " << fmt17(occ.tv_to_target) << "\n";
    out << "heavy_share " << fmt17(occ.heavy_share) << "\n";
    out << "heavy_threshold " << fmt17(occ.heavy_threshold) << "\n";
    out << "max_dwell " << occ.max_dwell << "\n";
    out << "mean_heavy_dwell " << fmt17(dwell.mean_heavy_dwell) << "\n";
    out << "mean_light_dwell " << fmt17(dwell.mean_light_dwell) << "\n";
}

void write_report_csv(const OccupancyReport& occ, const DwellReport& dwell, bool header,
                      std::ostream& out) {
    if (header)
        out << "tv_to_target,heavy_share,heavy_threshold,max_dwell,mean_heavy_dwell,"
               "mean_light_dwell\n";
    out << fmt17(occ.tv_to_target) << "," << fmt17(occ.heavy_share) << ","
        << fmt17(occ.heavy_threshold) << "," << occ.max_dwell << ","
        << fmt17(dwell.mean_heavy_dwell) << "," << fmt17(dwell.mean_light_dwell) << "\n";
}

}  // namespace rwalk
