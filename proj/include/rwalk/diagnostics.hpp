#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "rwalk/matrix.hpp"
#include "rwalk/model.hpp"
#include "rwalk/sgd.hpp"

namespace rwalk {

struct OccupancyReport {
    std::vector<std::uint64_t> visit_counts;
    Distribution empirical;
    double tv_to_target = 0.0;   // TV(empirical, pi_IS)
    std::uint64_t max_dwell = 0;
    double heavy_share = 0.0;    // fraction of updates at nodes with L_v > factor * L_bar
    double heavy_threshold = 0.0;
};

OccupancyReport occupancy(const Trace& trace, const Dataset& data, double heavy_factor = 10.0);

struct DwellReport {
    std::map<std::uint64_t, std::uint64_t> heavy_hist;
    std::map<std::uint64_t, std::uint64_t> light_hist;
    double mean_heavy_dwell = 0.0;
    double mean_light_dwell = 0.0;
    std::uint64_t max_dwell = 0;
    double heavy_threshold = 0.0;
};

// Consecutive-update run lengths split by the heavy/light class recorded at
// run time. Means are exact (visits / runs per node), recomputed from the
// trace counters for the given factor.
DwellReport dwell_distribution(const Trace& trace, const Dataset& data, double heavy_factor = 10.0);

// Geometric holding-time expectation 1/(1 - P(v,v)) of the kernel diagonal;
// oracle for the dwell tests.
double expected_dwell(const RowStochasticMatrix& p, int v);

// Flat key-value text block.
void write_report(const OccupancyReport& occ, const DwellReport& dwell, std::ostream& out);
// Single CSV row (with header line when requested) for sweep aggregation.
void write_report_csv(const OccupancyReport& occ, const DwellReport& dwell, bool header,
                      std::ostream& out);

}  // namespace rwalk
