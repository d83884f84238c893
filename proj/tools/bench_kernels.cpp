// Timings of the OpenMP kernels against their serial references.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "rwalk/harness.hpp"
#include "rwalk/reference.hpp"
#include "rwalk/rng.hpp"

using namespace rwalk;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.1f ms   omp %9.1f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        const Graph g = build_watts_strogatz(3000, 8, 0.1, 7);
        RowStochasticMatrix a, b;
        const double ts = time_ms([&] { a = reference::levy_matrix(g, 0.5, 6); });
        const double tp = time_ms([&] { b = levy_matrix(g, 0.5, 6); });
        report("levy_matrix ws(3000,8,0.1)", ts, tp);
        if (!(a == b)) {
            std::printf("MISMATCH: parallel levy_matrix differs from serial\n");
            return 1;
        }
    }

    {
        const Graph g = build_watts_strogatz(20000, 6, 0.05, 11);
        std::vector<double> lipschitz(20000, 1.0);
        Rng rng(11);
        for (auto& l : lipschitz) l = 1.0 + 99.0 * rng.uniform01();
        const auto p = mh_importance(g, lipschitz);
        Distribution da, db;
        const double ts = time_ms([&] { da = reference::stationary(p, 1e-13, 2000000); });
        const double tp = time_ms([&] { db = stationary(p, 1e-13, 2000000); });
        report("stationary ws(20000,6)", ts, tp);
        if (tv_distance(da, db) != 0.0) {
            std::printf("MISMATCH: parallel stationary differs from serial\n");
            return 1;
        }
    }

    {
        const Graph g = build_ring(300);
        std::vector<double> lipschitz(300, 1.0);
        lipschitz[0] = 100.0;
        const auto p = mix(mh_importance(g, lipschitz), levy_matrix(g, 0.5, 3), 0.1);
        int ta = 0, tb = 0;
        const double ts = time_ms([&] { ta = reference::mixing_time(p); });
        const double tp = time_ms([&] { tb = mixing_time(p); });
        report("mixing_time ring(300)", ts, tp);
        if (ta != tb) {
            std::printf("MISMATCH: parallel mixing_time differs from serial\n");
            return 1;
        }
    }

    {
        const std::string cfg_json = R"({
          "graph": {"type": "ring", "n": 100, "seed": 3},
          "data": {"d": 10, "sigma_l_sq": 1.0, "sigma_h_sq": 100.0, "min_heavy": 1, "seed": 5},
          "algo": {"sampler_kind": "mhlj", "gamma": 0.0005, "T": 200000,
                   "p_j": 0.1, "p_d": 0.5, "r": 3, "seed": 9}
        })";
        const ExperimentConfig cfg = parse_config(cfg_json);
        std::vector<SweepRow> ra, rb;
        const double ts =
            time_ms([&] { ra = sweep(cfg, "p_j", {0.4, 0.2, 0.1, 0.05}, 4, 1); });
        const double tp = time_ms([&] { rb = sweep(cfg, "p_j", {0.4, 0.2, 0.1, 0.05}, 4, 0); });
        report("sweep 16 runs", ts, tp);
        for (std::size_t i = 0; i < ra.size(); ++i) {
            if (ra[i].summary.final_mse != rb[i].summary.final_mse) {
                std::printf("MISMATCH: sweep results depend on worker count\n");
                return 1;
            }
        }
    }
    return 0;
}
