#include "rwalk/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rwalk/error.hpp"

namespace rwalk {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) throw ConfigError("section '" + section + "' must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown field '" + key + "' in section '" + section + "'");
    for (const auto& key : required)
        if (!obj.contains(key))
            throw ConfigError("missing field '" + key + "' in section '" + section + "'");
}

template <typename T>
T get(const json& obj, const std::string& key, T fallback) {
    return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(root, "(top level)", {"graph", "data", "algo", "output"},
                 {"graph", "data", "algo"});

    ExperimentConfig cfg;
    const json& g = root.at("graph");
    require_keys(g, "graph", {"type", "n", "rows", "cols", "k", "p", "beta", "seed"},
                 {"type", "seed"});
    cfg.graph.type = g.at("type").get<std::string>();
    cfg.graph.seed = g.at("seed").get<std::uint64_t>();
    if (cfg.graph.type == "ring") {
        require_keys(g, "graph(ring)", {"type", "n", "seed"}, {"n"});
        cfg.graph.n = g.at("n").get<int>();
    } else if (cfg.graph.type == "grid2d") {
        require_keys(g, "graph(grid2d)", {"type", "rows", "cols", "seed"}, {"rows", "cols"});
        cfg.graph.rows = g.at("rows").get<int>();
        cfg.graph.cols = g.at("cols").get<int>();
    } else if (cfg.graph.type == "erdos-renyi") {
        require_keys(g, "graph(erdos-renyi)", {"type", "n", "p", "seed"}, {"n", "p"});
        cfg.graph.n = g.at("n").get<int>();
        cfg.graph.p = g.at("p").get<double>();
    } else if (cfg.graph.type == "watts-strogatz") {
        require_keys(g, "graph(watts-strogatz)", {"type", "n", "k", "beta", "seed"},
                     {"n", "k", "beta"});
        cfg.graph.n = g.at("n").get<int>();
        cfg.graph.k = g.at("k").get<int>();
        cfg.graph.beta = g.at("beta").get<double>();
    } else {
        throw ConfigError("unknown graph type: " + cfg.graph.type);
    }

    const json& d = root.at("data");
    require_keys(d, "data",
                 {"d", "sigma_l_sq", "sigma_h_sq", "p_high", "min_heavy", "seed", "homogeneous"},
                 {"d", "sigma_l_sq", "seed"});
    cfg.data.d = d.at("d").get<int>();
    cfg.data.seed = d.at("seed").get<std::uint64_t>();
    cfg.data.sigma_l_sq = d.at("sigma_l_sq").get<double>();
    cfg.data.sigma_h_sq = get(d, "sigma_h_sq", cfg.data.sigma_l_sq);
    cfg.data.p_high = get(d, "p_high", 0.0);
    cfg.data.min_heavy = get(d, "min_heavy", 0);
    cfg.data.homogeneous = get(d, "homogeneous", false);

    const json& a = root.at("algo");
    require_keys(a, "algo",
                 {"sampler_kind", "gamma", "T", "p_j", "p_d", "r", "t_switch", "seed", "mu",
                  "include_self_in_jumps"},
                 {"sampler_kind", "gamma", "T", "seed"});
    cfg.algo.sampler = sampler_from_string(a.at("sampler_kind").get<std::string>());
    if (a.at("gamma").is_string()) {
        if (a.at("gamma").get<std::string>() != "auto-grid")
            throw ConfigError("gamma must be a number or \"auto-grid\"");
        cfg.algo.auto_gamma = true;
    } else {
        cfg.algo.gamma = a.at("gamma").get<double>();
        if (cfg.algo.gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    }
    cfg.algo.total_updates = a.at("T").get<std::uint64_t>();
    cfg.algo.seed = a.at("seed").get<std::uint64_t>();
    if (cfg.algo.sampler == SamplerKind::Mhlj) {
        for (const char* key : {"p_j", "p_d", "r"})
            if (!a.contains(key))
                throw ConfigError(std::string("mhlj requires field '") + key + "' in algo");
        cfg.algo.p_j = a.at("p_j").get<double>();
        cfg.algo.p_d = a.at("p_d").get<double>();
        cfg.algo.r = a.at("r").get<int>();
    } else {
        cfg.algo.p_j = get(a, "p_j", 0.0);
        cfg.algo.p_d = get(a, "p_d", 0.5);
        cfg.algo.r = get(a, "r", 1);
    }
    cfg.algo.t_switch = get(a, "t_switch", std::uint64_t{0});
    cfg.algo.include_self_in_jumps = get(a, "include_self_in_jumps", false);
    if (a.contains("mu")) cfg.algo.mu = a.at("mu").get<double>();

    if (root.contains("output")) {
        const json& o = root.at("output");
        require_keys(o, "output", {"csv", "log_every"}, {});
        cfg.output.csv = get(o, "csv", std::string("trace.csv"));
        cfg.output.log_every = get(o, "log_every", std::uint64_t{0});
    }

    cfg.echo = root.dump();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Graph build_graph(const GraphConfig& cfg) {
    if (cfg.type == "ring") return build_ring(cfg.n);
    if (cfg.type == "grid2d") return build_grid2d(cfg.rows, cfg.cols);
    if (cfg.type == "erdos-renyi") return build_erdos_renyi(cfg.n, cfg.p, cfg.seed);
    if (cfg.type == "watts-strogatz") return build_watts_strogatz(cfg.n, cfg.k, cfg.beta, cfg.seed);
    throw ConfigError("unknown graph type: " + cfg.type);
}

Dataset build_dataset(const DataParams& cfg) {
    if (cfg.homogeneous) return generate_homogeneous(cfg.n, cfg.d, cfg.sigma_l_sq, cfg.seed);
    return generate_heterogeneous(cfg.n, cfg.d, cfg.sigma_l_sq, cfg.sigma_h_sq, cfg.p_high,
                                  cfg.seed, cfg.min_heavy);
}

double auto_grid_gamma(const Dataset& data, const Graph& g, const GroundTruth& truth,
                       std::uint64_t total_updates, std::uint64_t seed, int max_halvings) {
    const double mse0 = global_mse(data, std::vector<double>(data.d, 0.0));
    for (int k = 0; k <= max_halvings; ++k) {
        const double gamma = std::ldexp(1.0, -k);
        RunConfig probe;
        probe.gamma = gamma;
        probe.total_updates = total_updates;
        probe.sampler = SamplerKind::UniformMh;
        probe.seed = seed;
        try {
            const Trace trace = run(data, g, truth, probe);
            double lo = trace.records.front().mse, hi = lo;
            for (const auto& rec : trace.records) {
                lo = std::min(lo, rec.mse);
                hi = std::max(hi, rec.mse);
            }
            const double window = trace.plateau_mse();
            if (window <= mse0 && hi <= 1e6 * mse0 && window <= 2.0 * lo) return gamma;
        } catch (const DivergenceError&) {
            // unstable; try the next smaller step
        }
    }
    throw InvalidParameter("auto-grid found no stable step size");
}

RunOutput run_experiment(const ExperimentConfig& cfg, std::uint64_t seed_offset) {
    Graph g = build_graph(cfg.graph);
    DataParams dp = cfg.data;
    dp.n = g.n;
    Dataset data = build_dataset(dp);
    GroundTruth truth = solve_least_squares(data);

    RunConfig rc;
    rc.total_updates = cfg.algo.total_updates;
    rc.sampler = cfg.algo.sampler;
    rc.jump.p_j = cfg.algo.p_j;
    rc.jump.p_d = cfg.algo.p_d;
    rc.jump.r = cfg.algo.r;
    rc.jump.t_switch = cfg.algo.t_switch;
    rc.jump.include_self_in_jumps = cfg.algo.include_self_in_jumps;
    rc.log_every = cfg.output.log_every;
    rc.seed = cfg.algo.seed + seed_offset;
    rc.gamma = cfg.algo.auto_gamma
                   ? auto_grid_gamma(data, g, truth, cfg.algo.total_updates, cfg.algo.seed)
                   : cfg.algo.gamma;

    RunOutput out;
    out.trace = run(data, g, truth, rc);

    RunSummary& s = out.summary;
    s.gamma = rc.gamma;
    s.final_mse = out.trace.final_mse();
    s.final_dist_sq = out.trace.final_dist_sq();
    s.plateau_mse = out.trace.plateau_mse();
    s.plateau_dist_sq = out.trace.plateau_dist_sq();
    s.comm_count = out.trace.comm_count;
    s.visit_count = out.trace.visit_count;
    s.total_updates = out.trace.total_updates;
    s.comm_per_update = static_cast<double>(s.comm_count) / static_cast<double>(s.total_updates);
    s.visits_per_update = static_cast<double>(s.visit_count) / static_cast<double>(s.total_updates);
    const OccupancyReport occ = occupancy(out.trace, data);
    s.heavy_share = occ.heavy_share;
    s.max_dwell = occ.max_dwell;
    s.mean_heavy_dwell = dwell_distribution(out.trace, data).mean_heavy_dwell;
    if (cfg.algo.sampler == SamplerKind::Mhlj) {
        const auto p_is = mh_importance(g, data.lipschitz_vector());
        const auto p_levy = levy_matrix(g, cfg.algo.p_d, cfg.algo.r, cfg.algo.include_self_in_jumps);
        s.error_gap = error_gap_estimate(cfg.algo.p_j, one_norm_diff(p_is, p_levy));
    }
    return out;
}

DiagnoseReport diagnose(const ExperimentConfig& cfg, double mixing_eps, int mixing_t_max) {
    Graph g = build_graph(cfg.graph);
    DataParams dp = cfg.data;
    dp.n = g.n;
    Dataset data = build_dataset(dp);
    const auto lipschitz = data.lipschitz_vector();
    const auto p_is = mh_importance(g, lipschitz);
    const auto p_levy = levy_matrix(g, cfg.algo.p_d, cfg.algo.r, cfg.algo.include_self_in_jumps);
    const auto p_mix = mix(p_is, p_levy, cfg.algo.p_j);
    const auto pi_is = importance_distribution(lipschitz);

    DiagnoseReport rep;
    rep.tau_mix_is = mixing_time(p_is, mixing_eps, mixing_t_max);
    rep.tau_mix_mix = mixing_time(p_mix, mixing_eps, mixing_t_max);
    rep.residual_is = detailed_balance_residual(p_is, pi_is);
    rep.residual_mix = detailed_balance_residual(p_mix, pi_is);
    rep.tv_mix_stationary_to_pi_is = tv_distance(stationary(p_mix, 1e-13, 5000000), pi_is);
    rep.norm1_is_levy = one_norm_diff(p_is, p_levy);
    rep.error_gap = error_gap_estimate(cfg.algo.p_j, rep.norm1_is_levy);
    if (cfg.algo.mu) {
        const GroundTruth truth = solve_least_squares(data);
        double dist0 = 0.0;
        for (double v : truth.x_star) dist0 += v * v;
        rep.step_cap = theoretical_step_cap(data.l_bar, *cfg.algo.mu,
                                            static_cast<double>(cfg.algo.total_updates),
                                            rep.tau_mix_mix, truth.sigma_star_sq, dist0);
    }
    return rep;
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg, const std::string& param,
                            const std::vector<double>& values, int replicas, int workers) {
    if (values.empty()) throw ConfigError("sweep value list is empty");
    if (replicas < 1) throw ConfigError("sweep needs at least one replica");
    static const std::set<std::string> sweepable = {"p_j", "p_d", "r", "gamma", "T", "t_switch"};
    if (!sweepable.count(param)) throw ConfigError("unknown sweep parameter: " + param);

    const int total = static_cast<int>(values.size()) * replicas;
    std::vector<SweepRow> rows(total);
    const int nw = workers > 0 ? workers : omp_get_max_threads();
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(nw)
    for (int idx = 0; idx < total; ++idx) {
        try {
            const int vi = idx / replicas;
            const int rep = idx % replicas;
            ExperimentConfig local = cfg;
            const double value = values[vi];
            if (param == "p_j") local.algo.p_j = value;
            else if (param == "p_d") local.algo.p_d = value;
            else if (param == "r") local.algo.r = static_cast<int>(value);
            else if (param == "gamma") {
                local.algo.gamma = value;
                local.algo.auto_gamma = false;
            } else if (param == "T") local.algo.total_updates = static_cast<std::uint64_t>(value);
            else if (param == "t_switch") local.algo.t_switch = static_cast<std::uint64_t>(value);
            SweepRow row;
            row.param = param;
            row.value = value;
            row.replica = rep;
            row.seed = cfg.algo.seed + static_cast<std::uint64_t>(rep);
            row.summary = run_experiment(local, static_cast<std::uint64_t>(rep)).summary;
            rows[idx] = std::move(row);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_summary(const RunSummary& s, const std::string& echo, std::ostream& out) {
    out << "# rwalk-summary v1\n";
    out << "# config: " << echo << "\n";
    out << "gamma " << fmt17(s.gamma) << "\n";
    out << "final_mse " << fmt17(s.final_mse) << "\n";
    out << "final_dist_sq " << fmt17(s.final_dist_sq) << "\n";
    out << "plateau_mse " << fmt17(s.plateau_mse) << "\n";
    out << "plateau_dist_sq " << fmt17(s.plateau_dist_sq) << "\n";
    out << "comm_count " << s.comm_count << "\n";
    out << "visit_count " << s.visit_count << "\n";
    out << "updates " << s.total_updates << "\n";
    out << "comm_per_update " << fmt17(s.comm_per_update) << "\n";
    out << "visits_per_update " << fmt17(s.visits_per_update) << "\n";
    out << "heavy_share " << fmt17(s.heavy_share) << "\n";
    out << "max_dwell " << s.max_dwell << "\n";
    out << "mean_heavy_dwell " << fmt17(s.mean_heavy_dwell) << "\n";
    if (s.error_gap) out << "error_gap_estimate " << fmt17(*s.error_gap) << "\n";
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& echo,
                     std::ostream& out) {
    out << "# rwalk-sweep v1\n";
    out << "# config: " << echo << "\n";
    out << "param,value,replica,seed,gamma,final_mse,final_dist_sq,plateau_mse,plateau_dist_sq,"
           "comm_count,visit_count,updates,comm_per_update,visits_per_update,heavy_share,"
           "max_dwell,mean_heavy_dwell,error_gap\n";
    for (const auto& row : rows) {
        const auto& s = row.summary;
        out << row.param << "," << fmt17(row.value) << "," << row.replica << "," << row.seed << ","
            << fmt17(s.gamma) << "," << fmt17(s.final_mse) << "," << fmt17(s.final_dist_sq) << ","
            << fmt17(s.plateau_mse) << "," << fmt17(s.plateau_dist_sq) << "," << s.comm_count
            << "," << s.visit_count << "," << s.total_updates << "," << fmt17(s.comm_per_update)
            << "," << fmt17(s.visits_per_update) << "," << fmt17(s.heavy_share) << ","
            << s.max_dwell << "," << fmt17(s.mean_heavy_dwell) << ","
            << (s.error_gap ? fmt17(*s.error_gap) : "") << "\n";
    }
}

void write_diagnose_report(const DiagnoseReport& r, const std::string& echo, std::ostream& out) {
    out << "# rwalk-diagnose v1\n";
    out << "# config: " << echo << "\n";
    out << "tau_mix_is " << r.tau_mix_is << "\n";
    out << "tau_mix_mix " << r.tau_mix_mix << "\n";
    out << "detailed_balance_residual_is " << fmt17(r.residual_is) << "\n";
    out << "detailed_balance_residual_mix " << fmt17(r.residual_mix) << "\n";
    out << "tv_mix_stationary_to_pi_is " << fmt17(r.tv_mix_stationary_to_pi_is) << "\n";
    out << "norm1_is_levy " << fmt17(r.norm1_is_levy) << "\n";
    out << "error_gap_estimate " << fmt17(r.error_gap) << "\n";
    if (r.step_cap) {
        out << "step_cap " << fmt17(r.step_cap->cap) << "\n";
        out << "step_cap_log_branch_vacuous " << (r.step_cap->log_branch_vacuous ? 1 : 0) << "\n";
    }
}

}  // namespace rwalk
