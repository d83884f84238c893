#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rwalk/error.hpp"
#include "rwalk/harness.hpp"

using namespace rwalk;
namespace fs = std::filesystem;

namespace {

const char* kBaseConfig = R"({
  "graph": {"type": "ring", "n": 30, "seed": 3},
  "data": {"d": 4, "sigma_l_sq": 1.0, "sigma_h_sq": 100.0, "p_high": 0.0, "min_heavy": 1, "seed": 5},
  "algo": {"sampler_kind": "mhlj", "gamma": 0.0005, "T": 20000,
           "p_j": 0.1, "p_d": 0.5, "r": 3, "seed": 9},
  "output": {"csv": "trace.csv", "log_every": 50}
})";

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing accepts the reference layout") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    CHECK(cfg.graph.type == "ring");
    CHECK(cfg.graph.n == 30);
    CHECK(cfg.data.min_heavy == 1);
    CHECK(cfg.algo.sampler == SamplerKind::Mhlj);
    CHECK(cfg.algo.p_j == 0.1);
    CHECK(cfg.algo.total_updates == 20000);
    CHECK(cfg.output.log_every == 50);
    CHECK_FALSE(cfg.algo.auto_gamma);
}

TEST_CASE("config parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    // missing required field
    CHECK_THROWS_AS(parse_config(R"({"graph": {"type": "ring", "n": 5, "seed": 1},
        "data": {"d": 2, "sigma_l_sq": 1.0, "seed": 2},
        "algo": {"sampler_kind": "is-mh", "gamma": 0.1, "seed": 3}})"),
                    ConfigError);
    // unknown field
    CHECK_THROWS_AS(parse_config(R"({"graph": {"type": "ring", "n": 5, "seed": 1, "extra": 1},
        "data": {"d": 2, "sigma_l_sq": 1.0, "seed": 2},
        "algo": {"sampler_kind": "is-mh", "gamma": 0.1, "T": 10, "seed": 3}})"),
                    ConfigError);
    // typo'd sweepable name inside algo
    CHECK_THROWS_AS(parse_config(R"({"graph": {"type": "ring", "n": 5, "seed": 1},
        "data": {"d": 2, "sigma_l_sq": 1.0, "seed": 2},
        "algo": {"sampler_kind": "is-mh", "gamma": 0.1, "T": 10, "seed": 3, "pj": 0.1}})"),
                    ConfigError);
    // mhlj without jump parameters
    CHECK_THROWS_AS(parse_config(R"({"graph": {"type": "ring", "n": 5, "seed": 1},
        "data": {"d": 2, "sigma_l_sq": 1.0, "seed": 2},
        "algo": {"sampler_kind": "mhlj", "gamma": 0.1, "T": 10, "seed": 3}})"),
                    ConfigError);
    // bad sampler
    CHECK_THROWS_AS(parse_config(R"({"graph": {"type": "ring", "n": 5, "seed": 1},
        "data": {"d": 2, "sigma_l_sq": 1.0, "seed": 2},
        "algo": {"sampler_kind": "gossip", "gamma": 0.1, "T": 10, "seed": 3}})"),
                    ConfigError);
}

TEST_CASE("gamma accepts auto-grid or a number only") {
    std::string with_auto(kBaseConfig);
    const auto pos = with_auto.find("0.0005");
    with_auto.replace(pos, 6, "\"auto-grid\"");
    CHECK(parse_config(with_auto).algo.auto_gamma);

    with_auto.replace(with_auto.find("\"auto-grid\""), 11, "\"biggest\"");
    CHECK_THROWS_AS(parse_config(with_auto), ConfigError);
}

TEST_CASE("auto_grid_gamma picks a stable settled step") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const Graph g = build_graph(cfg.graph);
    DataParams dp = cfg.data;
    dp.n = g.n;
    const Dataset data = build_dataset(dp);
    const GroundTruth truth = solve_least_squares(data);
    const double gamma = auto_grid_gamma(data, g, truth, 20000, 9);
    CHECK(gamma > 0.0);
    CHECK(gamma <= 1.0);
    CHECK(gamma == auto_grid_gamma(data, g, truth, 20000, 9));  // deterministic

    RunConfig probe;
    probe.gamma = gamma;
    probe.total_updates = 20000;
    probe.sampler = SamplerKind::UniformMh;
    probe.seed = 9;
    const Trace t = run(data, g, truth, probe);
    const double mse0 = global_mse(data, std::vector<double>(data.d, 0.0));
    // the accepted step satisfies the settled-run conditions
    double lo = t.records.front().mse, hi = lo;
    for (const auto& rec : t.records) {
        lo = std::min(lo, rec.mse);
        hi = std::max(hi, rec.mse);
    }
    CHECK(t.plateau_mse() <= mse0);
    CHECK(hi <= 1e6 * mse0);
    CHECK(t.plateau_mse() <= 2.0 * lo);
}

TEST_CASE("run_experiment produces a coherent summary") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const RunOutput out = run_experiment(cfg);
    CHECK(out.summary.total_updates == 20000);
    CHECK(out.summary.visits_per_update >= 1.0 - 1e-9);
    CHECK(out.summary.visits_per_update <= expected_comm_bound(0.1, 0.5) + 0.05);
    CHECK(out.summary.comm_per_update <= out.summary.visits_per_update);
    CHECK(out.summary.error_gap.has_value());
    CHECK(*out.summary.error_gap > 0.0);
    CHECK(out.trace.records.back().iter == 20000);
}

TEST_CASE("diagnose reports the chain-level quantities") {
    std::string text(kBaseConfig);
    text.replace(text.find("\"n\": 30"), 7, "\"n\": 20");
    ExperimentConfig cfg = parse_config(text);
    cfg.algo.mu = 0.5;
    cfg.data.min_heavy = 1;
    const DiagnoseReport rep = diagnose(cfg);
    CHECK(rep.tau_mix_is >= 1);
    CHECK(rep.tau_mix_mix >= 1);
    CHECK(rep.tau_mix_mix <= rep.tau_mix_is);
    CHECK(rep.residual_is < 1e-13);
    CHECK(rep.residual_mix > 1e-6);
    CHECK(rep.norm1_is_levy > 0.0);
    CHECK(rep.norm1_is_levy <= 2.0);
    CHECK(rep.error_gap == doctest::Approx(0.01 * rep.norm1_is_levy * rep.norm1_is_levy));
    CHECK(rep.step_cap.has_value());

    std::ostringstream out;
    write_diagnose_report(rep, cfg.echo, out);
    CHECK(out.str().find("tau_mix_is") != std::string::npos);
}

TEST_CASE("sweep layout and worker independence") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const auto rows1 = sweep(cfg, "p_j", {0.4, 0.2}, 2, 1);
    REQUIRE(rows1.size() == 4);
    CHECK(rows1[0].value == 0.4);
    CHECK(rows1[0].replica == 0);
    CHECK(rows1[1].replica == 1);
    CHECK(rows1[2].value == 0.2);
    CHECK(rows1[3].seed == cfg.algo.seed + 1);

    const auto rows4 = sweep(cfg, "p_j", {0.4, 0.2}, 2, 4);
    std::ostringstream csv1, csv4;
    write_sweep_csv(rows1, cfg.echo, csv1);
    write_sweep_csv(rows4, cfg.echo, csv4);
    CHECK(csv1.str() == csv4.str());

    CHECK_THROWS_AS(sweep(cfg, "p_j", {}, 2, 1), ConfigError);
    CHECK_THROWS_AS(sweep(cfg, "bogus", {0.1}, 1, 1), ConfigError);
}

TEST_CASE("cli binary runs end to end") {
    TempDir dir("rwalk-cli-test");
    const fs::path cfg_path = dir.path / "cfg.json";
    {
        std::ofstream out(cfg_path);
        out << kBaseConfig;
    }
    const std::string cli = RWALK_CLI_PATH;
    const fs::path out1 = dir.path / "out1";
    const fs::path out2 = dir.path / "out2";
    auto run_cmd = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) / 256;
    };
    CHECK(run_cmd("run --config " + cfg_path.string() + " --out " + out1.string()) == 0);
    CHECK(run_cmd("run --config " + cfg_path.string() + " --out " + out2.string()) == 0);
    CHECK(fs::exists(out1 / "trace.csv"));
    CHECK(fs::exists(out1 / "summary.txt"));
    CHECK(read_file(out1 / "trace.csv") == read_file(out2 / "trace.csv"));
    CHECK(read_file(out1 / "trace.csv").find("# rwalk-trace v1") != std::string::npos);

    CHECK(run_cmd("matrix --config " + cfg_path.string() + " --out " + out1.string()) == 0);
    CHECK(fs::exists(out1 / "matrix_mh_importance.txt"));
    CHECK(fs::exists(out1 / "stationary_pi_is.txt"));

    CHECK(run_cmd("sweep --config " + cfg_path.string() + " --out " + out1.string() +
                  " --sweep p_j=0.2,0.1 --replicas 2") == 0);
    CHECK(fs::exists(out1 / "sweep.csv"));

    // config errors exit 2 and leave no output file
    const fs::path bad_path = dir.path / "bad.json";
    {
        std::ofstream out(bad_path);
        out << R"({"graph": {"type": "ring"}})";
    }
    const fs::path out3 = dir.path / "out3";
    CHECK(run_cmd("run --config " + bad_path.string() + " --out " + out3.string()) == 2);
    CHECK_FALSE(fs::exists(out3 / "trace.csv"));

    // divergence exits 3
    std::string diverging(kBaseConfig);
    diverging.replace(diverging.find("0.0005"), 6, "1000.0");
    const fs::path div_path = dir.path / "div.json";
    {
        std::ofstream out(div_path);
        out << diverging;
    }
    CHECK(run_cmd("run --config " + div_path.string() + " --out " + out3.string()) == 3);
}

TEST_CASE("summary writer covers the reported fields") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const RunOutput out = run_experiment(cfg);
    std::ostringstream text;
    write_summary(out.summary, cfg.echo, text);
    for (const char* key : {"gamma", "final_mse", "final_dist_sq", "comm_per_update",
                            "visits_per_update", "heavy_share", "max_dwell", "error_gap_estimate"})
        CHECK(text.str().find(key) != std::string::npos);
}
