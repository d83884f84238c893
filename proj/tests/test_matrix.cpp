#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rwalk/error.hpp"
#include "rwalk/matrix.hpp"
#include "rwalk/reference.hpp"
#include "test_util.hpp"

using namespace rwalk;

namespace {

const std::vector<double> kHeavyL5 = {100.0, 1.0, 1.0, 1.0, 1.0};

Graph star4() { return make_graph(4, {{0, 1}, {0, 2}, {0, 3}}, "star"); }

}  // namespace

TEST_CASE("simple_rw rows") {
    const auto p = simple_rw(build_ring(5));
    CHECK(p.at(0, 1) == 0.5);
    CHECK(p.at(0, 4) == 0.5);
    CHECK(p.at(0, 0) == 0.0);

    const auto s = simple_rw(star4());
    CHECK(s.at(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    for (int i = 0; i < 4; ++i) {
        double sum = 0.0;
        for (const auto& e : s.rows[i]) sum += e.p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("mh_uniform values") {
    // regular graph: equals simple_rw, zero diagonal
    const Graph ring = build_ring(6);
    CHECK(mh_uniform(ring) == simple_rw(ring));

    // path 0-1-2
    const Graph path = build_grid2d(1, 3);
    const auto p = mh_uniform(path);
    CHECK(p.at(1, 0) == doctest::Approx(0.5));
    CHECK(p.at(0, 1) == doctest::Approx(0.5));
    CHECK(p.at(0, 0) == doctest::Approx(0.5));

    const auto pi = stationary(mh_uniform(build_ring(7)), 1e-14, 1000000);
    CHECK(tv_distance(pi, uniform_distribution(7)) < 1e-10);
}

TEST_CASE("mh_importance on the heavy 5-ring") {
    const auto p = mh_importance(build_ring(5), kHeavyL5);
    CHECK(p.at(0, 1) == doctest::Approx(1.0 / 200).epsilon(1e-15));
    CHECK(p.at(0, 0) == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(p.at(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

    const Graph ring = build_ring(8);
    CHECK(mh_importance(ring, std::vector<double>(8, 3.5)) == mh_uniform(ring));

    CHECK_THROWS_AS(mh_importance(build_ring(3), {1.0, 0.0, 1.0}), InvalidParameter);
}

TEST_CASE("mh_importance satisfies detailed balance") {
    const Graph g = build_ring(50);
    const auto lipschitz = testutil::random_lipschitz(50, 99);
    const auto p = mh_importance(g, lipschitz);
    const auto pi = importance_distribution(lipschitz);
    CHECK(detailed_balance_residual(p, pi) < 1e-14);
}

TEST_CASE("mh_target agrees with mh_importance and recovers targets") {
    const Graph g = build_ring(5);
    CHECK(mh_target(g, uniform_distribution(5)) == mh_uniform(g));

    // irregular degrees: agreement within rounding of the target ratios
    const Graph path = build_grid2d(1, 4);
    const auto via_uniform_target = mh_target(path, uniform_distribution(4));
    const auto direct_uniform = mh_uniform(path);
    for (int i = 0; i < 4; ++i)
        for (const auto& e : via_uniform_target.rows[i])
            CHECK(std::abs(e.p - direct_uniform.at(i, e.col)) <= 1e-15);

    const auto direct = mh_importance(g, kHeavyL5);
    const auto via_target = mh_target(g, importance_distribution(kHeavyL5));
    for (int i = 0; i < 5; ++i)
        for (const auto& e : direct.rows[i])
            CHECK(std::abs(e.p - via_target.at(i, e.col)) <= 1e-15);

    CHECK_THROWS_AS(mh_target(g, Distribution{{0.5, 0.5, 0.0, 0.0, 0.0}}), InvalidParameter);

    const Graph er = build_erdos_renyi(30, 0.3, 5);
    Rng rng(17);
    std::vector<double> w(30);
    for (auto& v : w) v = 0.1 + rng.uniform01();
    const auto target = make_distribution(w);
    const auto st = stationary(mh_target(er, target), 1e-14, 2000000);
    CHECK(tv_distance(st, target) < 1e-10);
}

TEST_CASE("mh_target recovers 20 random targets on 5 random graphs") {
    int case_id = 0;
    for (std::uint64_t gseed = 0; gseed < 5; ++gseed) {
        const Graph g = build_erdos_renyi(10 + 6 * static_cast<int>(gseed), 0.3, 100 + gseed);
        for (int t = 0; t < 4; ++t) {
            Rng rng(1000 + 31 * case_id++);
            std::vector<double> w(g.n);
            for (auto& v : w) v = std::exp(2.0 * (rng.uniform01() - 0.5));
            const auto target = make_distribution(w);
            const auto st = stationary(mh_target(g, target), 1e-13, 5000000);
            CHECK(tv_distance(st, target) < 1e-8);
        }
    }
}

TEST_CASE("levy_matrix hand example on ring(5)") {
    // weights (2/3, 1/3); A^2 from node 0 has walk counts {0:2, 2:1, 3:1}
    const auto p = levy_matrix(build_ring(5), 0.5, 2);
    CHECK(p.at(0, 0) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(p.at(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(p.at(0, 4) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(p.at(0, 2) == doctest::Approx(1.0 / 12).epsilon(1e-15));
    CHECK(p.at(0, 3) == doctest::Approx(1.0 / 12).epsilon(1e-15));
    double sum = 0.0;
    for (const auto& e : p.rows[0]) sum += e.p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("levy_matrix r=1 equals simple_rw") {
    const Graph g = build_watts_strogatz(40, 4, 0.2, 8);
    for (double p_d : {0.1, 0.5, 0.9}) {
        const auto lv = levy_matrix(g, p_d, 1);
        const auto rw = simple_rw(g);
        for (int i = 0; i < g.n; ++i)
            for (const auto& e : lv.rows[i])
                CHECK(std::abs(e.p - rw.at(i, e.col)) <= 1e-15);
    }
}

TEST_CASE("truncated geometric weights sum to one") {
    for (double p_d : {0.1, 0.5, 0.9}) {
        for (int r : {1, 3, 8}) {
            const double denom = 1.0 - std::pow(1.0 - p_d, r);
            double sum = 0.0;
            for (int i = 1; i <= r; ++i) sum += p_d * std::pow(1.0 - p_d, i - 1) / denom;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("levy_matrix matches the dense power oracle") {
    const std::vector<Graph> graphs = {build_ring(9), build_grid2d(4, 5),
                                       build_erdos_renyi(30, 0.2, 3),
                                       build_watts_strogatz(24, 4, 0.3, 4)};
    for (const auto& g : graphs) {
        for (const bool include_self : {false, true}) {
            const auto sparse = levy_matrix(g, 0.4, 4, include_self);
            const auto oracle = testutil::dense_levy(g, 0.4, 4, include_self);
            const auto got = testutil::dense_from(sparse);
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j)
                    CHECK(std::abs(got[i][j] - oracle[i][j]) <= 1e-12);
            CHECK_NOTHROW(validate_matrix(sparse, g));
        }
    }
}

TEST_CASE("levy_matrix parallel path is bit-identical to serial") {
    const Graph g = build_watts_strogatz(120, 6, 0.2, 21);
    const auto par = levy_matrix(g, 0.5, 5);
    const auto ser = reference::levy_matrix(g, 0.5, 5);
    CHECK(par == ser);
}

TEST_CASE("levy_matrix detects walk-count overflow") {
    // K_100: length-11 walk counts reach 99^11 > 2^64
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < 100; ++u)
        for (int v = u + 1; v < 100; ++v) edges.emplace_back(u, v);
    const Graph g = make_graph(100, edges, "complete");
    CHECK_THROWS_AS(levy_matrix(g, 0.5, 11), std::overflow_error);
    CHECK_THROWS_AS(levy_matrix(make_graph(1, {}), 0.5, 2), InvalidParameter);
}

TEST_CASE("mix endpoints and convex combination") {
    const Graph g = build_ring(5);
    const auto a = mh_importance(g, kHeavyL5);
    const auto b = levy_matrix(g, 0.5, 3);
    CHECK(mix(a, b, 0.0) == a);
    CHECK(mix(a, b, 1.0) == b);
    const auto m = mix(a, b, 0.1);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(m.at(i, j) == doctest::Approx(0.9 * a.at(i, j) + 0.1 * b.at(i, j)).epsilon(1e-15));

    const auto c = simple_rw(build_ring(6));
    CHECK_THROWS_AS(mix(a, c, 0.5), DimensionMismatch);
}

TEST_CASE("stationary recovers pi_IS") {
    const Graph g = build_ring(50);
    const auto lipschitz = testutil::random_lipschitz(50, 7);
    const auto st = stationary(mh_importance(g, lipschitz), 1e-15, 20000000);
    CHECK(tv_distance(st, importance_distribution(lipschitz)) < 1e-10);
}

TEST_CASE("periodic chains surface as mixing failures") {
    // simple_rw on an even ring has period 2. The uniform start is its exact
    // fixed point, so the power iteration returns uniform; the missing
    // aperiodicity shows up in mixing_time, whose row iterates oscillate.
    const auto p = simple_rw(build_ring(6));
    const auto st = stationary(p, 1e-12, 20000);
    CHECK(tv_distance(st, uniform_distribution(6)) < 1e-12);
    CHECK_THROWS_AS(mixing_time(p, 0.25, 2000), NonConvergence);
}

TEST_CASE("stationary agrees with the dense squaring oracle") {
    const Graph g = build_erdos_renyi(25, 0.25, 13);
    const auto lipschitz = testutil::random_lipschitz(25, 14);
    const auto p = mh_importance(g, lipschitz);
    const auto st = stationary(p, 1e-15, 5000000);
    const auto oracle = testutil::dense_stationary(testutil::dense_from(p));
    for (int i = 0; i < g.n; ++i) CHECK(std::abs(st[i] - oracle[i]) <= 1e-10);
}

TEST_CASE("tv_distance basics") {
    const Distribution a{{0.5, 0.5}};
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(Distribution{{1.0, 0.0}}, Distribution{{0.0, 1.0}}) == 1.0);
    CHECK(tv_distance(a, Distribution{{1.0, 0.0}}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(tv_distance(a, uniform_distribution(3)), DimensionMismatch);
}

TEST_CASE("mixing_time on the complete graph is one step") {
    for (int n : {5, 8}) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
        const auto p = mh_uniform(make_graph(n, edges, "complete"));
        CHECK(mixing_time(p, 0.25, 100) == 1);
    }
}

TEST_CASE("mixing_time: jumps mix faster than plain importance MH") {
    const Graph g = build_ring(50);
    std::vector<double> lipschitz(50, 1.0);
    lipschitz[0] = 100.0;
    const auto p_is = mh_importance(g, lipschitz);
    const auto p_mix = mix(p_is, levy_matrix(g, 0.5, 3), 0.1);
    const int tau_is = mixing_time(p_is, 0.25, 100000);
    const int tau_mix = mixing_time(p_mix, 0.25, 100000);
    CHECK(tau_mix <= tau_is);
    CHECK(tau_is == reference::mixing_time(p_is, 0.25, 100000));
}

TEST_CASE("mixing_time rejects reducible chains") {
    RowStochasticMatrix identity;
    identity.n = 4;
    identity.rows.resize(4);
    for (int i = 0; i < 4; ++i) identity.rows[i] = {{i, 1.0}};
    CHECK_THROWS_AS(mixing_time(identity, 0.25, 50), NonConvergence);
}

TEST_CASE("detailed balance holds for MH and breaks under mixing") {
    const Graph g = build_ring(5);
    const auto p_is = mh_importance(g, kHeavyL5);
    const auto pi = importance_distribution(kHeavyL5);
    CHECK(detailed_balance_residual(p_is, pi) < 1e-14);

    const auto mixed = mix(p_is, levy_matrix(g, 0.5, 3), 0.1);
    CHECK(detailed_balance_residual(mixed, pi) > 1e-6);

    // symmetric kernel with uniform target is exactly reversible
    const auto sym = simple_rw(build_ring(8));
    CHECK(detailed_balance_residual(sym, uniform_distribution(8)) == 0.0);
}

TEST_CASE("one_norm_diff against the dense oracle") {
    const Graph g = build_ring(5);
    const auto a = mh_importance(g, kHeavyL5);
    const auto b = levy_matrix(g, 0.5, 2);
    CHECK(one_norm_diff(a, a) == 0.0);
    const double got = one_norm_diff(a, b);
    CHECK(got >= 0.0);
    CHECK(got <= 2.0);
    CHECK(got == doctest::Approx(testutil::dense_one_norm_diff(
                     testutil::dense_from(a), testutil::dense_from(b))).epsilon(1e-14));
    CHECK_THROWS_AS(one_norm_diff(a, simple_rw(build_ring(7))), DimensionMismatch);
}

TEST_CASE("stationary perturbation grows with the jump weight") {
    const Graph g = build_ring(5);
    const auto p_is = mh_importance(g, kHeavyL5);
    const auto p_levy = levy_matrix(g, 0.5, 3);
    const auto pi = importance_distribution(kHeavyL5);
    double prev = -1.0;
    for (double p_j : {0.0, 0.05, 0.1, 0.2, 0.4}) {
        const auto st = stationary(mix(p_is, p_levy, p_j), 1e-14, 2000000);
        const double tv = tv_distance(st, pi);
        CHECK(tv >= prev);
        prev = tv;
    }
}

TEST_CASE("builders declare valid support") {
    const Graph g = build_erdos_renyi(20, 0.2, 33);
    CHECK_NOTHROW(validate_matrix(simple_rw(g), g));
    CHECK_NOTHROW(validate_matrix(mh_uniform(g), g));
    CHECK_NOTHROW(validate_matrix(mh_importance(g, testutil::random_lipschitz(20, 1)), g));
    CHECK_NOTHROW(validate_matrix(levy_matrix(g, 0.3, 3), g));

    // a 2-hop entry is outside the declared 1-hop support
    RowStochasticMatrix bad = simple_rw(build_ring(6));
    bad.rows[0] = {{2, 0.5}, {4, 0.5}};
    CHECK_THROWS_AS(validate_matrix(bad, build_ring(6)), InvalidParameter);
}

TEST_CASE("matrix dump format") {
    const auto p = simple_rw(build_ring(3));
    std::ostringstream out;
    save_matrix(p, out);
    CHECK(out.str() == "# n=3 kind=simple-rw\n"
                       "0 1 0.5\n0 2 0.5\n1 0 0.5\n1 2 0.5\n2 0 0.5\n2 1 0.5\n");
}
