#include <doctest.h>

#include <cmath>

#include "bisper/engine.hpp"
#include "bisper/oracle.hpp"
#include "test_support.hpp"

using namespace bisper;

TEST_CASE("pseudo-inverse resistance: series and parallel circuits") {
    const Graph tri = make_cycle(3);
    CHECK(exact_er_pseudoinverse(tri, 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(exact_er_pseudoinverse(tri, 2, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(exact_er_pseudoinverse(make_path(4), 0, 3) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(exact_er_pseudoinverse(make_path(2), 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact_er_pseudoinverse(make_cycle(5), 0, 1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(exact_er_pseudoinverse(tri, 1, 1) == 0.0);
    CHECK_THROWS_AS(exact_er_pseudoinverse(tri, 0, 3), std::invalid_argument);
}

TEST_CASE("pseudo-inverse resistance is a metric") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = testing::random_connected_graph(25, 0.12, seed + 40);
        CounterRng rng(seed);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = static_cast<NodeId>(rng.below(g.num_nodes()));
            const auto b = static_cast<NodeId>(rng.below(g.num_nodes()));
            const auto c = static_cast<NodeId>(rng.below(g.num_nodes()));
            const double ab = exact_er_pseudoinverse(g, a, b);
            CHECK(ab == doctest::Approx(exact_er_pseudoinverse(g, b, a)).epsilon(1e-10));
            CHECK(ab == doctest::Approx(testing::pinv_resistance(g, a, b)).epsilon(1e-9));
            CHECK(ab <= exact_er_pseudoinverse(g, a, c) + exact_er_pseudoinverse(g, c, b) + 1e-12);
        }
    }
}

TEST_CASE("truncated resistance by power iteration") {
    const Graph tri = make_cycle(3);
    CHECK(truncated_er_power_iteration(tri, 0, 1, 0) == doctest::Approx(1.0));
    CHECK(truncated_er_power_iteration(tri, 0, 1, 50) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(truncated_er_power_iteration(tri, 2, 2, 50) == 0.0);
}

TEST_CASE("truncation error bound with the derived walk length") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = testing::random_connected_graph(12 + static_cast<std::uint32_t>(seed * 4), 0.1, seed + 500);
        const double lambda = testing::dense_spectral_radius(g);
        CounterRng rng(seed);
        for (double eps : {0.1, 0.01, 0.001}) {
            const auto s = static_cast<NodeId>(rng.below(g.num_nodes()));
            auto t = static_cast<NodeId>(rng.below(g.num_nodes()));
            if (t == s) t = (s + 1) % g.num_nodes();
            const std::uint32_t l_max = compute_l_max(lambda, eps, g.degree(s), g.degree(t));
            const double exact = exact_er_pseudoinverse(g, s, t);
            CHECK(std::abs(exact - truncated_er_power_iteration(g, s, t, l_max)) <= eps / 2);
            // successive truncations settle
            const double longer = truncated_er_power_iteration(g, s, t, 2 * l_max);
            CHECK(std::abs(longer - exact) <= std::abs(truncated_er_power_iteration(g, s, t, l_max) - exact) + 1e-12);
        }
    }
}

TEST_CASE("dense transition powers") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = testing::random_connected_graph(10 + static_cast<std::uint32_t>(seed * 5), 0.15, seed + 70);
        const NodeId s = 0, t = g.num_nodes() - 1;
        const auto powers = dense_transition_powers(g, s, t, 20);
        const auto reference = testing::matrix_powers(g, 20);
        for (std::uint32_t l = 0; l <= 20; ++l) {
            double sum_s = 0.0, sum_t = 0.0;
            for (NodeId v = 0; v < g.num_nodes(); ++v) {
                REQUIRE(powers.from_s[l][v] >= 0.0);
                REQUIRE(powers.from_s[l][v] == doctest::Approx(reference[l](v, s)).epsilon(1e-12));
                sum_s += powers.from_s[l][v];
                sum_t += powers.from_t[l][v];
            }
            CHECK(std::abs(sum_s - 1.0) <= 1e-12);
            CHECK(std::abs(sum_t - 1.0) <= 1e-12);
            // p^(l)(s, t) / d(t) == p^(l)(t, s) / d(s)
            CHECK(std::abs(powers.from_s[l][t] / g.degree(t) - powers.from_t[l][s] / g.degree(s)) <= 1e-12);
        }
    }
}

TEST_CASE("property: transition-probability symmetry on all pairs") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Graph g = testing::random_connected_graph(15 + static_cast<std::uint32_t>(seed * 7), 0.1, seed + 90);
        const auto powers = testing::matrix_powers(g, 20);
        double worst = 0.0;
        for (std::uint32_t l = 0; l <= 20; ++l)
            for (NodeId a = 0; a < g.num_nodes(); ++a)
                for (NodeId b = 0; b < g.num_nodes(); ++b)
                    worst = std::max(worst, std::abs(powers[l](b, a) / g.degree(b) - powers[l](a, b) / g.degree(a)));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("exact sample expectation") {
    SUBCASE("full push") {
        const Graph g = testing::random_connected_graph(14, 0.2, 12);
        const QueryParams params{.s = 0, .t = 5, .l_max = 8};
        const PushState state = push_phase(g, params, 0.0);
        CHECK(exact_t_reference(state, dense_transition_powers(g, 0, 5, 8)) == 0.0);
    }
    SUBCASE("same endpoint") {
        const Graph g = testing::random_connected_graph(14, 0.2, 13);
        const QueryParams params{.s = 4, .t = 4, .l_max = 8};
        const PushState state = push_phase(g, params, 0.03);
        CHECK(exact_t_reference(state, dense_transition_powers(g, 4, 4, 8)) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("no-push state matches the sample average") {
        const Graph g = largest_connected_component({{0, 1}, {1, 2}, {2, 0}, {2, 3}});
        const std::uint32_t l_max = 5;
        const QueryParams params{.s = 0, .t = 3, .l_max = l_max};
        const PushState state = push_phase(g, params, 1.0);
        const double exact = exact_t_reference(state, dense_transition_powers(g, 0, 3, l_max));
        // together with the (zero) reserve part this is the truncated resistance
        CHECK(exact == doctest::Approx(truncated_er_power_iteration(g, 0, 3, l_max)).epsilon(1e-12));

        const int draws = 100000;
        CounterRng rs(31, 1), rt(31, 2);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double x = compute_t_i(state, sample_walk(g, 0, l_max, rs), sample_walk(g, 3, l_max, rt));
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / draws;
        const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
        CHECK(std::abs(mean - exact) <= 3.0 * se);
    }
    SUBCASE("too few powers") {
        const Graph g = make_cycle(5);
        const PushState state = push_phase(g, {.s = 0, .t = 2, .l_max = 6}, 0.1);
        CHECK_THROWS_AS(exact_t_reference(state, dense_transition_powers(g, 0, 2, 3)), std::invalid_argument);
    }
}

TEST_CASE("baselines") {
    const Graph tri = make_cycle(3);
    const std::uint32_t l_max = compute_l_max(0.5, 0.05, 2, 2);

    SUBCASE("sampling only") {
        const auto est = mc_only_baseline(tri, {.s = 0, .t = 2, .l_max = l_max, .epsilon = 0.05, .seed = 5});
        CHECK(std::abs(est.value - 2.0 / 3.0) <= 0.05);
        CHECK(est.pushes.push_ops == 0);
        CHECK(est.policy.regime == PushRegime::kNoPush);
        CHECK(mc_only_baseline(tri, {.s = 1, .t = 1, .l_max = l_max, .epsilon = 0.05}).value == 0.0);
    }
    SUBCASE("push only") {
        const auto est = push_only_baseline(tri, {.s = 0, .t = 1, .l_max = 50, .epsilon = 0.05});
        CHECK(std::abs(est.value - 2.0 / 3.0) <= 1e-9);
        CHECK(est.walks_used == 0);
        CHECK_FALSE(est.stopped_early);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Graph g = testing::random_connected_graph(20 + static_cast<std::uint32_t>(seed), 0.1, seed + 900);
            const QueryParams params{.s = 1, .t = 3, .l_max = 30};
            CHECK(std::abs(push_only_baseline(g, params).value - truncated_er_power_iteration(g, 1, 3, 30)) <= 1e-10);
        }
    }
    SUBCASE("sampling only uses at least as many walks as the balanced estimator") {
        const Graph g = gen_erdos_renyi(2000, 0.005, 33);
        const double lambda = estimate_spectral_radius(g, 1e-7).lambda;
        CounterRng rng(6);
        for (int q = 0; q < 5; ++q) {
            const auto s = static_cast<NodeId>(rng.below(g.num_nodes()));
            const auto t = static_cast<NodeId>(rng.below(g.num_nodes()));
            if (s == t) continue;
            QueryParams params{.s = s, .t = t, .epsilon = 0.01, .failure_prob = 0.01, .seed = 100u + q};
            params.l_max = compute_l_max(lambda, params.epsilon, g.degree(s), g.degree(t));
            const auto bi = bisper_query(g, params);
            REQUIRE(bi.policy.regime == PushRegime::kBalanced);
            const auto mc = mc_only_baseline(g, params);
            CHECK(mc.walks_used >= bi.walks_used);
            const double truth = truncated_er_power_iteration(g, s, t, params.l_max);
            CHECK(std::abs(bi.value - truth) < params.epsilon);
            CHECK(std::abs(mc.value - truth) < params.epsilon);
        }
    }
}
