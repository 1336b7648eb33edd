#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "bisper/bench.hpp"
#include "test_support.hpp"

using namespace bisper;

TEST_CASE("query pair sampling") {
    const Graph tri = make_cycle(3);
    auto pairs = sample_query_pairs(tri, 3, 1);
    std::set<QueryPair> unordered;
    for (auto [a, b] : pairs) {
        CHECK(a != b);
        unordered.insert(std::minmax(a, b));
    }
    CHECK(unordered == std::set<QueryPair>{{0, 1}, {0, 2}, {1, 2}});

    const Graph big = gen_erdos_renyi(1000, 0.01, 5);
    const auto first = sample_query_pairs(big, 100, 42);
    CHECK(first == sample_query_pairs(big, 100, 42));
    CHECK(first != sample_query_pairs(big, 100, 43));
    std::set<QueryPair> distinct;
    for (auto [a, b] : first) {
        CHECK(a != b);
        CHECK(a < big.num_nodes());
        CHECK(b < big.num_nodes());
        distinct.insert(std::minmax(a, b));
    }
    CHECK(distinct.size() == 100);

    CHECK_THROWS_AS(sample_query_pairs(tri, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_query_pairs(tri, 0, 1), std::invalid_argument);
}

TEST_CASE("method names") {
    CHECK(parse_method("bisper") == Method::kBisper);
    CHECK(parse_method("mc_only") == Method::kMcOnly);
    CHECK(parse_method("push_only") == Method::kPushOnly);
    CHECK_THROWS_AS(parse_method("geer"), std::invalid_argument);
}

TEST_CASE("benchmark: deterministic method has no error") {
    const Graph g = testing::random_connected_graph(60, 0.08, 7);
    BenchmarkConfig cfg;
    cfg.dataset = "rand60";
    cfg.methods = {Method::kPushOnly};
    cfg.epsilons = {0.1, 0.01};
    cfg.fixed_l_max = 40;
    cfg.pair_count = 10;
    const auto rows = run_benchmark(g, cfg);
    REQUIRE(rows.size() == 10 * 2 + 2);
    for (const auto& r : rows) {
        REQUIRE(r.abs_error.has_value());
        CHECK(*r.abs_error <= 1e-10);
        CHECK(r.walks == 0.0);
    }

    std::ostringstream a, b;
    write_csv(a, rows);
    write_csv(b, run_benchmark(g, cfg));
    // timings differ run to run; everything before the ms column must match
    auto strip_ms = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string out, line;
        while (std::getline(in, line)) {
            auto cut = line.rfind(',');
            cut = line.rfind(',', cut - 1);
            out += line.substr(0, cut) + '\n';
        }
        return out;
    };
    CHECK(strip_ms(a.str()) == strip_ms(b.str()));
}

TEST_CASE("benchmark: rows, seeds and aggregates") {
    const Graph g = gen_erdos_renyi(400, 0.03, 9);
    BenchmarkConfig cfg;
    cfg.dataset = "er400";
    cfg.methods = {Method::kBisper, Method::kMcOnly};
    cfg.epsilons = {0.1, 0.05};
    cfg.pair_count = 8;
    cfg.seed = 77;
    const auto rows = run_benchmark(g, cfg);
    REQUIRE(rows.size() == 8 * 2 * 2 + 4);

    // detail rows in (pair, method, epsilon) order with paired seeds
    for (std::size_t i = 0; i < 32; ++i) {
        const auto& r = rows[i];
        CHECK_FALSE(r.aggregate());
        CHECK(r.method == cfg.methods[(i / 2) % 2]);
        CHECK(r.epsilon == cfg.epsilons[i % 2]);
        CHECK(r.seed == row_seed(77, i / 4, i % 2));
        CHECK(*r.abs_error == doctest::Approx(std::abs(*r.estimate - *r.ground_truth)));
        CHECK(*r.abs_error <= r.epsilon);
    }

    std::ostringstream csv;
    write_csv(csv, rows);
    std::istringstream in(csv.str());
    const auto parsed = read_csv(in);
    REQUIRE(parsed.size() == rows.size());

    std::map<std::pair<Method, double>, std::vector<const BenchmarkRow*>> groups;
    for (const auto& r : parsed)
        if (!r.aggregate()) groups[{r.method, r.epsilon}].push_back(&r);
    for (const auto& r : parsed) {
        if (!r.aggregate()) continue;
        const auto& members = groups.at({r.method, r.epsilon});
        REQUIRE(members.size() == 8);
        double err = 0.0, ms = 0.0, walks = 0.0;
        for (const auto* m : members) {
            err += *m->abs_error;
            ms += m->ms;
            walks += m->walks;
        }
        CHECK(*r.abs_error == doctest::Approx(err / 8).epsilon(1e-12));
        CHECK(r.ms == doctest::Approx(ms / 8).epsilon(1e-12));
        CHECK(r.walks == doctest::Approx(walks / 8).epsilon(1e-12));
    }
}

TEST_CASE("benchmark: CSV header and field layout") {
    const Graph g = make_cycle(5);
    BenchmarkConfig cfg;
    cfg.methods = {Method::kPushOnly};
    cfg.fixed_l_max = 20;
    cfg.pair_count = 2;
    std::ostringstream out;
    write_csv(out, run_benchmark(g, cfg));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    while (std::getline(in, line)) CHECK(std::count(line.begin(), line.end(), ',') == 12);
    CHECK(out.str().find('\r') == std::string::npos);

    std::istringstream bad("dataset,s\n");
    CHECK_THROWS_AS(read_csv(bad), std::invalid_argument);
}
