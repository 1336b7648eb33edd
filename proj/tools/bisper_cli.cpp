// Command-line front end: single queries, benchmark sweeps, ground truth,
// dataset statistics and graph generation.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bisper/bench.hpp"
#include "bisper/engine.hpp"
#include "bisper/graph.hpp"
#include "bisper/oracle.hpp"

namespace {

using namespace bisper;

struct GraphSource {
    std::string path;
    std::string spec;

    void add_to(CLI::App* cmd) {
        auto* file = cmd->add_option("--graph", path, "SNAP edge-list file");
        auto* gen = cmd->add_option("--gen", spec, "generator: triangle, path:N, cycle:N, complete:N, er:N:P[:SEED]");
        file->excludes(gen);
    }

    Graph load(std::uint64_t seed) const {
        if (!path.empty()) return load_edge_list(path);
        if (!spec.empty()) return generate_from_spec(spec, seed);
        throw CLI::ValidationError("one of --graph or --gen is required");
    }

    std::string name() const {
        if (!spec.empty()) return spec;
        auto slash = path.find_last_of('/');
        return slash == std::string::npos ? path : path.substr(slash + 1);
    }
};

NodeId resolve_node(const Graph& g, OriginalId id, const char* flag) {
    const NodeId v = g.find_original(id);
    if (v >= g.num_nodes())
        throw std::invalid_argument(std::string(flag) + " " + std::to_string(id) +
                                    " is not in the largest connected component");
    return v;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("BISPER_SEED")) return std::stoull(env);
    return 1;
}

void warn_bipartite(const Graph& g) {
    if (g.is_bipartite())
        std::cerr << "warning: graph is bipartite; the truncated series does not converge to the resistance\n";
}

std::uint32_t resolve_l_max(const Graph& g, std::optional<std::uint32_t> l_max, std::optional<double> lambda,
                            double eps, NodeId s, NodeId t) {
    if (l_max) return *l_max;
    double lam;
    if (lambda) {
        lam = *lambda;
    } else {
        const auto est = estimate_spectral_radius(g);
        if (!est.converged) std::cerr << "warning: spectral radius estimate did not converge\n";
        lam = est.lambda;
    }
    return compute_l_max(lam, eps, g.degree(s), g.degree(t));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-pair effective resistance estimation"};
    app.require_subcommand(1);
    std::cout << std::setprecision(12);

    GraphSource source;
    std::uint64_t seed = default_seed();
    OriginalId s_id = 0, t_id = 0;
    double eps = 0.1, pf = 0.01;
    std::optional<std::uint32_t> l_max;
    std::optional<double> lambda, r_max_override;
    std::string method_name = "bisper";
    bool verbose = false;

    auto* query = app.add_subcommand("query", "estimate the truncated resistance of one pair");
    source.add_to(query);
    query->add_option("--s", s_id)->required();
    query->add_option("--t", t_id)->required();
    query->add_option("--eps", eps)->check(CLI::PositiveNumber);
    query->add_option("--pf", pf)->check(CLI::Range(0.0, 1.0));
    auto* q_lmax = query->add_option("--lmax", l_max);
    query->add_option("--lambda", lambda)->excludes(q_lmax);
    query->add_option("--rmax-override", r_max_override)->check(CLI::NonNegativeNumber);
    query->add_option("--method", method_name)->check(CLI::IsMember({"bisper", "mc_only", "push_only"}));
    query->add_option("--seed", seed, "RNG seed (default: $BISPER_SEED or 1)");
    query->add_flag("--verbose", verbose);

    BenchmarkConfig bench_cfg;
    std::string methods_csv = "bisper,mc_only";
    std::vector<double> eps_list{0.1};
    std::string out_path;
    bool no_truth = false;
    auto* bench = app.add_subcommand("bench", "run a benchmark sweep and write CSV");
    source.add_to(bench);
    bench->add_option("--name", bench_cfg.dataset, "dataset label in the CSV");
    bench->add_option("--methods", methods_csv, "comma list of bisper, mc_only, push_only");
    bench->add_option("--eps", eps_list)->delimiter(',');
    bench->add_option("--pf", pf)->check(CLI::Range(0.0, 1.0));
    auto* b_lmax = bench->add_option("--lmax", l_max);
    bench->add_option("--lambda", lambda)->excludes(b_lmax);
    bench->add_option("--pairs", bench_cfg.pair_count)->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed);
    bench->add_option("--out", out_path, "CSV path (default: stdout)");
    bench->add_flag("--no-truth", no_truth, "skip ground-truth computation");

    double lm_lambda = 0.0;
    std::uint32_t d_s = 1, d_t = 1;
    auto* lmax_cmd = app.add_subcommand("lmax", "walk length needed for truncation error eps/2");
    lmax_cmd->add_option("--lambda", lm_lambda)->required();
    lmax_cmd->add_option("--eps", eps)->required()->check(CLI::PositiveNumber);
    lmax_cmd->add_option("--ds", d_s)->required()->check(CLI::PositiveNumber);
    lmax_cmd->add_option("--dt", d_t)->required()->check(CLI::PositiveNumber);

    bool exact = false;
    auto* truth = app.add_subcommand("groundtruth", "deterministic reference resistance");
    source.add_to(truth);
    truth->add_option("--s", s_id)->required();
    truth->add_option("--t", t_id)->required();
    auto* g_lmax = truth->add_option("--lmax", l_max, "truncated resistance by power iteration");
    truth->add_flag("--exact", exact, "full resistance via the Laplacian")->excludes(g_lmax);

    auto* stats_cmd = app.add_subcommand("stats", "dataset statistics and spectral radius");
    source.add_to(stats_cmd);
    stats_cmd->add_option("--lambda", lambda, "use this spectral radius instead of estimating");

    auto* gen_cmd = app.add_subcommand("gen", "write a generated graph as an edge list");
    gen_cmd->add_option("--gen", source.spec)->required();
    gen_cmd->add_option("--out", out_path)->required();
    gen_cmd->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*query) {
            const Graph g = source.load(seed);
            const NodeId s = resolve_node(g, s_id, "--s");
            const NodeId t = resolve_node(g, t_id, "--t");
            if (s == t) {
                std::cout << 0.0 << '\n';
                return 0;
            }
            warn_bipartite(g);
            QueryParams params;
            params.s = s;
            params.t = t;
            params.epsilon = eps;
            params.failure_prob = pf;
            params.seed = seed;
            params.l_max = resolve_l_max(g, l_max, lambda, eps, s, t);

            Estimate est;
            switch (parse_method(method_name)) {
                case Method::kBisper: est = bisper_query(g, params, r_max_override); break;
                case Method::kMcOnly: est = mc_only_baseline(g, params); break;
                case Method::kPushOnly: est = push_only_baseline(g, params); break;
            }
            std::cout << est.value << '\n';
            if (verbose) {
                std::cout << "lmax=" << params.l_max << '\n'
                          << "r_max=" << est.policy.r_max << '\n'
                          << "regime=" << to_string(est.policy.regime) << '\n'
                          << "walk_budget=" << est.policy.walk_budget << '\n'
                          << "walks=" << est.walks_used << '\n'
                          << "stopped_early=" << (est.stopped_early ? "true" : "false") << '\n'
                          << "push_ops=" << est.pushes.push_ops << '\n'
                          << "edge_work=" << est.pushes.edge_work << '\n'
                          << "ms=" << std::chrono::duration<double, std::milli>(est.elapsed).count() << '\n';
            }
            return 0;
        }

        if (*bench) {
            const Graph g = source.load(seed);
            warn_bipartite(g);
            if (bench_cfg.dataset == "graph") bench_cfg.dataset = source.name();
            bench_cfg.methods.clear();
            std::stringstream ss(methods_csv);
            for (std::string m; std::getline(ss, m, ',');) bench_cfg.methods.push_back(parse_method(m));
            bench_cfg.epsilons = eps_list;
            bench_cfg.failure_prob = pf;
            bench_cfg.fixed_l_max = l_max;
            bench_cfg.lambda = lambda;
            bench_cfg.seed = seed;
            bench_cfg.ground_truth = !no_truth;
            const auto rows = run_benchmark(g, bench_cfg);
            if (out_path.empty()) {
                write_csv(std::cout, rows);
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + out_path);
                write_csv(out, rows);
                if (!out) throw std::runtime_error("write failed: " + out_path);
            }
            return 0;
        }

        if (*lmax_cmd) {
            std::cout << compute_l_max(lm_lambda, eps, d_s, d_t) << '\n';
            return 0;
        }

        if (*truth) {
            const Graph g = source.load(seed);
            const NodeId s = resolve_node(g, s_id, "--s");
            const NodeId t = resolve_node(g, t_id, "--t");
            if (exact) {
                std::cout << exact_er_pseudoinverse(g, s, t) << '\n';
            } else {
                if (!l_max) throw CLI::ValidationError("groundtruth needs --lmax or --exact");
                std::cout << truncated_er_power_iteration(g, s, t, *l_max) << '\n';
            }
            return 0;
        }

        if (*stats_cmd) {
            const Graph g = source.load(seed);
            const auto st = compute_stats(g, lambda.value_or(-1.0));
            std::cout << "n " << st.n << '\n'
                      << "m " << st.m << '\n'
                      << "d_min " << st.d_min << '\n'
                      << "d_max " << st.d_max << '\n'
                      << "d_bar " << st.d_bar << '\n'
                      << "lambda " << st.lambda << '\n'
                      << "lambda_converged " << (st.lambda_converged ? "true" : "false") << '\n'
                      << "bipartite " << (st.bipartite ? "true" : "false") << '\n';
            return 0;
        }

        if (*gen_cmd) {
            const Graph g = generate_from_spec(source.spec, seed);
            write_edge_list(g, out_path);
            std::cout << "n " << g.num_nodes() << '\n' << "m " << g.num_edges() << '\n';
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
