#include "bisper/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <iostream>
#include <stdexcept>
#include <string>

namespace bisper {

namespace {

void check_endpoints(const Graph& g, NodeId s, NodeId t) {
    if (!g.contains(s) || !g.contains(t)) throw std::invalid_argument("oracle: node outside graph");
}

void check_dense_memory(const Graph& g, std::uint64_t vectors) {
    const std::uint64_t bytes = vectors * g.num_nodes() * sizeof(double);
    if (bytes > kDenseMemoryBudget)
        throw std::length_error("oracle: dense vectors need " + std::to_string(bytes >> 20) + " MiB");
}

}  // namespace

double exact_er_pseudoinverse(const Graph& g, NodeId s, NodeId t) {
    check_endpoints(g, s, t);
    const NodeId n = g.num_nodes();
    if (n > kDenseSolveLimit)
        throw std::length_error("exact_er_pseudoinverse: " + std::to_string(n) + " nodes exceeds dense limit");
    if (n > kDenseSolveWarn)
        std::cerr << "warning: dense Laplacian solve on " << n << " nodes\n";
    if (s == t) return 0.0;

    // Grounding t removes the all-ones null space; the remaining block is
    // positive definite for a connected graph and x_s = R(s, t).
    auto reduced = [t](NodeId v) { return v < t ? v : v - 1; };
    const Eigen::Index size = n - 1;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(size, size);
    for (NodeId u = 0; u < n; ++u) {
        if (u == t) continue;
        const auto i = static_cast<Eigen::Index>(reduced(u));
        lap(i, i) = g.degree(u);
        for (NodeId v : g.neighbors(u))
            if (v != t) lap(i, static_cast<Eigen::Index>(reduced(v))) = -1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    rhs(reduced(s)) = 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(lap);
    if (llt.info() != Eigen::Success) throw std::runtime_error("exact_er_pseudoinverse: grounded Laplacian not SPD");
    const Eigen::VectorXd x = llt.solve(rhs);
    return x(reduced(s));
}

void transition_step(const Graph& g, const std::vector<double>& x, std::vector<double>& out) {
    const NodeId n = g.num_nodes();
    out.assign(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        if (x[u] == 0.0) continue;
        const double share = x[u] / g.degree(u);
        for (NodeId v : g.neighbors(u)) out[v] += share;
    }
}

DenseTransitionPowers dense_transition_powers(const Graph& g, NodeId s, NodeId t, std::uint32_t layers) {
    check_endpoints(g, s, t);
    check_dense_memory(g, 2ull * (layers + 1ull));
    DenseTransitionPowers powers;
    powers.layers = layers;
    for (auto [start, out] : {std::pair{s, &powers.from_s}, std::pair{t, &powers.from_t}}) {
        out->resize(layers + 1ull);
        (*out)[0].assign(g.num_nodes(), 0.0);
        (*out)[0][start] = 1.0;
        for (std::uint32_t l = 1; l <= layers; ++l) transition_step(g, (*out)[l - 1], (*out)[l]);
    }
    return powers;
}

double truncated_er_power_iteration(const Graph& g, NodeId s, NodeId t, std::uint32_t l_max) {
    check_endpoints(g, s, t);
    check_dense_memory(g, 4);
    if (s == t) return 0.0;
    const double inv_ds = 1.0 / g.degree(s), inv_dt = 1.0 / g.degree(t);
    std::vector<double> from_s(g.num_nodes(), 0.0), from_t(g.num_nodes(), 0.0), scratch;
    from_s[s] = 1.0;
    from_t[t] = 1.0;
    double total = 0.0;
    for (std::uint32_t l = 0;; ++l) {
        total += from_s[s] * inv_ds - from_s[t] * inv_dt - from_t[s] * inv_ds + from_t[t] * inv_dt;
        if (l == l_max) break;
        transition_step(g, from_s, scratch);
        from_s.swap(scratch);
        transition_step(g, from_t, scratch);
        from_t.swap(scratch);
    }
    return total;
}

double exact_t_reference(const PushState& state, const DenseTransitionPowers& powers) {
    const Graph& g = state.graph();
    const std::uint32_t l_max = state.l_max();
    if (powers.layers < l_max) throw std::invalid_argument("exact_t_reference: powers shorter than l_max");
    const NodeId n = g.num_nodes();

    // prefix[k][v] = sum_{j<=k} (r_s^(j)(v) - r_t^(j)(v)) / d(v), summed directly
    std::vector<std::vector<double>> prefix(l_max + 1ull, std::vector<double>(n, 0.0));
    for (std::uint32_t k = 0; k <= l_max; ++k) {
        if (k > 0) prefix[k] = prefix[k - 1];
        for (auto [v, r] : state.residues(Side::kSource, k)) prefix[k][v] += r / g.degree(v);
        for (auto [v, r] : state.residues(Side::kTarget, k)) prefix[k][v] -= r / g.degree(v);
    }

    double total = 0.0;
    for (std::uint32_t l = 0; l <= l_max; ++l) {
        const auto& diff = prefix[l_max - l];
        for (NodeId v = 0; v < n; ++v) total += (powers.from_s[l][v] - powers.from_t[l][v]) * diff[v];
    }
    return total;
}

Estimate mc_only_baseline(const Graph& g, const QueryParams& params, const AmcOptions& options) {
    validate(g, params);
    const std::uint32_t d = std::min(g.degree(params.s), g.degree(params.t));
    return bisper_query(g, params, 1.0 / d, options);
}

Estimate push_only_baseline(const Graph& g, const QueryParams& params) {
    return bisper_query(g, params, 0.0);
}

}  // namespace bisper
