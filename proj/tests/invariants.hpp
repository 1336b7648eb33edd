#pragma once

// Push-state invariant checkers against dense matrix powers. Each returns the
// worst violation found so callers can compare it with their tolerance.

#include <algorithm>
#include <cmath>
#include <vector>

#include "bisper/push_state.hpp"
#include "bisper/rng.hpp"
#include "test_support.hpp"

namespace bisper::testing {

/// max |p^(l)(src, x) - q^(l)(x) - sum_k sum_v r^(l-k)(v) p^(k)(v, x)| over
/// l <= l_max and all x.
inline double push_invariant_gap(const PushState& state, Side side, const std::vector<Eigen::MatrixXd>& powers) {
    const Graph& g = state.graph();
    const NodeId src = state.endpoint(side);
    const auto n = g.num_nodes();
    double worst = 0.0;
    for (std::uint32_t l = 0; l <= state.l_max(); ++l) {
        std::vector<double> rhs(n, 0.0);
        for (auto [x, q] : state.reserves(side, l)) rhs[x] += q;
        for (std::uint32_t k = 0; k <= l; ++k)
            for (auto [v, r] : state.residues(side, l - k))
                for (NodeId x = 0; x < n; ++x) rhs[x] += r * powers[k](x, v);
        for (NodeId x = 0; x < n; ++x) worst = std::max(worst, std::abs(powers[l](x, src) - rhs[x]));
    }
    return worst;
}

/// max over l of |sum_v sum_{k<=l} r^(k)(v) + sum_v q^(l)(v) - 1|, also
/// checking the running per-layer reserve totals against direct sums.
inline double mass_conservation_gap(const PushState& state, Side side) {
    double worst = 0.0, residue_prefix = 0.0, reserve_all = 0.0;
    for (std::uint32_t l = 0; l <= state.l_max(); ++l) {
        for (auto [v, r] : state.residues(side, l)) residue_prefix += r;
        double reserve_layer = 0.0;
        for (auto [v, q] : state.reserves(side, l)) reserve_layer += q;
        reserve_all += reserve_layer;
        worst = std::max(worst, std::abs(residue_prefix + reserve_layer - 1.0));
        worst = std::max(worst, std::abs(reserve_layer - state.reserve_layer_total(side, l)));
    }
    worst = std::max(worst, std::abs(reserve_all - state.reserve_total(side)));
    return worst;
}

/// max over l <= l_max and u of r^(l)(u) - p^(l)(src, u) (<= 0 when it holds).
inline double residue_dominance_excess(const PushState& state, Side side, const std::vector<Eigen::MatrixXd>& powers) {
    const NodeId src = state.endpoint(side);
    double worst = -1.0;
    for (std::uint32_t l = 0; l <= state.l_max(); ++l)
        for (auto [u, r] : state.residues(side, l)) worst = std::max(worst, r - powers[l](u, src));
    return worst;
}

/// max |Q[v].query(l) - sum_{k<=l} r^(k)(v)/d(v)| over all nodes with a
/// residue entry and l <= l_max + 1.
inline double tree_consistency_gap(const PushState& state, Side side) {
    const Graph& g = state.graph();
    std::vector<NodeId> touched;
    for (std::uint32_t l = 0; l <= state.l_max() + 1; ++l)
        for (auto [v, r] : state.residues(side, l)) touched.push_back(v);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    double worst = 0.0;
    for (NodeId v : touched) {
        double direct = 0.0;
        for (std::uint32_t l = 0; l <= state.l_max() + 1; ++l) {
            direct += state.residue(side, l, v) / g.degree(v);
            worst = std::max(worst, std::abs(state.prefix(side, v, l) - direct));
        }
    }
    return worst;
}

/// Pushes a uniformly chosen positive residue at a layer <= l_max; returns
/// false when none is left.
inline bool random_push(PushState& state, CounterRng& rng) {
    struct Candidate {
        Side side;
        std::uint32_t layer;
        NodeId node;
    };
    std::vector<Candidate> candidates;
    for (Side side : kBothSides)
        for (std::uint32_t l = 0; l <= state.l_max(); ++l)
            for (auto [v, r] : state.residues(side, l))
                if (r > 0.0) candidates.push_back({side, l, v});
    if (candidates.empty()) return false;
    // unordered_map iteration order is not stable across libraries; sort first
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.side, a.layer, a.node) < std::tie(b.side, b.layer, b.node);
    });
    const auto& pick = candidates[rng.below(candidates.size())];
    state.push(pick.side, pick.node, pick.layer);
    return true;
}

}  // namespace bisper::testing
