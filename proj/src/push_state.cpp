#include "bisper/push_state.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bisper {

PushState::PushState(const Graph& g, NodeId s, NodeId t, std::uint32_t l_max)
    : graph_(&g), endpoint_{s, t}, l_max_(l_max) {
    if (!g.contains(s) || !g.contains(t)) throw std::invalid_argument("PushState: endpoint outside graph");
    for (Side side : kBothSides) {
        const auto k = idx(side);
        residues_[k].resize(l_max + 2);
        reserves_[k].resize(l_max + 1);
        reserve_layer_total_[k].assign(l_max + 1, 0.0);
        for (auto& trace : endpoint_reserve_[k]) trace.assign(l_max + 1, 0.0);

        const NodeId v = endpoint_[k];
        residues_[k][0][v] = 1.0;
        trees_for(v).side[k].update(0, 1.0 / g.degree(v));
    }
}

PushState::NodeTrees& PushState::trees_for(NodeId v) {
    auto [it, inserted] = tree_slot_.try_emplace(v, static_cast<std::uint32_t>(tree_store_.size()));
    if (inserted) {
        NodeTrees fresh;
        for (auto& tree : fresh.side) tree = PrefixSumTree(l_max_ + 2);
        tree_store_.push_back(std::move(fresh));
    }
    return tree_store_[it->second];
}

double PushState::residue(Side side, std::uint32_t layer, NodeId v) const {
    const auto& map = residues_[idx(side)].at(layer);
    auto it = map.find(v);
    return it == map.end() ? 0.0 : it->second;
}

double PushState::reserve(Side side, std::uint32_t layer, NodeId v) const {
    const auto& map = reserves_[idx(side)].at(layer);
    auto it = map.find(v);
    return it == map.end() ? 0.0 : it->second;
}

void PushState::push(Side side, NodeId u, std::uint32_t layer) {
    push_and_collect(side, u, layer, 0.0, nullptr);
}

void PushState::push_and_collect(Side side, NodeId u, std::uint32_t layer, double r_max,
                                 std::vector<NodeId>* crossed) {
    if (layer > l_max_)
        throw std::out_of_range("push at layer " + std::to_string(layer) + " beyond l_max " +
                                std::to_string(l_max_));
    const auto k = idx(side);
    auto& current = residues_[k][layer];
    auto it = current.find(u);
    if (it == current.end() || it->second == 0.0) return;
    const double mass = it->second;
    it->second = 0.0;

    const Graph& g = *graph_;
    const double d_u = g.degree(u);
    const double share = mass / d_u;

    reserves_[k][layer][u] += mass;
    reserve_layer_total_[k][layer] += mass;
    reserve_total_[k] += mass;
    for (Side at : kBothSides)
        if (endpoint_[idx(at)] == u) endpoint_reserve_[k][idx(at)][layer] += mass;

    auto& next = residues_[k][layer + 1];
    for (NodeId v : g.neighbors(u)) {
        const double d_v = g.degree(v);
        double& r = next[v];
        const double before = r;
        r += share;
        trees_for(v).side[k].update(layer + 1, share / d_v);
        if (crossed && before <= r_max * d_v && r > r_max * d_v) crossed->push_back(v);
    }
    trees_for(u).side[k].update(layer, -share);

    ++work_.push_ops;
    work_.edge_work += g.degree(u);
}

void PushState::push_until(double r_max) {
    const Graph& g = *graph_;
    std::array<std::vector<NodeId>, 2> frontier, upcoming;
    for (Side side : kBothSides) {
        const NodeId v = endpoint_[idx(side)];
        if (residue(side, 0, v) > r_max * g.degree(v)) frontier[idx(side)].push_back(v);
    }
    for (std::uint32_t layer = 0; layer <= l_max_; ++layer) {
        for (Side side : kBothSides) {
            const auto k = idx(side);
            for (NodeId u : frontier[k])
                if (residue(side, layer, u) > r_max * g.degree(u))
                    push_and_collect(side, u, layer, r_max, &upcoming[k]);
            frontier[k].swap(upcoming[k]);
            upcoming[k].clear();
        }
    }
}

double PushState::reserve_estimate() const {
    const Graph& g = *graph_;
    const double inv_ds = 1.0 / g.degree(endpoint_[0]);
    const double inv_dt = 1.0 / g.degree(endpoint_[1]);
    const auto& s_trace = endpoint_reserve_[0];
    const auto& t_trace = endpoint_reserve_[1];
    double total = 0.0;
    for (std::uint32_t layer = 0; layer <= l_max_; ++layer) {
        total += s_trace[0][layer] * inv_ds - s_trace[1][layer] * inv_dt;
        total += t_trace[1][layer] * inv_dt - t_trace[0][layer] * inv_ds;
    }
    return total;
}

double PushState::max_normalized_residue() const {
    double worst = 0.0;
    for (Side side : kBothSides)
        for (std::uint32_t layer = 0; layer <= l_max_; ++layer)
            for (auto [v, r] : residues_[idx(side)][layer]) worst = std::max(worst, r / graph_->degree(v));
    return worst;
}

}  // namespace bisper
