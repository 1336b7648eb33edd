#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bisper/fenwick.hpp"
#include "bisper/graph.hpp"

namespace bisper {

/// Which endpoint of the query a push sequence starts from.
enum class Side : std::uint8_t { kSource = 0, kTarget = 1 };

constexpr std::array<Side, 2> kBothSides{Side::kSource, Side::kTarget};

struct PushWork {
    std::uint64_t push_ops = 0;
    /// Sum of degrees of pushed nodes.
    std::uint64_t edge_work = 0;
};

/// Layered reserve/residue vectors for the walks from s and from t, with a
/// prefix-sum tree per touched node over its degree-normalized residues.
///
/// Layers 0..l_max carry reserves; residues also exist at layer l_max + 1,
/// which receives mass when layer l_max is pushed but is never queried.
class PushState {
public:
    using LayerMap = std::unordered_map<NodeId, double>;

    struct NodeTrees {
        std::array<PrefixSumTree, 2> side;
    };

    /// Residue 1 at layer 0 of s (resp. t), trees seeded accordingly.
    PushState(const Graph& g, NodeId s, NodeId t, std::uint32_t l_max);

    const Graph& graph() const noexcept { return *graph_; }
    NodeId endpoint(Side side) const noexcept { return endpoint_[idx(side)]; }
    std::uint32_t l_max() const noexcept { return l_max_; }

    /// Moves r^(layer)(u) into the reserve and spreads it over layer + 1 of
    /// the neighbors, keeping every touched tree in sync. A zero residue is a
    /// no-op. Throws std::out_of_range when layer > l_max.
    void push(Side side, NodeId u, std::uint32_t layer);

    double residue(Side side, std::uint32_t layer, NodeId v) const;
    double reserve(Side side, std::uint32_t layer, NodeId v) const;
    const LayerMap& residues(Side side, std::uint32_t layer) const { return residues_[idx(side)].at(layer); }
    const LayerMap& reserves(Side side, std::uint32_t layer) const { return reserves_[idx(side)].at(layer); }

    /// Q_side[v].query(layer); 0 for nodes that own no tree.
    double prefix(Side side, NodeId v, std::uint32_t layer) const {
        const NodeTrees* trees = trees_at(v);
        return trees ? trees->side[idx(side)].query(layer) : 0.0;
    }

    const NodeTrees* trees_at(NodeId v) const {
        auto it = tree_slot_.find(v);
        return it == tree_slot_.end() ? nullptr : &tree_store_[it->second];
    }

    std::size_t tree_count() const noexcept { return tree_store_.size(); }

    /// Sum over layers 0..l_max and all nodes of the reserves of one side.
    double reserve_total(Side side) const noexcept { return reserve_total_[idx(side)]; }
    double reserve_layer_total(Side side, std::uint32_t layer) const { return reserve_layer_total_[idx(side)].at(layer); }

    /// Reserve of `owner` at the endpoint `at`, i.e. q_owner^(layer)(endpoint(at)).
    double endpoint_reserve(Side owner, Side at, std::uint32_t layer) const {
        return endpoint_reserve_[idx(owner)][idx(at)].at(layer);
    }

    /// Deterministic part of the estimator:
    /// sum_l q_s(s)/d(s) - q_s(t)/d(t) + q_t(t)/d(t) - q_t(s)/d(s).
    double reserve_estimate() const;

    /// Largest r^(layer)(u)/d(u) over layers 0..l_max and both sides.
    double max_normalized_residue() const;

    const PushWork& work() const noexcept { return work_; }

    /// For layer = 0..l_max, pushes s-side then t-side nodes whose
    /// r^(layer)(u)/d(u) exceeds r_max until none is left. Each layer keeps a
    /// frontier queue; a node enters the queue of layer + 1 when its residue
    /// there first crosses the threshold.
    void push_until(double r_max);

private:
    static constexpr std::size_t idx(Side side) noexcept { return static_cast<std::size_t>(side); }

    NodeTrees& trees_for(NodeId v);

    /// push() plus threshold-crossing detection on layer + 1.
    void push_and_collect(Side side, NodeId u, std::uint32_t layer, double r_max,
                          std::vector<NodeId>* crossed);

    const Graph* graph_;
    std::array<NodeId, 2> endpoint_;
    std::uint32_t l_max_;

    std::array<std::vector<LayerMap>, 2> residues_;
    std::array<std::vector<LayerMap>, 2> reserves_;
    std::array<std::vector<double>, 2> reserve_layer_total_;
    std::array<double, 2> reserve_total_{0.0, 0.0};
    std::array<std::array<std::vector<double>, 2>, 2> endpoint_reserve_;

    std::unordered_map<NodeId, std::uint32_t> tree_slot_;
    std::vector<NodeTrees> tree_store_;

    PushWork work_;
};

}  // namespace bisper
