#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bisper {

using NodeId = std::uint32_t;
using OriginalId = std::uint64_t;
using EdgeList = std::vector<std::pair<OriginalId, OriginalId>>;

/// Immutable CSR adjacency of a simple, undirected, connected graph.
///
/// Node ids are dense in [0, n). The id a node had in the input is kept in a
/// side table so results can be reported against the original numbering.
class Graph {
public:
    Graph() = default;

    /// Builds from already-clean CSR arrays. Adjacency lists must be sorted,
    /// symmetric and free of self-loops/duplicates; this is checked.
    Graph(std::vector<std::uint64_t> offsets, std::vector<NodeId> neighbors,
          std::vector<OriginalId> original_ids);

    NodeId num_nodes() const noexcept { return static_cast<NodeId>(offsets_.size() - 1); }
    std::uint64_t num_edges() const noexcept { return neighbors_.size() / 2; }

    std::uint32_t degree(NodeId v) const noexcept {
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }

    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }

    OriginalId original_id(NodeId v) const noexcept { return original_ids_[v]; }

    /// Dense id of an original id, or num_nodes() if it was not kept.
    NodeId find_original(OriginalId id) const;

    bool contains(NodeId v) const noexcept { return v < num_nodes(); }

    bool is_bipartite() const noexcept { return bipartite_; }

    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

private:
    std::vector<std::uint64_t> offsets_{0};
    std::vector<NodeId> neighbors_;
    std::vector<OriginalId> original_ids_;
    bool bipartite_ = false;
};

/// Cleans an edge multiset (drops self-loops, merges parallel edges) and
/// returns its largest connected component. Ties on size go to the component
/// holding the smallest original id. Throws std::invalid_argument when
/// nothing remains.
Graph largest_connected_component(const EdgeList& edges);

/// SNAP edge-list reader: "u v" per line, '#' comments, any orientation.
Graph load_edge_list(const std::filesystem::path& path);

/// Parses edge-list text; shared by load_edge_list and tests.
Graph parse_edge_list(std::string_view text);

void write_edge_list(const Graph& g, const std::filesystem::path& path);

/// G(n, p) restricted to its largest component. Same seed, same graph.
Graph gen_erdos_renyi(std::uint32_t n, double p, std::uint64_t seed);

Graph make_path(std::uint32_t n);
Graph make_cycle(std::uint32_t n);
Graph make_complete(std::uint32_t n);

/// Generator spec used by the CLI and benchmarks:
/// "triangle", "path:N", "cycle:N", "complete:N", "er:N:P[:SEED]".
Graph generate_from_spec(const std::string& spec, std::uint64_t default_seed = 1);

struct SpectralEstimate {
    double lambda = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Set when the graph is bipartite (lambda is 1 there).
    bool bipartite = false;
};

/// Power iteration on D^{-1/2} A D^{-1/2} with the top eigenvector
/// (proportional to sqrt(degree)) deflated every step. The returned value is
/// max{lambda_2, |lambda_n|} of P = A D^{-1}.
SpectralEstimate estimate_spectral_radius(const Graph& g, double tol = 1e-9,
                                          std::size_t max_iters = 100000,
                                          std::uint64_t seed = 0x5eed);

struct DatasetStats {
    NodeId n = 0;
    std::uint64_t m = 0;
    std::uint32_t d_min = 0;
    std::uint32_t d_max = 0;
    double d_bar = 0.0;
    double lambda = 0.0;
    bool lambda_converged = false;
    bool bipartite = false;
};

/// Degree statistics plus lambda. A positive external_lambda replaces the
/// estimator.
DatasetStats compute_stats(const Graph& g, double external_lambda = -1.0);

}  // namespace bisper
