#include "bisper/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bisper/rng.hpp"

namespace bisper {

namespace {

bool two_colorable(std::span<const std::uint64_t> offsets, std::span<const NodeId> neighbors) {
    const std::size_t n = offsets.size() - 1;
    std::vector<std::int8_t> color(n, -1);
    std::vector<NodeId> stack;
    for (NodeId root = 0; root < n; ++root) {
        if (color[root] >= 0) continue;
        color[root] = 0;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (auto i = offsets[u]; i < offsets[u + 1]; ++i) {
                const NodeId v = neighbors[i];
                if (color[v] < 0) {
                    color[v] = static_cast<std::int8_t>(1 - color[u]);
                    stack.push_back(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

struct DisjointSets {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> size;

    explicit DisjointSets(std::size_t n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

}  // namespace

Graph::Graph(std::vector<std::uint64_t> offsets, std::vector<NodeId> adjacency,
             std::vector<OriginalId> original_ids)
    : offsets_(std::move(offsets)), neighbors_(std::move(adjacency)),
      original_ids_(std::move(original_ids)) {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != neighbors_.size())
        throw std::invalid_argument("Graph: malformed CSR offsets");
    const NodeId n = num_nodes();
    if (original_ids_.size() != n) throw std::invalid_argument("Graph: original id table size mismatch");
    for (NodeId u = 0; u < n; ++u) {
        if (offsets_[u + 1] < offsets_[u]) throw std::invalid_argument("Graph: decreasing offsets");
        if (offsets_[u + 1] == offsets_[u]) throw std::invalid_argument("Graph: isolated node");
        auto adj = neighbors(u);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            if (adj[i] >= n) throw std::invalid_argument("Graph: neighbor id out of range");
            if (adj[i] == u) throw std::invalid_argument("Graph: self-loop");
            if (i > 0 && adj[i] <= adj[i - 1])
                throw std::invalid_argument("Graph: adjacency not sorted or has duplicates");
        }
    }
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : neighbors(u)) {
            auto adj = neighbors(v);
            if (!std::binary_search(adj.begin(), adj.end(), u))
                throw std::invalid_argument("Graph: adjacency is not symmetric");
        }
    bipartite_ = two_colorable(offsets_, neighbors_);
}

NodeId Graph::find_original(OriginalId id) const {
    if (std::is_sorted(original_ids_.begin(), original_ids_.end())) {
        auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), id);
        return it != original_ids_.end() && *it == id ? static_cast<NodeId>(it - original_ids_.begin())
                                                       : num_nodes();
    }
    auto it = std::find(original_ids_.begin(), original_ids_.end(), id);
    return static_cast<NodeId>(it - original_ids_.begin());
}

Graph largest_connected_component(const EdgeList& edges) {
    // dense relabel of every endpoint, in ascending original order
    std::vector<OriginalId> ids;
    ids.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        ids.push_back(u);
        ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty()) throw std::invalid_argument("empty graph after removing self-loops");
    if (ids.size() > std::numeric_limits<NodeId>::max())
        throw std::invalid_argument("too many nodes for 32-bit node ids");

    auto local = [&](OriginalId x) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
    };

    std::vector<std::pair<NodeId, NodeId>> clean;
    clean.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u == v) continue;
        NodeId a = local(u), b = local(v);
        if (a > b) std::swap(a, b);
        clean.emplace_back(a, b);
    }
    std::sort(clean.begin(), clean.end());
    clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

    DisjointSets sets(ids.size());
    for (auto [a, b] : clean) sets.unite(a, b);

    // nodes are visited in ascending original id, so the first root reaching
    // the best size already holds the smallest original id
    std::uint32_t best_root = sets.find(0);
    for (NodeId v = 0; v < ids.size(); ++v) {
        const auto r = sets.find(v);
        if (sets.size[r] > sets.size[best_root]) best_root = r;
    }

    std::vector<NodeId> remap(ids.size(), std::numeric_limits<NodeId>::max());
    std::vector<OriginalId> kept_ids;
    for (NodeId v = 0; v < ids.size(); ++v) {
        if (sets.find(v) == best_root) {
            remap[v] = static_cast<NodeId>(kept_ids.size());
            kept_ids.push_back(ids[v]);
        }
    }

    const std::size_t n = kept_ids.size();
    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (auto [a, b] : clean) {
        if (remap[a] == std::numeric_limits<NodeId>::max()) continue;
        ++offsets[remap[a] + 1];
        ++offsets[remap[b] + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<NodeId> neighbors(offsets.back());
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (auto [a, b] : clean) {
        if (remap[a] == std::numeric_limits<NodeId>::max()) continue;
        neighbors[cursor[remap[a]]++] = remap[b];
        neighbors[cursor[remap[b]]++] = remap[a];
    }
    for (std::size_t u = 0; u < n; ++u)
        std::sort(neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[u]),
                  neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]));

    return Graph(std::move(offsets), std::move(neighbors), std::move(kept_ids));
}

Graph parse_edge_list(std::string_view text) {
    EdgeList edges;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto skip_ws = [&](std::size_t i) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            return i;
        };
        std::size_t i = skip_ws(0);
        if (i == line.size() || line[i] == '#' || line[i] == '%') continue;

        OriginalId ends[2];
        for (auto& e : ends) {
            i = skip_ws(i);
            auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), e);
            const auto consumed = static_cast<std::size_t>(ptr - line.data());
            if (ec != std::errc{} || (consumed < line.size() && line[consumed] != ' ' &&
                                      line[consumed] != '\t' && line[consumed] != '\r'))
                throw std::invalid_argument("malformed edge on line " + std::to_string(line_no) + ": '" +
                                            std::string(line) + "'");
            i = consumed;
        }
        if (skip_ws(i) != line.size())
            throw std::invalid_argument("malformed edge on line " + std::to_string(line_no) +
                                        ": trailing tokens");
        edges.emplace_back(ends[0], ends[1]);
    }
    if (edges.empty()) throw std::invalid_argument("edge list contains no edges");
    return largest_connected_component(edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open edge list: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_edge_list(buffer.str());
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write edge list: " + path.string());
    out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
    for (NodeId u = 0; u < g.num_nodes(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Graph gen_erdos_renyi(std::uint32_t n, double p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_erdos_renyi: n must be at least 2");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("gen_erdos_renyi: p must lie in (0, 1]");

    EdgeList edges;
    if (p == 1.0) {
        for (OriginalId v = 1; v < n; ++v)
            for (OriginalId w = 0; w < v; ++w) edges.emplace_back(w, v);
        return largest_connected_component(edges);
    }

    // geometric skipping over the lower triangle (Batagelj & Brandes)
    CounterRng rng(seed, 0x6e72);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1, w = -1;
    while (v < n) {
        const double r = rng.uniform();
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n) edges.emplace_back(static_cast<OriginalId>(w), static_cast<OriginalId>(v));
    }
    if (edges.empty()) throw std::invalid_argument("gen_erdos_renyi: sampled graph has no edges");
    return largest_connected_component(edges);
}

Graph make_path(std::uint32_t n) {
    if (n < 2) throw std::invalid_argument("make_path: n must be at least 2");
    EdgeList edges;
    for (OriginalId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return largest_connected_component(edges);
}

Graph make_cycle(std::uint32_t n) {
    if (n < 3) throw std::invalid_argument("make_cycle: n must be at least 3");
    EdgeList edges;
    for (OriginalId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return largest_connected_component(edges);
}

Graph make_complete(std::uint32_t n) {
    if (n < 2) throw std::invalid_argument("make_complete: n must be at least 2");
    return gen_erdos_renyi(n, 1.0, 0);
}

Graph generate_from_spec(const std::string& spec, std::uint64_t default_seed) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.empty()) throw std::invalid_argument("empty generator spec");

    auto count = [&](std::size_t i) -> std::uint32_t {
        if (parts.size() <= i) throw std::invalid_argument("generator spec '" + spec + "' is missing a size");
        return static_cast<std::uint32_t>(std::stoul(parts[i]));
    };
    const std::string& kind = parts[0];
    if (kind == "triangle") return make_cycle(3);
    if (kind == "path") return make_path(count(1));
    if (kind == "cycle") return make_cycle(count(1));
    if (kind == "complete") return make_complete(count(1));
    if (kind == "er") {
        if (parts.size() < 3) throw std::invalid_argument("er spec needs er:N:P[:SEED]");
        const std::uint64_t seed = parts.size() > 3 ? std::stoull(parts[3]) : default_seed;
        return gen_erdos_renyi(count(1), std::stod(parts[2]), seed);
    }
    throw std::invalid_argument("unknown generator '" + kind + "'");
}

DatasetStats compute_stats(const Graph& g, double external_lambda) {
    DatasetStats stats;
    stats.n = g.num_nodes();
    stats.m = g.num_edges();
    stats.d_min = std::numeric_limits<std::uint32_t>::max();
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        stats.d_min = std::min(stats.d_min, g.degree(v));
        stats.d_max = std::max(stats.d_max, g.degree(v));
    }
    stats.d_bar = 2.0 * static_cast<double>(stats.m) / stats.n;
    stats.bipartite = g.is_bipartite();
    if (external_lambda > 0.0) {
        stats.lambda = external_lambda;
        stats.lambda_converged = true;
    } else {
        const auto est = estimate_spectral_radius(g);
        stats.lambda = est.lambda;
        stats.lambda_converged = est.converged;
    }
    return stats;
}

}  // namespace bisper
