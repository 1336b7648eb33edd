#include <cmath>
#include <numeric>
#include <vector>

#include "bisper/graph.hpp"
#include "bisper/rng.hpp"

namespace bisper {

SpectralEstimate estimate_spectral_radius(const Graph& g, double tol, std::size_t max_iters,
                                          std::uint64_t seed) {
    const NodeId n = g.num_nodes();
    SpectralEstimate out;
    out.bipartite = g.is_bipartite();
    if (n < 2) {
        out.converged = true;
        return out;
    }

    // unit top eigenvector of D^{-1/2} A D^{-1/2}
    std::vector<double> top(n), inv_sqrt_deg(n);
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    for (NodeId v = 0; v < n; ++v) {
        top[v] = std::sqrt(g.degree(v) / two_m);
        inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
    }

    auto deflate_and_normalize = [&](std::vector<double>& x) {
        const double proj = std::inner_product(x.begin(), x.end(), top.begin(), 0.0);
        double norm2 = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            x[v] -= proj * top[v];
            norm2 += x[v] * x[v];
        }
        const double norm = std::sqrt(norm2);
        if (norm > 0.0)
            for (double& xv : x) xv /= norm;
        return norm;
    };

    std::vector<double> x(n), y(n);
    CounterRng rng(seed);
    for (double& xv : x) xv = rng.uniform() - 0.5;
    if (deflate_and_normalize(x) == 0.0) {
        out.converged = true;
        return out;
    }

    // ||M x_k|| with x_k unit is non-decreasing for symmetric M and tends to
    // the largest deflated eigenvalue magnitude
    double prev = -1.0;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        for (NodeId u = 0; u < n; ++u) {
            double acc = 0.0;
            for (NodeId v : g.neighbors(u)) acc += x[v] * inv_sqrt_deg[v];
            y[u] = acc * inv_sqrt_deg[u];
        }
        const double estimate = deflate_and_normalize(y);
        std::swap(x, y);
        out.lambda = std::min(estimate, 1.0);
        out.iterations = it;
        if (estimate == 0.0 || std::abs(estimate - prev) < tol) {
            out.converged = true;
            break;
        }
        prev = estimate;
    }
    if (out.bipartite) out.lambda = 1.0;
    return out;
}

}  // namespace bisper
