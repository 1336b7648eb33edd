#pragma once

#include <cstdint>
#include <vector>

#include "bisper/engine.hpp"
#include "bisper/graph.hpp"
#include "bisper/push_state.hpp"

namespace bisper {

/// Node-count ceiling of the dense Laplacian solve.
inline constexpr NodeId kDenseSolveLimit = 10000;
/// Above this a size warning is logged.
inline constexpr NodeId kDenseSolveWarn = 2000;
/// Memory ceiling for dense transition vectors.
inline constexpr std::uint64_t kDenseMemoryBudget = std::uint64_t{2} << 30;

/// (e_s - e_t)^T L^+ (e_s - e_t) via the Laplacian grounded at t.
double exact_er_pseudoinverse(const Graph& g, NodeId s, NodeId t);

/// p^(l)(s, .) and p^(l)(t, .) for l = 0..layers, dense.
struct DenseTransitionPowers {
    std::uint32_t layers = 0;
    std::vector<std::vector<double>> from_s;
    std::vector<std::vector<double>> from_t;
};

DenseTransitionPowers dense_transition_powers(const Graph& g, NodeId s, NodeId t, std::uint32_t layers);

/// One step x <- P x with P = A D^{-1}, so (P^l e_s)(v) = p^(l)(s, v).
void transition_step(const Graph& g, const std::vector<double>& x, std::vector<double>& out);

/// l_max-truncated resistance by iterating dense probability vectors.
double truncated_er_power_iteration(const Graph& g, NodeId s, NodeId t, std::uint32_t l_max);

/// Exact expectation of one walk-pair sample for a given push state.
double exact_t_reference(const PushState& state, const DenseTransitionPowers& powers);

/// Zero pushes, pure adaptive sampling (r_max = 1/d).
Estimate mc_only_baseline(const Graph& g, const QueryParams& params, const AmcOptions& options = {});

/// Pushes everything (r_max = 0); deterministic, no walks.
Estimate push_only_baseline(const Graph& g, const QueryParams& params);

}  // namespace bisper
