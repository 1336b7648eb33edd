#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bisper/graph.hpp"
#include "bisper/push_state.hpp"
#include "bisper/rng.hpp"

namespace bisper {

struct QueryParams {
    NodeId s = 0;
    NodeId t = 0;
    std::uint32_t l_max = 0;
    double epsilon = 0.1;
    double failure_prob = 0.01;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument when params do not fit the graph.
void validate(const Graph& g, const QueryParams& params);

enum class PushRegime { kFullPush, kNoPush, kBalanced };

std::string_view to_string(PushRegime regime);

struct RMaxChoice {
    double r_max = 0.0;
    PushRegime regime = PushRegime::kBalanced;
};

/// Smallest L with truncation error at most epsilon / 2:
/// ceil(log_{1/lambda}(2 (1/d_s + 1/d_t) / (epsilon (1 - lambda)))).
/// Throws std::domain_error for lambda >= 1; lambda <= 0 is clamped to a
/// tiny positive value.
std::uint32_t compute_l_max(double lambda, double epsilon, std::uint32_t d_s, std::uint32_t d_t);

/// Push threshold minimizing the predicted push + sampling cost, with d the
/// smaller endpoint degree and m the edge count.
RMaxChoice choose_r_max(std::uint32_t l_max, double epsilon, double failure_prob, std::uint32_t d,
                        std::uint64_t m);

/// Balanced threshold eps^{2/3} / (2^{2/3} (L+1)^{2/3} (L+2)^{2/3} log^{1/3}(2/p_f)).
double balanced_r_max(std::uint32_t l_max, double epsilon, double failure_prob);

/// Regime implied by an arbitrary threshold.
PushRegime classify_r_max(double r_max, std::uint32_t d);

PushState push_phase(const Graph& g, const QueryParams& params, double r_max);

struct WalkBudget {
    std::uint64_t walks = 0;
    double tb1 = 0.0;
    /// Only in the no-push regime: 2 (L + 1) / d.
    std::optional<double> tb3;
};

/// Hoeffding walk-pair budget for the sampling phase.
WalkBudget compute_walk_budget(std::uint32_t l_max, double epsilon, double failure_prob, std::uint32_t d,
                               double r_max, double tb2);

struct EstimatorPolicy {
    double r_max = 0.0;
    PushRegime regime = PushRegime::kBalanced;
    bool overridden = false;
    double tb1 = 0.0;
    double tb2 = 0.0;
    std::optional<double> tb3;
    std::uint64_t walk_budget = 0;

    /// Half-width T_B of the range every sample falls in.
    double sample_bound() const;
};

/// Fills T_B1, T_B2, T_B3 and N from a finished push phase.
EstimatorPolicy make_policy(const PushState& state, const QueryParams& params, double r_max,
                            bool overridden);

struct AmcOptions {
    /// Evaluate the stopping rule every this many samples.
    std::uint32_t check_interval = 1;
    bool early_stop = true;
};

struct AmcResult {
    double t_hat = 0.0;
    std::uint64_t walks_used = 0;
    bool stopped_early = false;
};

/// Random walk of exactly l_max steps written to out (size l_max + 1).
void sample_walk(const Graph& g, NodeId start, CounterRng& rng, std::span<NodeId> out);
std::vector<NodeId> sample_walk(const Graph& g, NodeId start, std::uint32_t l_max, CounterRng& rng);

/// One sample of T(s, t) from a walk pair, read off the prefix-sum trees.
double compute_t_i(const PushState& state, std::span<const NodeId> walk_s, std::span<const NodeId> walk_t);

/// Empirical-Bernstein confidence radius after `samples` draws.
double bernstein_radius(double variance, double sample_bound, double failure_prob, std::uint64_t samples);

/// Samples up to policy.walk_budget walk pairs (s-walks and t-walks on
/// independent streams derived from params.seed) and returns the mean sample.
AmcResult bisper_amc(const PushState& state, const EstimatorPolicy& policy, const QueryParams& params,
                     const AmcOptions& options = {});

struct Estimate {
    double value = 0.0;
    std::uint64_t walks_used = 0;
    PushWork pushes;
    std::chrono::nanoseconds elapsed{0};
    EstimatorPolicy policy;
    bool stopped_early = false;
};

/// Estimate of the l_max-truncated effective resistance between s and t.
/// With probability at least 1 - p_f the error is below epsilon.
Estimate bisper_query(const Graph& g, const QueryParams& params, std::optional<double> r_max_override = {},
                      const AmcOptions& options = {});

}  // namespace bisper
