#include "bisper/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bisper {

namespace {

std::uint64_t ceil_to_count(double x) {
    if (!(x > 0.0)) return 0;
    const double c = std::ceil(x);
    if (c >= 18446744073709551615.0) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(c);
}

std::uint32_t min_endpoint_degree(const Graph& g, const QueryParams& params) {
    return std::min(g.degree(params.s), g.degree(params.t));
}

}  // namespace

void validate(const Graph& g, const QueryParams& params) {
    if (!g.contains(params.s) || !g.contains(params.t))
        throw std::invalid_argument("query node outside graph (n = " + std::to_string(g.num_nodes()) + ")");
    if (!(params.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(params.failure_prob > 0.0 && params.failure_prob <= 1.0))
        throw std::invalid_argument("failure probability must lie in (0, 1]");
}

std::string_view to_string(PushRegime regime) {
    switch (regime) {
        case PushRegime::kFullPush: return "full-push";
        case PushRegime::kNoPush: return "no-push";
        case PushRegime::kBalanced: return "balanced";
    }
    return "unknown";
}

std::uint32_t compute_l_max(double lambda, double epsilon, std::uint32_t d_s, std::uint32_t d_t) {
    if (!(lambda < 1.0))
        throw std::domain_error("compute_l_max: spectral radius must be below 1 (bipartite or periodic graph?)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("compute_l_max: epsilon must be positive");
    if (d_s == 0 || d_t == 0) throw std::invalid_argument("compute_l_max: degrees must be at least 1");
    lambda = std::max(lambda, 1e-12);

    const double arg = 2.0 * (1.0 / d_s + 1.0 / d_t) / (epsilon * (1.0 - lambda));
    const double layers = std::ceil(std::log(arg) / -std::log(lambda));
    if (layers <= 0.0) return 0;
    if (layers > std::numeric_limits<std::uint32_t>::max() - 2.0)
        throw std::overflow_error("compute_l_max: walk length does not fit in 32 bits");
    return static_cast<std::uint32_t>(layers);
}

double balanced_r_max(std::uint32_t l_max, double epsilon, double failure_prob) {
    const double log_term = std::log(2.0 / failure_prob);
    const double l1 = l_max + 1.0, l2 = l_max + 2.0;
    return std::cbrt(epsilon * epsilon / (4.0 * l1 * l1 * l2 * l2 * log_term));
}

RMaxChoice choose_r_max(std::uint32_t l_max, double epsilon, double failure_prob, std::uint32_t d,
                        std::uint64_t m) {
    if (!(epsilon > 0.0) || !(failure_prob > 0.0) || d == 0 || m == 0)
        throw std::invalid_argument("choose_r_max: inputs must be positive");
    const double log_term = std::log(2.0 / failure_prob);
    const double L = l_max, dd = d, mm = static_cast<double>(m);

    const double full_a = std::sqrt(mm) * epsilon * dd / (2.0 * std::sqrt(log_term));
    const double full_b = 2.0 * std::pow(mm, 0.75) * std::sqrt(epsilon) / (std::pow(3.0, 0.75) * std::pow(log_term, 0.25));
    if (L >= std::max(full_a, full_b)) return {0.0, PushRegime::kFullPush};

    const double none_a = std::pow(2.0, 5.0 / 3.0) * std::cbrt((L + 1.0) * log_term) /
                          (std::sqrt(3.0) * std::pow(epsilon, 2.0 / 3.0));
    const double none_b = 2.0 * (L + 1.0) * std::sqrt(log_term) / (std::sqrt(mm) * epsilon);
    if (dd >= std::max(none_a, none_b)) return {1.0 / dd, PushRegime::kNoPush};

    return {balanced_r_max(l_max, epsilon, failure_prob), PushRegime::kBalanced};
}

PushRegime classify_r_max(double r_max, std::uint32_t d) {
    if (r_max <= 0.0) return PushRegime::kFullPush;
    if (r_max >= 1.0 / d) return PushRegime::kNoPush;
    return PushRegime::kBalanced;
}

PushState push_phase(const Graph& g, const QueryParams& params, double r_max) {
    validate(g, params);
    if (!(r_max >= 0.0)) throw std::invalid_argument("push_phase: r_max must be non-negative");
    PushState state(g, params.s, params.t, params.l_max);
    state.push_until(r_max);
    return state;
}

WalkBudget compute_walk_budget(std::uint32_t l_max, double epsilon, double failure_prob, std::uint32_t d,
                               double r_max, double tb2) {
    const double log_term = std::log(2.0 / failure_prob);
    const double l1 = l_max + 1.0;
    WalkBudget budget;
    budget.tb1 = l1 * (l_max + 2.0) * r_max;
    if (r_max >= 1.0 / d) {
        budget.walks = ceil_to_count(8.0 * l1 * l1 * log_term / (epsilon * epsilon * d * d));
        budget.tb3 = 2.0 * l1 / d;
    } else {
        const double bound = std::min(budget.tb1, std::max(tb2, 0.0));
        budget.walks = ceil_to_count(2.0 * bound * bound * log_term / (epsilon * epsilon));
    }
    return budget;
}

double EstimatorPolicy::sample_bound() const {
    double bound = std::min(tb1, tb2);
    if (tb3) bound = std::min(bound, *tb3);
    return bound;
}

EstimatorPolicy make_policy(const PushState& state, const QueryParams& params, double r_max, bool overridden) {
    const Graph& g = state.graph();
    const std::uint32_t d = min_endpoint_degree(g, params);
    EstimatorPolicy policy;
    policy.r_max = r_max;
    policy.regime = classify_r_max(r_max, d);
    policy.overridden = overridden;
    policy.tb2 = std::max(0.0, 2.0 * (params.l_max + 1.0) - state.reserve_total(Side::kSource) -
                                   state.reserve_total(Side::kTarget));
    const auto budget = compute_walk_budget(params.l_max, params.epsilon, params.failure_prob, d, r_max, policy.tb2);
    policy.tb1 = budget.tb1;
    policy.tb3 = budget.tb3;
    policy.walk_budget = budget.walks;
    return policy;
}

void sample_walk(const Graph& g, NodeId start, CounterRng& rng, std::span<NodeId> out) {
    if (out.empty()) return;
    NodeId at = start;
    out[0] = at;
    for (std::size_t step = 1; step < out.size(); ++step) {
        const auto adj = g.neighbors(at);
        at = adj[rng.below(adj.size())];
        out[step] = at;
    }
}

std::vector<NodeId> sample_walk(const Graph& g, NodeId start, std::uint32_t l_max, CounterRng& rng) {
    std::vector<NodeId> walk(static_cast<std::size_t>(l_max) + 1);
    sample_walk(g, start, rng, walk);
    return walk;
}

double compute_t_i(const PushState& state, std::span<const NodeId> walk_s, std::span<const NodeId> walk_t) {
    const std::uint32_t l_max = state.l_max();
    if (walk_s.size() != l_max + 1u || walk_t.size() != l_max + 1u)
        throw std::invalid_argument("compute_t_i: walks must have l_max + 1 nodes");
    constexpr auto S = static_cast<std::size_t>(Side::kSource);
    constexpr auto T = static_cast<std::size_t>(Side::kTarget);
    double sample = 0.0;
    for (std::uint32_t layer = 0; layer <= l_max; ++layer) {
        const std::uint32_t rest = l_max - layer;
        if (const auto* trees = state.trees_at(walk_s[layer]))
            sample += trees->side[S].query(rest) - trees->side[T].query(rest);
        if (const auto* trees = state.trees_at(walk_t[layer]))
            sample += trees->side[T].query(rest) - trees->side[S].query(rest);
    }
    return sample;
}

double bernstein_radius(double variance, double sample_bound, double failure_prob, std::uint64_t samples) {
    const double log_term = std::log(3.0 / failure_prob);
    const double i = static_cast<double>(samples);
    return std::sqrt(2.0 * variance * log_term / i) + 6.0 * sample_bound * log_term / i;
}

AmcResult bisper_amc(const PushState& state, const EstimatorPolicy& policy, const QueryParams& params,
                     const AmcOptions& options) {
    AmcResult result;
    const std::uint64_t budget = policy.walk_budget;
    if (budget == 0) return result;

    const Graph& g = state.graph();
    const CounterRng base(params.seed);
    CounterRng rng_s = base.split(1);
    CounterRng rng_t = base.split(2);
    std::vector<NodeId> walk_s(state.l_max() + 1u), walk_t(state.l_max() + 1u);
    const double bound = policy.sample_bound();
    const std::uint32_t interval = std::max<std::uint32_t>(options.check_interval, 1);

    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t i = 0;
    while (i < budget) {
        sample_walk(g, state.endpoint(Side::kSource), rng_s, walk_s);
        sample_walk(g, state.endpoint(Side::kTarget), rng_t, walk_t);
        const double sample = compute_t_i(state, walk_s, walk_t);
        sum += sample;
        sum_sq += sample * sample;
        ++i;
        if (options.early_stop && i % interval == 0) {
            const double mean = sum / static_cast<double>(i);
            const double variance = std::max(0.0, sum_sq / static_cast<double>(i) - mean * mean);
            if (bernstein_radius(variance, bound, params.failure_prob, i) <= params.epsilon) {
                result.stopped_early = i < budget;
                break;
            }
        }
    }
    result.walks_used = i;
    result.t_hat = sum / static_cast<double>(i);
    return result;
}

Estimate bisper_query(const Graph& g, const QueryParams& params, std::optional<double> r_max_override,
                      const AmcOptions& options) {
    validate(g, params);
    const auto started = std::chrono::steady_clock::now();
    Estimate estimate;
    if (params.s == params.t) {
        estimate.policy.regime = PushRegime::kFullPush;
        estimate.elapsed = std::chrono::steady_clock::now() - started;
        return estimate;
    }

    double r_max;
    if (r_max_override) {
        r_max = *r_max_override;
    } else {
        r_max = choose_r_max(params.l_max, params.epsilon, params.failure_prob, min_endpoint_degree(g, params),
                             g.num_edges())
                    .r_max;
    }

    const PushState state = push_phase(g, params, r_max);
    estimate.policy = make_policy(state, params, r_max, r_max_override.has_value());
    const AmcResult amc = bisper_amc(state, estimate.policy, params, options);

    estimate.value = amc.t_hat + state.reserve_estimate();
    estimate.walks_used = amc.walks_used;
    estimate.stopped_early = amc.stopped_early;
    estimate.pushes = state.work();
    estimate.elapsed = std::chrono::steady_clock::now() - started;
    return estimate;
}

}  // namespace bisper
