#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bisper/graph.hpp"

namespace bisper {

enum class Method { kBisper, kMcOnly, kPushOnly };

std::string_view to_string(Method method);
/// Accepts "bisper", "mc_only", "push_only". Throws std::invalid_argument.
Method parse_method(std::string_view name);

using QueryPair = std::pair<NodeId, NodeId>;

/// Distinct unordered pairs s != t drawn uniformly; same seed, same list.
std::vector<QueryPair> sample_query_pairs(const Graph& g, std::size_t count, std::uint64_t seed);

struct BenchmarkConfig {
    std::string dataset = "graph";
    std::vector<Method> methods{Method::kBisper};
    std::vector<double> epsilons{0.1};
    double failure_prob = 0.01;
    /// Wins over the lambda-driven walk length when set.
    std::optional<std::uint32_t> fixed_l_max;
    /// Spectral radius for the walk length; estimated from the graph if unset.
    std::optional<double> lambda;
    std::size_t pair_count = 100;
    std::uint64_t seed = 1;
    bool ground_truth = true;
};

struct BenchmarkRow {
    std::string dataset;
    /// Original ids; aggregate rows leave them empty.
    std::optional<OriginalId> s;
    std::optional<OriginalId> t;
    Method method = Method::kBisper;
    double epsilon = 0.0;
    std::optional<std::uint32_t> l_max;
    std::optional<double> estimate;
    std::optional<double> ground_truth;
    std::optional<double> abs_error;
    double walks = 0.0;
    double pushes = 0.0;
    double ms = 0.0;
    std::uint64_t seed = 0;

    bool aggregate() const noexcept { return !s.has_value(); }
};

inline constexpr std::string_view kCsvHeader =
    "dataset,s,t,method,epsilon,lmax,estimate,ground_truth,abs_error,walks,pushes,ms,seed";

/// One detail row per (pair, method, epsilon) in that order, then one
/// aggregate row (means over the detail rows) per (method, epsilon).
std::vector<BenchmarkRow> run_benchmark(const Graph& g, const BenchmarkConfig& config);

/// Seed used for a detail row; shared by all methods so runs are paired.
std::uint64_t row_seed(std::uint64_t base_seed, std::size_t pair_index, std::size_t epsilon_index);

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
std::vector<BenchmarkRow> read_csv(std::istream& in);

}  // namespace bisper
