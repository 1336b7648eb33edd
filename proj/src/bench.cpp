#include "bisper/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bisper/engine.hpp"
#include "bisper/oracle.hpp"
#include "bisper/rng.hpp"

namespace bisper {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::kBisper: return "bisper";
        case Method::kMcOnly: return "mc_only";
        case Method::kPushOnly: return "push_only";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::kBisper, Method::kMcOnly, Method::kPushOnly})
        if (name == to_string(m)) return m;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::vector<QueryPair> sample_query_pairs(const Graph& g, std::size_t count, std::uint64_t seed) {
    const std::uint64_t n = g.num_nodes();
    const std::uint64_t available = n * (n - 1) / 2;
    if (count == 0) throw std::invalid_argument("sample_query_pairs: count must be at least 1");
    if (count > available)
        throw std::invalid_argument("sample_query_pairs: " + std::to_string(count) + " pairs requested, only " +
                                    std::to_string(available) + " exist");

    CounterRng rng(seed, 0x7061697273);
    std::vector<QueryPair> pairs;
    pairs.reserve(count);
    if (count * 2 > available) {
        // dense request: shuffle the full list
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
        for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng.below(i)]);
        pairs.resize(count);
        for (auto& p : pairs)
            if (rng.below(2)) std::swap(p.first, p.second);
        return pairs;
    }
    std::set<QueryPair> seen;
    while (pairs.size() < count) {
        const auto a = static_cast<NodeId>(rng.below(n));
        const auto b = static_cast<NodeId>(rng.below(n));
        if (a == b) continue;
        if (!seen.insert(std::minmax(a, b)).second) continue;
        pairs.emplace_back(a, b);
    }
    return pairs;
}

std::uint64_t row_seed(std::uint64_t base_seed, std::size_t pair_index, std::size_t epsilon_index) {
    return mix64(mix64(base_seed ^ 0x62656e6368ULL) + 0x9e3779b97f4a7c15ULL * (pair_index + 1)) ^
           mix64(epsilon_index + 1);
}

std::vector<BenchmarkRow> run_benchmark(const Graph& g, const BenchmarkConfig& config) {
    if (config.methods.empty()) throw std::invalid_argument("run_benchmark: no methods");
    if (config.epsilons.empty()) throw std::invalid_argument("run_benchmark: no epsilon values");

    const auto pairs = sample_query_pairs(g, config.pair_count, config.seed);
    std::optional<double> lambda = config.lambda;
    if (!config.fixed_l_max && !lambda) lambda = estimate_spectral_radius(g).lambda;

    std::map<std::tuple<NodeId, NodeId, std::uint32_t>, double> truth_cache;
    std::vector<BenchmarkRow> rows;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [s, t] = pairs[p];
        for (Method method : config.methods) {
            for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
                QueryParams params;
                params.s = s;
                params.t = t;
                params.epsilon = config.epsilons[e];
                params.failure_prob = config.failure_prob;
                params.seed = row_seed(config.seed, p, e);
                params.l_max = config.fixed_l_max
                                   ? *config.fixed_l_max
                                   : compute_l_max(*lambda, params.epsilon, g.degree(s), g.degree(t));

                Estimate est;
                switch (method) {
                    case Method::kBisper: est = bisper_query(g, params); break;
                    case Method::kMcOnly: est = mc_only_baseline(g, params); break;
                    case Method::kPushOnly: est = push_only_baseline(g, params); break;
                }

                BenchmarkRow row;
                row.dataset = config.dataset;
                row.s = g.original_id(s);
                row.t = g.original_id(t);
                row.method = method;
                row.epsilon = params.epsilon;
                row.l_max = params.l_max;
                row.estimate = est.value;
                row.walks = static_cast<double>(est.walks_used);
                row.pushes = static_cast<double>(est.pushes.push_ops);
                row.ms = std::chrono::duration<double, std::milli>(est.elapsed).count();
                row.seed = params.seed;
                if (config.ground_truth) {
                    const auto key = std::tuple{s, t, params.l_max};
                    auto it = truth_cache.find(key);
                    if (it == truth_cache.end())
                        it = truth_cache.emplace(key, truncated_er_power_iteration(g, s, t, params.l_max)).first;
                    row.ground_truth = it->second;
                    row.abs_error = std::abs(est.value - it->second);
                }
                rows.push_back(std::move(row));
            }
        }
    }

    const std::size_t detail_count = rows.size();
    for (Method method : config.methods) {
        for (double eps : config.epsilons) {
            BenchmarkRow agg;
            agg.dataset = config.dataset;
            agg.method = method;
            agg.epsilon = eps;
            agg.seed = config.seed;
            double err_sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < detail_count; ++i) {
                const auto& r = rows[i];
                if (r.method != method || r.epsilon != eps) continue;
                ++count;
                agg.walks += r.walks;
                agg.pushes += r.pushes;
                agg.ms += r.ms;
                if (r.abs_error) err_sum += *r.abs_error;
            }
            if (count > 0) {
                agg.walks /= static_cast<double>(count);
                agg.pushes /= static_cast<double>(count);
                agg.ms /= static_cast<double>(count);
                if (config.ground_truth) agg.abs_error = err_sum / static_cast<double>(count);
            }
            rows.push_back(std::move(agg));
        }
    }
    return rows;
}

namespace {

template <typename T>
void put(std::ostream& out, const std::optional<T>& value) {
    if (value) out << *value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

template <typename T>
std::optional<T> parse_optional(const std::string& field) {
    if (field.empty() || field == "*") return std::nullopt;
    std::istringstream in(field);
    in.imbue(std::locale::classic());
    T value{};
    in >> value;
    if (!in) throw std::invalid_argument("bad CSV field '" + field + "'");
    return value;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out.imbue(std::locale::classic());
    const auto precision = out.precision(15);
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.dataset << ',';
        if (r.aggregate())
            out << "*,*,";
        else
            out << *r.s << ',' << *r.t << ',';
        out << to_string(r.method) << ',' << r.epsilon << ',';
        put(out, r.l_max);
        out << ',';
        put(out, r.estimate);
        out << ',';
        put(out, r.ground_truth);
        out << ',';
        put(out, r.abs_error);
        out << ',' << r.walks << ',' << r.pushes << ',' << r.ms << ',' << r.seed << '\n';
    }
    out.precision(precision);
}

std::vector<BenchmarkRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("CSV header mismatch");
    std::vector<BenchmarkRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 13) throw std::invalid_argument("CSV row has " + std::to_string(f.size()) + " fields");
        BenchmarkRow r;
        r.dataset = f[0];
        r.s = parse_optional<OriginalId>(f[1]);
        r.t = parse_optional<OriginalId>(f[2]);
        r.method = parse_method(f[3]);
        r.epsilon = parse_optional<double>(f[4]).value_or(0.0);
        r.l_max = parse_optional<std::uint32_t>(f[5]);
        r.estimate = parse_optional<double>(f[6]);
        r.ground_truth = parse_optional<double>(f[7]);
        r.abs_error = parse_optional<double>(f[8]);
        r.walks = parse_optional<double>(f[9]).value_or(0.0);
        r.pushes = parse_optional<double>(f[10]).value_or(0.0);
        r.ms = parse_optional<double>(f[11]).value_or(0.0);
        r.seed = parse_optional<std::uint64_t>(f[12]).value_or(0);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace bisper
