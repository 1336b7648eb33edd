#pragma once

#include <cstddef>
#include <vector>

namespace bisper {

/// Binary indexed tree over a fixed-length array of doubles.
///
/// Holds the running sequence of degree-normalized residues of one node, one
/// entry per walk layer. update() and query() each visit at most
/// floor(log2(length)) + 1 cells.
class PrefixSumTree {
public:
    PrefixSumTree() = default;
    explicit PrefixSumTree(std::size_t length) : cells_(length, 0.0) {}

    std::size_t size() const noexcept { return cells_.size(); }

    /// Adds delta to element index. Throws std::out_of_range.
    void update(std::size_t index, double delta) {
        check(index);
        walk_update(index, [&](std::size_t i) { cells_[i] += delta; });
    }

    /// Sum of elements 0..index. Throws std::out_of_range.
    double query(std::size_t index) const {
        check(index);
        double sum = 0.0;
        walk_query(index, [&](std::size_t i) { sum += cells_[i]; });
        return sum;
    }

    /// Number of cells update(index) / query(index) visit.
    std::size_t update_cost(std::size_t index) const;
    std::size_t query_cost(std::size_t index) const;

private:
    template <typename Visit>
    void walk_update(std::size_t index, Visit&& visit) const {
        for (std::size_t i = index + 1; i <= cells_.size(); i += i & (~i + 1)) visit(i - 1);
    }

    template <typename Visit>
    void walk_query(std::size_t index, Visit&& visit) const {
        for (std::size_t i = index + 1; i > 0; i &= i - 1) visit(i - 1);
    }

    void check(std::size_t index) const {
        if (index >= cells_.size()) throw_out_of_range(index);
    }
    [[noreturn]] void throw_out_of_range(std::size_t index) const;

    std::vector<double> cells_;
};

}  // namespace bisper
