#include "bisper/fenwick.hpp"

#include <stdexcept>
#include <string>

namespace bisper {

void PrefixSumTree::throw_out_of_range(std::size_t index) const {
    throw std::out_of_range("PrefixSumTree: index " + std::to_string(index) + " outside length " +
                            std::to_string(cells_.size()));
}

std::size_t PrefixSumTree::update_cost(std::size_t index) const {
    check(index);
    std::size_t count = 0;
    walk_update(index, [&](std::size_t) { ++count; });
    return count;
}

std::size_t PrefixSumTree::query_cost(std::size_t index) const {
    check(index);
    std::size_t count = 0;
    walk_query(index, [&](std::size_t) { ++count; });
    return count;
}

}  // namespace bisper
