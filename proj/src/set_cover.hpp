#pragma once

#include <cstdint>
#include <vector>

namespace chaoslab::detail {

// Exact minimum set cover by branch and bound. Items are 0..universe-1 and
// every item must lie in at least one set. Throws BudgetError when the search
// exceeds `node_budget` branch nodes.
std::size_t min_set_cover(std::size_t universe, const std::vector<std::vector<std::uint32_t>>& sets,
                          std::uint64_t node_budget = 20'000'000);

}  // namespace chaoslab::detail
