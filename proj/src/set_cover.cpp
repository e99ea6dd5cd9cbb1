#include "set_cover.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "chaoslab/error.hpp"

namespace chaoslab::detail {

namespace {

class Solver {
public:
    Solver(std::size_t universe, std::vector<std::vector<std::uint32_t>> sets, std::uint64_t budget)
        : sets_(std::move(sets)), covered_(universe, 0), item_sets_(universe), budget_(budget) {
        for (std::uint32_t s = 0; s < sets_.size(); ++s)
            for (auto i : sets_[s]) item_sets_[i].push_back(s);
        for (std::size_t i = 0; i < universe; ++i)
            if (item_sets_[i].empty()) throw InputError("set cover: an item lies in no set");
        for (const auto& s : sets_) max_size_ = std::max(max_size_, s.size());
        uncovered_ = universe;
    }

    std::size_t solve() {
        // Forced sets: an item covered by exactly one set.
        std::size_t forced = 0;
        for (std::size_t i = 0; i < item_sets_.size(); ++i) {
            if (!covered_[i] && item_sets_[i].size() == 1) {
                take(item_sets_[i][0]);
                ++forced;
            }
        }
        best_ = forced + greedy();
        search(forced);
        return best_;
    }

private:
    void take(std::uint32_t s) {
        for (auto i : sets_[s])
            if (covered_[i]++ == 0) --uncovered_;
    }

    void untake(std::uint32_t s) {
        for (auto i : sets_[s])
            if (--covered_[i] == 0) ++uncovered_;
    }

    std::size_t gain(std::uint32_t s) const {
        std::size_t g = 0;
        for (auto i : sets_[s]) g += covered_[i] == 0;
        return g;
    }

    std::size_t greedy() {
        std::vector<std::uint32_t> taken;
        while (uncovered_ > 0) {
            std::uint32_t best = 0;
            std::size_t best_gain = 0;
            for (std::uint32_t s = 0; s < sets_.size(); ++s) {
                const auto g = gain(s);
                if (g > best_gain) {
                    best_gain = g;
                    best = s;
                }
            }
            take(best);
            taken.push_back(best);
        }
        for (auto s : taken) untake(s);
        return taken.size();
    }

    void search(std::size_t depth) {
        if (++nodes_ > budget_) throw BudgetError("exact set cover exceeded its node budget");
        if (uncovered_ == 0) {
            best_ = std::min(best_, depth);
            return;
        }
        const std::size_t bound = depth + (uncovered_ + max_size_ - 1) / max_size_;
        if (bound >= best_) return;
        // Branch on the uncovered item with the fewest covering sets.
        std::size_t pick = std::numeric_limits<std::size_t>::max();
        std::size_t fewest = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < covered_.size(); ++i) {
            if (covered_[i] == 0 && item_sets_[i].size() < fewest) {
                fewest = item_sets_[i].size();
                pick = i;
            }
        }
        std::vector<std::pair<std::size_t, std::uint32_t>> order;
        for (auto s : item_sets_[pick]) order.emplace_back(gain(s), s);
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        for (const auto& [g, s] : order) {
            take(s);
            search(depth + 1);
            untake(s);
        }
    }

    std::vector<std::vector<std::uint32_t>> sets_;
    std::vector<std::uint32_t> covered_;
    std::vector<std::vector<std::uint32_t>> item_sets_;
    std::size_t uncovered_ = 0;
    std::size_t max_size_ = 1;
    std::size_t best_ = 0;
    std::uint64_t nodes_ = 0;
    std::uint64_t budget_;
};

// Drops duplicate sets and sets contained in another set.
std::vector<std::vector<std::uint32_t>> reduce(std::vector<std::vector<std::uint32_t>> sets) {
    for (auto& s : sets) std::sort(s.begin(), s.end());
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    if (sets.size() > 4000) return sets;
    std::vector<std::vector<std::uint32_t>> kept;
    for (auto& s : sets) {
        const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
            return std::includes(k.begin(), k.end(), s.begin(), s.end());
        });
        if (!dominated) kept.push_back(std::move(s));
    }
    return kept;
}

}  // namespace

std::size_t min_set_cover(std::size_t universe, const std::vector<std::vector<std::uint32_t>>& sets,
                          std::uint64_t node_budget) {
    if (universe == 0) return 0;
    Solver solver(universe, reduce(sets), node_budget);
    return solver.solve();
}

}  // namespace chaoslab::detail
