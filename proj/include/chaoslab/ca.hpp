#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/point.hpp"

namespace chaoslab {

// Local rule of a one-dimensional CA. The neighborhood x_{i-r} .. x_{i+r},
// read as a base-q numeral with x_{i-r} most significant, indexes `table`.
struct CARule {
    int alphabet = 2;
    int radius = 1;
    Word table;
    std::optional<int> wolfram;

    static CARule from_wolfram(int number);
    // digits[k] is the output for neighborhood index k.
    static CARule from_table(int alphabet, int radius, const std::string& digits);

    std::size_t neighborhood_count() const { return table.size(); }
    std::string name() const;

    bool operator==(const CARule&) const = default;
};

CAWindow ca_step(const CARule& rule, const CAWindow& w);

// (sigma x)_i = x_{i+1}.
CAWindow shift_window(const CAWindow& w);

double cantor_distance(const CAWindow& x, const CAWindow& y);

// Fraction of disagreeing cells on [-n, n].
double besicovitch_estimate(const CAWindow& x, const CAWindow& y, int n);

// besicovitch_estimate at n = 2^5 .. 2^12, as far as both cores allow.
std::vector<std::pair<int, double>> besicovitch_trend(const CAWindow& x, const CAWindow& y);

struct BlockingWitness {
    Word word;
    int offset = 0;  // first cell of the determined column, relative to the word start
    int horizon = 0;
    std::int64_t evaluations = 0;
};

// Shortest, then lexicographically first, word whose column at `offset`
// (width = rule radius) is fixed for t <= horizon whatever the exterior.
std::optional<BlockingWitness> blocking_word_search(const CARule& rule, int max_len, int horizon);

struct PeriodicWitness {
    Word config;  // one spatial period
    int period = 0;

    bool operator==(const PeriodicWitness&) const = default;
};

// Spatially p-periodic configurations that return to themselves within t_max
// steps, sorted by configuration.
std::vector<PeriodicWitness> ca_periodic_points(const CARule& rule, int p, int t_max);

std::string word_string(const Word& w);
Word parse_word(const std::string& s, int alphabet);

}  // namespace chaoslab
