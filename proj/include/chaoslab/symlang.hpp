#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chaoslab/point.hpp"
#include "chaoslab/verdict.hpp"

namespace chaoslab {

// Higher-block presentation of an SFT: vertices are admissible words of
// length m-1, edges admissible words of length m (m = max(2, longest
// forbidden word)), pruned to the subgraph where every vertex has both an
// in- and an out-edge.
class SFTGraph {
public:
    struct Edge {
        int from = 0;
        int to = 0;
        Symbol label = 0;  // last symbol of the edge word
    };

    static SFTGraph build(int alphabet, const std::vector<Word>& forbidden);

    int alphabet() const { return alphabet_; }
    int block() const { return block_; }
    bool empty() const { return vertices_.empty(); }
    const std::vector<Word>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<int>>& out_edges() const { return out_; }
    const std::vector<std::vector<std::uint32_t>>& successors() const { return succ_; }

    std::optional<int> vertex_of(const Word& w, std::size_t pos = 0) const;
    // True iff w occurs in some point of the subshift.
    bool admissible(const Word& w) const;
    std::vector<Word> words(int n) const;
    std::uint64_t count_words(int n) const;

private:
    int alphabet_ = 0;
    int block_ = 2;
    std::vector<Word> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<std::uint32_t>> succ_;
};

std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<std::uint32_t>>& adj);

struct ComplexityTable {
    std::vector<std::uint64_t> counts;  // counts[n-1] = p(n)
    bool exact = false;                 // false: lower bounds from a finite sample

    std::uint64_t p(int n) const { return counts.at(static_cast<std::size_t>(n - 1)); }
    int n_max() const { return static_cast<int>(counts.size()); }
};

ComplexityTable factor_complexity(const SFTGraph& g, int n_max);
// Distinct factors of a finite sample; needs sample.size() >= 100 * n_max.
ComplexityTable factor_complexity(const Word& sample, int n_max);

struct EntropyEstimate {
    double ratio = 0.0;  // log p(n_max) / n_max
    double slope = 0.0;  // slope of log p over the last half of the table
    bool stable = true;  // the two quarters of the last half agree within 0.02
};

EntropyEstimate complexity_entropy(const ComplexityTable& table);

struct Cylinder {
    Word word;
    int anchor = 0;  // coordinate of word[0]
};

// Cover elements are finite unions of cylinders.
struct CylinderCover {
    std::vector<std::vector<Cylinder>> elements;

    static CylinderCover partition(int alphabet, int length = 1);
    static CylinderCover whole_space(int alphabet);
};

struct CoverEntropy {
    double entropy = 0.0;              // log N(C^n_max) / n_max
    std::vector<std::uint64_t> sizes;  // N(C^n), n = 1..n_max
};

CoverEntropy cover_entropy(const SFTGraph& g, const CylinderCover& cover, int n_max);

bool sft_transitive(const SFTGraph& g);
bool sft_dense_periodic(const SFTGraph& g);
bool sft_product_transitive(const SFTGraph& g, int k);
// Exact structural facts.
bool sft_infinite(const SFTGraph& g);
bool sft_minimal(const SFTGraph& g);
bool sft_entropy_positive(const SFTGraph& g);

// `region` lists cylinder words at coordinate 0 whose union is A; empty means
// the whole space. Requires cylinder length L >= m - 1.
Verdict weakly_mixing_set_probe(const SFTGraph& g, const std::vector<Word>& region, int k, int L, int M);

}  // namespace chaoslab
