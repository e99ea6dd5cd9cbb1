#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "chaoslab/ca.hpp"
#include "chaoslab/error.hpp"
#include "chaoslab/symlang.hpp"
#include "set_cover.hpp"

namespace chaoslab {

namespace {

constexpr std::uint64_t kMaxBlockWords = std::uint64_t{1} << 22;

bool contains_factor(const Word& w, const Word& f) {
    if (f.size() > w.size()) return false;
    return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
}

bool avoids(const Word& w, const std::vector<Word>& forbidden) {
    return std::none_of(forbidden.begin(), forbidden.end(), [&](const Word& f) { return contains_factor(w, f); });
}

Word decode(std::uint64_t code, int len, int q) {
    Word w(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<Symbol>(code % static_cast<std::uint64_t>(q));
        code /= static_cast<std::uint64_t>(q);
    }
    return w;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t s = a + b;
    return s < a ? ~std::uint64_t{0} : s;
}

using Bits = std::vector<std::uint64_t>;

bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1; }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

}  // namespace

SFTGraph SFTGraph::build(int alphabet, const std::vector<Word>& forbidden) {
    if (alphabet < 1 || alphabet > 32) throw ConfigError("alphabet", "alphabet size must be in [1, 32]");
    std::size_t longest = 0;
    for (const auto& f : forbidden) {
        if (f.empty()) throw ConfigError("forbidden", "forbidden words must be nonempty");
        for (Symbol s : f)
            if (s >= alphabet) throw ConfigError("forbidden", "forbidden word uses a symbol outside the alphabet");
        longest = std::max(longest, f.size());
    }
    SFTGraph g;
    g.alphabet_ = alphabet;
    g.block_ = std::max<int>(2, static_cast<int>(longest));
    const int vlen = g.block_ - 1;
    std::uint64_t nverts = 1;
    for (int i = 0; i < g.block_; ++i) {
        nverts *= static_cast<std::uint64_t>(alphabet);
        if (nverts > kMaxBlockWords) throw BudgetError("SFT block presentation too large");
    }
    nverts /= static_cast<std::uint64_t>(alphabet);

    std::vector<int> index(nverts, -1);
    std::vector<Word> verts;
    for (std::uint64_t c = 0; c < nverts; ++c) {
        Word w = decode(c, vlen, alphabet);
        if (avoids(w, forbidden)) {
            index[c] = static_cast<int>(verts.size());
            verts.push_back(std::move(w));
        }
    }
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < verts.size(); ++v) {
        for (int s = 0; s < alphabet; ++s) {
            Word e = verts[v];
            e.push_back(static_cast<Symbol>(s));
            if (!avoids(e, forbidden)) continue;
            std::uint64_t code = 0;
            for (std::size_t i = 1; i < e.size(); ++i) code = code * static_cast<std::uint64_t>(alphabet) + e[i];
            const int to = index[code];
            if (to >= 0) edges.push_back({static_cast<int>(v), to, static_cast<Symbol>(s)});
        }
    }
    // Prune vertices without in- or out-edges until stable.
    std::vector<char> alive(verts.size(), 1);
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<int> indeg(verts.size(), 0), outdeg(verts.size(), 0);
        for (const auto& e : edges) {
            if (alive[static_cast<std::size_t>(e.from)] && alive[static_cast<std::size_t>(e.to)]) {
                ++outdeg[static_cast<std::size_t>(e.from)];
                ++indeg[static_cast<std::size_t>(e.to)];
            }
        }
        for (std::size_t v = 0; v < verts.size(); ++v) {
            if (alive[v] && (indeg[v] == 0 || outdeg[v] == 0)) {
                alive[v] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> remap(verts.size(), -1);
    for (std::size_t v = 0; v < verts.size(); ++v) {
        if (alive[v]) {
            remap[v] = static_cast<int>(g.vertices_.size());
            g.vertices_.push_back(verts[v]);
        }
    }
    g.out_.resize(g.vertices_.size());
    g.succ_.resize(g.vertices_.size());
    for (const auto& e : edges) {
        const int a = remap[static_cast<std::size_t>(e.from)];
        const int b = remap[static_cast<std::size_t>(e.to)];
        if (a < 0 || b < 0) continue;
        g.out_[static_cast<std::size_t>(a)].push_back(static_cast<int>(g.edges_.size()));
        g.succ_[static_cast<std::size_t>(a)].push_back(static_cast<std::uint32_t>(b));
        g.edges_.push_back({a, b, e.label});
    }
    return g;
}

std::optional<int> SFTGraph::vertex_of(const Word& w, std::size_t pos) const {
    const auto vlen = static_cast<std::size_t>(block_ - 1);
    if (pos + vlen > w.size()) return std::nullopt;
    const Word key(w.begin() + static_cast<std::ptrdiff_t>(pos), w.begin() + static_cast<std::ptrdiff_t>(pos + vlen));
    const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), key);
    if (it == vertices_.end() || *it != key) return std::nullopt;
    return static_cast<int>(it - vertices_.begin());
}

bool SFTGraph::admissible(const Word& w) const {
    const auto vlen = static_cast<std::size_t>(block_ - 1);
    if (w.size() < vlen) {
        return std::any_of(vertices_.begin(), vertices_.end(),
                           [&](const Word& v) { return std::equal(w.begin(), w.end(), v.begin()); });
    }
    auto prev = vertex_of(w, 0);
    if (!prev) return false;
    for (std::size_t pos = 1; pos + vlen <= w.size(); ++pos) {
        const auto cur = vertex_of(w, pos);
        if (!cur) return false;
        const auto& s = succ_[static_cast<std::size_t>(*prev)];
        if (std::find(s.begin(), s.end(), static_cast<std::uint32_t>(*cur)) == s.end()) return false;
        prev = cur;
    }
    return true;
}

std::vector<Word> SFTGraph::words(int n) const {
    const auto vlen = block_ - 1;
    std::vector<Word> out;
    if (n <= 0) return out;
    if (n <= vlen) {
        std::set<Word> prefixes;
        for (const auto& v : vertices_) prefixes.insert(Word(v.begin(), v.begin() + n));
        return {prefixes.begin(), prefixes.end()};
    }
    if (count_words(n) > (std::uint64_t{1} << 22)) throw BudgetError("too many admissible words to enumerate");
    // Depth-first extension of every vertex along edges.
    struct Frame {
        int vertex;
        std::size_t next;
    };
    for (std::size_t v0 = 0; v0 < vertices_.size(); ++v0) {
        Word w = vertices_[v0];
        std::vector<Frame> stack{{static_cast<int>(v0), 0}};
        while (!stack.empty()) {
            if (static_cast<int>(w.size()) == n) {
                out.push_back(w);
                stack.pop_back();
                w.pop_back();
                continue;
            }
            auto& f = stack.back();
            const auto& outs = out_[static_cast<std::size_t>(f.vertex)];
            if (f.next == outs.size()) {
                stack.pop_back();
                if (!stack.empty()) w.pop_back();
                continue;
            }
            const auto& e = edges_[static_cast<std::size_t>(outs[f.next++])];
            w.push_back(e.label);
            stack.push_back({e.to, 0});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t SFTGraph::count_words(int n) const {
    const int vlen = block_ - 1;
    if (n <= 0) return 0;
    if (n <= vlen) return words(n).size();
    std::vector<std::uint64_t> cnt(vertices_.size(), 1), nxt(vertices_.size());
    for (int len = vlen; len < n; ++len) {
        std::fill(nxt.begin(), nxt.end(), 0);
        for (const auto& e : edges_)
            nxt[static_cast<std::size_t>(e.to)] = sat_add(nxt[static_cast<std::size_t>(e.to)], cnt[static_cast<std::size_t>(e.from)]);
        cnt.swap(nxt);
    }
    std::uint64_t total = 0;
    for (auto c : cnt) total = sat_add(total, c);
    return total;
}

std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<std::uint32_t>>& adj) {
    const auto n = adj.size();
    constexpr std::uint32_t kUnset = ~std::uint32_t{0};
    std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::vector<std::vector<int>> comps;
    std::uint32_t counter = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < adj[v].size()) {
                const auto w = adj[v][i++];
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const auto vv = v;
            if (low[vv] == index[vv]) {
                std::vector<int> comp;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(static_cast<int>(w));
                } while (w != vv);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                const auto parent = call.back().first;
                low[parent] = std::min(low[parent], low[vv]);
            }
        }
    }
    return comps;
}

namespace {

void require_nonempty(const SFTGraph& g) {
    if (g.empty()) throw InputError("the subshift is empty");
}

std::vector<int> component_of(const SFTGraph& g) {
    const auto comps = strongly_connected_components(g.successors());
    std::vector<int> comp(g.vertices().size(), -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (int v : comps[c]) comp[static_cast<std::size_t>(v)] = static_cast<int>(c);
    return comp;
}

}  // namespace

bool sft_transitive(const SFTGraph& g) {
    require_nonempty(g);
    return strongly_connected_components(g.successors()).size() == 1;
}

bool sft_dense_periodic(const SFTGraph& g) {
    require_nonempty(g);
    const auto comp = component_of(g);
    return std::all_of(g.edges().begin(), g.edges().end(), [&](const SFTGraph::Edge& e) {
        return comp[static_cast<std::size_t>(e.from)] == comp[static_cast<std::size_t>(e.to)];
    });
}

bool sft_product_transitive(const SFTGraph& g, int k) {
    require_nonempty(g);
    if (k < 2 || k > 3) throw InputError("product power must be 2 or 3");
    const std::uint64_t n = g.vertices().size();
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    if (total > (std::uint64_t{1} << 22)) throw BudgetError("product graph exceeds 2^22 vertices");
    const auto& succ = g.successors();
    std::vector<std::vector<std::uint32_t>> adj(total);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> parts(static_cast<std::size_t>(k));
        std::uint64_t c = code;
        for (int i = k - 1; i >= 0; --i) {
            parts[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % n);
            c /= n;
        }
        std::vector<std::uint32_t> acc{0};
        for (int i = 0; i < k; ++i) {
            std::vector<std::uint32_t> next;
            for (auto a : acc)
                for (auto s : succ[parts[static_cast<std::size_t>(i)]]) next.push_back(static_cast<std::uint32_t>(a * n + s));
            acc.swap(next);
        }
        adj[code] = std::move(acc);
    }
    return strongly_connected_components(adj).size() == 1;
}

bool sft_infinite(const SFTGraph& g) {
    return std::any_of(g.out_edges().begin(), g.out_edges().end(), [](const auto& o) { return o.size() >= 2; });
}

bool sft_minimal(const SFTGraph& g) {
    require_nonempty(g);
    return !sft_infinite(g) && sft_transitive(g);
}

bool sft_entropy_positive(const SFTGraph& g) {
    require_nonempty(g);
    const auto comp = component_of(g);
    for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        int inside = 0;
        for (auto s : g.successors()[v]) inside += comp[s] == comp[v];
        if (inside >= 2) return true;
    }
    return false;
}

ComplexityTable factor_complexity(const SFTGraph& g, int n_max) {
    if (n_max < 1) throw InputError("n_max must be at least 1");
    ComplexityTable t;
    t.exact = true;
    for (int n = 1; n <= n_max; ++n) t.counts.push_back(g.count_words(n));
    return t;
}

namespace {

// Sorted cyclic shifts by prefix doubling with counting sorts.
std::vector<int> sort_cyclic_shifts(const std::vector<int>& s, int alphabet) {
    const int n = static_cast<int>(s.size());
    std::vector<int> p(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n)),
        cnt(static_cast<std::size_t>(std::max(alphabet, n)), 0);
    for (int x : s) ++cnt[static_cast<std::size_t>(x)];
    for (int i = 1; i < alphabet; ++i) cnt[static_cast<std::size_t>(i)] += cnt[static_cast<std::size_t>(i - 1)];
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(--cnt[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])])] = i;
    int classes = 1;
    c[static_cast<std::size_t>(p[0])] = 0;
    for (int i = 1; i < n; ++i) {
        if (s[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] != s[static_cast<std::size_t>(p[static_cast<std::size_t>(i - 1)])]) ++classes;
        c[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = classes - 1;
    }
    std::vector<int> pn(static_cast<std::size_t>(n)), cn(static_cast<std::size_t>(n));
    for (int h = 0; (1 << h) < n && classes < n; ++h) {
        const int shift = 1 << h;
        for (int i = 0; i < n; ++i) {
            int v = p[static_cast<std::size_t>(i)] - shift;
            pn[static_cast<std::size_t>(i)] = v < 0 ? v + n : v;
        }
        std::fill(cnt.begin(), cnt.begin() + classes, 0);
        for (int i = 0; i < n; ++i) ++cnt[static_cast<std::size_t>(c[static_cast<std::size_t>(pn[static_cast<std::size_t>(i)])])];
        for (int i = 1; i < classes; ++i) cnt[static_cast<std::size_t>(i)] += cnt[static_cast<std::size_t>(i - 1)];
        for (int i = n - 1; i >= 0; --i) {
            const int v = pn[static_cast<std::size_t>(i)];
            p[static_cast<std::size_t>(--cnt[static_cast<std::size_t>(c[static_cast<std::size_t>(v)])])] = v;
        }
        cn[static_cast<std::size_t>(p[0])] = 0;
        classes = 1;
        for (int i = 1; i < n; ++i) {
            const int a = p[static_cast<std::size_t>(i)];
            const int b = p[static_cast<std::size_t>(i - 1)];
            if (c[static_cast<std::size_t>(a)] != c[static_cast<std::size_t>(b)] ||
                c[static_cast<std::size_t>((a + shift) % n)] != c[static_cast<std::size_t>((b + shift) % n)])
                ++classes;
            cn[static_cast<std::size_t>(a)] = classes - 1;
        }
        c.swap(cn);
    }
    return p;
}

}  // namespace

ComplexityTable factor_complexity(const Word& sample, int n_max) {
    if (n_max < 1) throw InputError("n_max must be at least 1");
    if (sample.size() < 100 * static_cast<std::size_t>(n_max))
        throw BudgetError("sample of length " + std::to_string(sample.size()) + " is shorter than 100 * n_max");
    const int n = static_cast<int>(sample.size());
    // Suffix array (sentinel 0 appended) and Kasai LCP; suffix sa[i] adds the
    // lengths in (lcp[i], len] to the factor counts.
    std::vector<int> s(static_cast<std::size_t>(n) + 1);
    int alphabet = 1;
    for (int i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] = sample[static_cast<std::size_t>(i)] + 1;
        alphabet = std::max(alphabet, s[static_cast<std::size_t>(i)] + 1);
    }
    s[static_cast<std::size_t>(n)] = 0;
    auto shifts = sort_cyclic_shifts(s, alphabet);
    std::vector<int> sa(shifts.begin() + 1, shifts.end());
    std::vector<int> rank(static_cast<std::size_t>(n)), lcp(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) rank[static_cast<std::size_t>(sa[static_cast<std::size_t>(i)])] = i;
    for (int i = 0, h = 0; i < n; ++i) {
        const int r = rank[static_cast<std::size_t>(i)];
        if (r == 0) {
            h = 0;
            continue;
        }
        const int j = sa[static_cast<std::size_t>(r - 1)];
        while (i + h < n && j + h < n && sample[static_cast<std::size_t>(i + h)] == sample[static_cast<std::size_t>(j + h)]) ++h;
        lcp[static_cast<std::size_t>(r)] = h;
        if (h > 0) --h;
    }
    std::vector<std::int64_t> diff(static_cast<std::size_t>(n_max) + 2, 0);
    for (int r = 0; r < n; ++r) {
        const int len = n - sa[static_cast<std::size_t>(r)];
        const int from = lcp[static_cast<std::size_t>(r)] + 1;
        const int to = std::min(len, n_max);
        if (from > to) continue;
        diff[static_cast<std::size_t>(from)] += 1;
        diff[static_cast<std::size_t>(to) + 1] -= 1;
    }
    ComplexityTable t;
    t.exact = false;
    std::int64_t run = 0;
    for (int k = 1; k <= n_max; ++k) {
        run += diff[static_cast<std::size_t>(k)];
        t.counts.push_back(static_cast<std::uint64_t>(run));
    }
    return t;
}

EntropyEstimate complexity_entropy(const ComplexityTable& table) {
    if (table.counts.empty()) throw InputError("empty complexity table");
    for (auto c : table.counts)
        if (c == 0) throw InputError("complexity table has a zero count");
    const int n = table.n_max();
    auto lp = [&](int k) { return std::log(static_cast<double>(table.p(k))); };
    EntropyEstimate e;
    e.ratio = lp(n) / n;
    if (n == 1) {
        e.slope = e.ratio;
        return e;
    }
    const int h = n / 2;
    e.slope = std::max(0.0, (lp(n) - lp(h)) / (n - h));
    const int q = (h + n) / 2;
    if (q > h && q < n) {
        const double s1 = (lp(q) - lp(h)) / (q - h);
        const double s2 = (lp(n) - lp(q)) / (n - q);
        e.stable = std::abs(s1 - s2) <= 0.02;
    }
    return e;
}

CylinderCover CylinderCover::partition(int alphabet, int length) {
    CylinderCover c;
    std::uint64_t count = 1;
    for (int i = 0; i < length; ++i) count *= static_cast<std::uint64_t>(alphabet);
    for (std::uint64_t code = 0; code < count; ++code) c.elements.push_back({Cylinder{decode(code, length, alphabet), 0}});
    return c;
}

CylinderCover CylinderCover::whole_space(int alphabet) {
    CylinderCover c;
    std::vector<Cylinder> all;
    for (int s = 0; s < alphabet; ++s) all.push_back({Word{static_cast<Symbol>(s)}, 0});
    c.elements.push_back(std::move(all));
    return c;
}

CoverEntropy cover_entropy(const SFTGraph& g, const CylinderCover& cover, int n_max) {
    require_nonempty(g);
    if (n_max < 1) throw InputError("n_max must be at least 1");
    if (cover.elements.empty()) throw InputError("cover has no elements");
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& el : cover.elements) {
        if (el.empty()) throw InputError("cover element is empty");
        for (const auto& c : el) {
            if (c.word.empty()) throw InputError("cylinder word is empty");
            for (Symbol s : c.word)
                if (s >= g.alphabet()) throw InputError("cylinder word uses a symbol outside the alphabet");
            const int a = c.anchor;
            const int b = c.anchor + static_cast<int>(c.word.size()) - 1;
            lo = first ? a : std::min(lo, a);
            hi = first ? b : std::max(hi, b);
            first = false;
        }
    }
    auto matches = [&](const Word& u, const Cylinder& c, int j) {
        const auto off = static_cast<std::size_t>(c.anchor + j - lo);
        return std::equal(c.word.begin(), c.word.end(), u.begin() + static_cast<std::ptrdiff_t>(off));
    };
    const auto nel = cover.elements.size();
    CoverEntropy out;
    for (int n = 1; n <= n_max; ++n) {
        const auto universe = g.words(hi - lo + n);
        if (universe.size() > (std::size_t{1} << 20)) throw BudgetError("cover universe exceeds 2^20 words");
        std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> tuples;
        std::uint64_t incidences = 0;
        for (std::uint32_t wi = 0; wi < universe.size(); ++wi) {
            const auto& u = universe[wi];
            std::vector<std::vector<std::uint32_t>> choices(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                for (std::uint32_t e = 0; e < nel; ++e) {
                    const auto& el = cover.elements[e];
                    if (std::any_of(el.begin(), el.end(), [&](const Cylinder& c) { return matches(u, c, j); }))
                        choices[static_cast<std::size_t>(j)].push_back(e);
                }
                if (choices[static_cast<std::size_t>(j)].empty()) {
                    throw InputError("cover does not cover the subshift; uncovered word " + word_string(u) +
                                     " at time " + std::to_string(j));
                }
            }
            // Every tuple in the product of the choices covers u.
            std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
            std::vector<std::uint32_t> key(static_cast<std::size_t>(n));
            while (true) {
                for (int j = 0; j < n; ++j) key[static_cast<std::size_t>(j)] = choices[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
                tuples[key].push_back(wi);
                if (++incidences > 10'000'000) throw BudgetError("cover refinement exceeds 1e7 incidences");
                int j = n - 1;
                for (; j >= 0; --j) {
                    if (++idx[static_cast<std::size_t>(j)] < choices[static_cast<std::size_t>(j)].size()) break;
                    idx[static_cast<std::size_t>(j)] = 0;
                }
                if (j < 0) break;
            }
        }
        if (tuples.size() > (std::size_t{1} << 20)) throw BudgetError("more than 2^20 candidate cover elements");
        std::vector<std::vector<std::uint32_t>> sets;
        sets.reserve(tuples.size());
        for (auto& [k, v] : tuples) sets.push_back(std::move(v));
        out.sizes.push_back(detail::min_set_cover(universe.size(), sets));
    }
    out.entropy = std::log(static_cast<double>(out.sizes.back())) / n_max;
    return out;
}

Verdict weakly_mixing_set_probe(const SFTGraph& g, const std::vector<Word>& region, int k, int L, int M) {
    require_nonempty(g);
    const int vlen = g.block() - 1;
    if (k < 1 || k > 3) throw InputError("tuple size k must be in [1, 3]");
    if (L < vlen || L < 1) throw InputError("cylinder length L must be at least m - 1 = " + std::to_string(vlen));
    if (M < 1) throw InputError("time bound M must be positive");
    for (const auto& a : region)
        if (static_cast<int>(a.size()) > L) throw InputError("region cylinders must not be longer than L");
    const nlohmann::json budget = {{"k", k}, {"L", L}, {"M", M}};

    auto in_region = [&](const Word& w) {
        if (region.empty()) return true;
        return std::any_of(region.begin(), region.end(),
                           [&](const Word& a) { return std::equal(a.begin(), a.end(), w.begin()); });
    };
    std::vector<Word> cyl;
    for (auto& w : g.words(L))
        if (in_region(w)) cyl.push_back(std::move(w));
    if (cyl.empty()) throw InputError("region does not meet the subshift");
    // A weakly mixing set has at least two points; one cylinder cannot show that.
    if (cyl.size() < 2)
        return Verdict::inconclusive(budget, {{"reason", "region holds a single cylinder of length L"}});

    // Exact-length reachability R_e = A^e until the sequence repeats.
    const std::size_t nv = g.vertices().size();
    const std::size_t words = (nv + 63) / 64;
    using Matrix = std::vector<Bits>;
    Matrix cur(nv, Bits(words, 0));
    for (std::size_t v = 0; v < nv; ++v) set_bit(cur[v], v);
    std::vector<Matrix> powers;
    std::map<Matrix, int> seen;
    int preperiod = -1, period = -1;
    constexpr int kMaxPowers = 4096;
    while (static_cast<int>(powers.size()) < kMaxPowers) {
        auto [it, inserted] = seen.emplace(cur, static_cast<int>(powers.size()));
        if (!inserted) {
            preperiod = it->second;
            period = static_cast<int>(powers.size()) - it->second;
            break;
        }
        powers.push_back(cur);
        Matrix next(nv, Bits(words, 0));
        for (std::size_t a = 0; a < nv; ++a)
            for (std::size_t b = 0; b < nv; ++b)
                if (test_bit(cur[a], b))
                    for (auto s : g.successors()[b]) set_bit(next[a], s);
        cur.swap(next);
    }
    const int overlap = L - vlen;  // position of v's last vertex
    // Times to examine: [1, M], extended to cover every residue when the
    // power sequence is known to be eventually periodic.
    const bool decided = period > 0;
    const int horizon = decided ? std::max(M, overlap + preperiod + period) : M;
    auto reach = [&](int e, int a, int b) {
        if (e < static_cast<int>(powers.size())) return test_bit(powers[static_cast<std::size_t>(e)][static_cast<std::size_t>(a)], static_cast<std::size_t>(b));
        if (!decided) return false;
        const int r = preperiod + (e - preperiod) % period;
        return test_bit(powers[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)], static_cast<std::size_t>(b));
    };
    auto feasible = [&](const Word& v, const Word& u, int m) {
        const int e = m - overlap;
        if (e >= 0) return reach(e, *g.vertex_of(v, static_cast<std::size_t>(overlap)), *g.vertex_of(u, 0));
        Word merged = v;
        for (int i = 0; i < L; ++i) {
            const int pos = m + i;
            if (pos < L) {
                if (merged[static_cast<std::size_t>(pos)] != u[static_cast<std::size_t>(i)]) return false;
            } else {
                merged.push_back(u[static_cast<std::size_t>(i)]);
            }
        }
        return g.admissible(merged);
    };
    // Distinct feasibility sets over the pair choices (V, U).
    std::map<Bits, std::pair<std::size_t, std::size_t>> classes;
    const std::size_t hbits = (static_cast<std::size_t>(horizon) + 64) / 64;
    for (std::size_t vi = 0; vi < cyl.size(); ++vi) {
        for (std::size_t ui = 0; ui < cyl.size(); ++ui) {
            Bits f(hbits, 0);
            for (int m = 1; m <= horizon; ++m)
                if (feasible(cyl[vi], cyl[ui], m)) set_bit(f, static_cast<std::size_t>(m));
            classes.emplace(std::move(f), std::make_pair(vi, ui));
        }
    }
    std::vector<const Bits*> sets;
    std::vector<std::pair<std::size_t, std::size_t>> reps;
    for (const auto& [b, rep] : classes) {
        sets.push_back(&b);
        reps.push_back(rep);
    }
    const std::size_t c = sets.size();
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= c;
    if (total > 10'000'000) throw BudgetError("weak mixing probe exceeds 1e7 tuple checks");

    int worst_m = 0;
    bool beyond_budget = false;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (std::uint64_t t = 0; t < total; ++t) {
        std::uint64_t code = t;
        for (int i = 0; i < k; ++i) {
            idx[static_cast<std::size_t>(i)] = code % c;
            code /= c;
        }
        int first = 0;
        for (int m = 1; m <= horizon && first == 0; ++m) {
            bool all = true;
            for (int i = 0; i < k && all; ++i) all = test_bit(*sets[idx[static_cast<std::size_t>(i)]], static_cast<std::size_t>(m));
            if (all) first = m;
        }
        if (first == 0 || first > M) {
            nlohmann::json tuple = nlohmann::json::array();
            for (int i = 0; i < k; ++i) {
                const auto& [vi, ui] = reps[idx[static_cast<std::size_t>(i)]];
                tuple.push_back({{"V", word_string(cyl[vi])}, {"U", word_string(cyl[ui])}});
            }
            if (first == 0 && decided)
                return Verdict::fails(Method::Exact, {{"obstruction", "no common return time at any m"}, {"tuple", tuple},
                                                      {"preperiod", preperiod}, {"period", period}},
                                      budget);
            if (!beyond_budget) beyond_budget = true;
            continue;
        }
        worst_m = std::max(worst_m, first);
    }
    if (beyond_budget) return Verdict::inconclusive(budget, {{"reason", "some tuple needs m > M"}});
    return Verdict::holds(Method::Exact, {{"tuples_checked", total}, {"largest_first_m", worst_m}}, budget);
}

}  // namespace chaoslab
