#include <algorithm>
#include <bit>
#include <cmath>

#include "chaoslab/ca.hpp"
#include "chaoslab/error.hpp"

namespace chaoslab {

namespace {

constexpr std::int64_t kBlockingBudget = 100'000'000;

std::size_t ipow(std::size_t base, int exp) {
    std::size_t v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

char symbol_char(Symbol s) { return static_cast<char>(s < 10 ? '0' + s : 'a' + (s - 10)); }

int char_symbol(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    return -1;
}

}  // namespace

std::string word_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Symbol c : w) s.push_back(symbol_char(c));
    return s;
}

Word parse_word(const std::string& s, int alphabet) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        const int v = char_symbol(c);
        if (v < 0 || v >= alphabet) throw InputError(std::string("symbol '") + c + "' outside alphabet");
        w.push_back(static_cast<Symbol>(v));
    }
    return w;
}

CARule CARule::from_wolfram(int number) {
    if (number < 0 || number > 255) throw ConfigError("wolfram", "rule number must be in [0, 255]");
    CARule r;
    r.alphabet = 2;
    r.radius = 1;
    r.table.resize(8);
    for (int k = 0; k < 8; ++k) r.table[static_cast<std::size_t>(k)] = static_cast<Symbol>((number >> k) & 1);
    r.wolfram = number;
    return r;
}

CARule CARule::from_table(int alphabet, int radius, const std::string& digits) {
    if (alphabet < 2 || alphabet > 32) throw ConfigError("alphabet", "CA alphabet size must be in [2, 32]");
    if (radius < 0) throw ConfigError("radius", "CA radius must be nonnegative");
    const std::size_t n = ipow(static_cast<std::size_t>(alphabet), 2 * radius + 1);
    if (digits.size() != n)
        throw ConfigError("table", "table must have exactly q^(2r+1) = " + std::to_string(n) + " digits");
    CARule r;
    r.alphabet = alphabet;
    r.radius = radius;
    try {
        r.table = parse_word(digits, alphabet);
    } catch (const InputError& e) {
        throw ConfigError("table", e.what());
    }
    if (alphabet == 2 && radius == 1) {
        int number = 0;
        for (int k = 0; k < 8; ++k) number |= r.table[static_cast<std::size_t>(k)] << k;
        r.wolfram = number;
    }
    return r;
}

std::string CARule::name() const {
    if (wolfram) return "wolfram-" + std::to_string(*wolfram);
    return "q" + std::to_string(alphabet) + "r" + std::to_string(radius) + ":" + word_string(table);
}

CAWindow ca_step(const CARule& rule, const CAWindow& w) {
    if (w.alphabet != rule.alphabet) throw InputError("window alphabet does not match rule");
    const int r = rule.radius;
    const int W = w.radius();
    const int size = 2 * W + 1;
    const bool periodic = w.boundary == Boundary::Periodic;
    if (!periodic && w.core < r)
        throw BudgetError("CA window core exhausted (core radius " + std::to_string(w.core) +
                          " < rule radius); use a larger window");
    CAWindow out = w;
    const auto q = static_cast<std::size_t>(rule.alphabet);
    for (int i = -W; i <= W; ++i) {
        std::size_t idx = 0;
        for (int j = i - r; j <= i + r; ++j) {
            Symbol s;
            if (j >= -W && j <= W) {
                s = w.at(j);
            } else if (periodic) {
                int k = ((j + W) % size + size) % size;
                s = w.cells[static_cast<std::size_t>(k)];
            } else {
                s = w.fill;
            }
            idx = idx * q + s;
        }
        out.at(i) = rule.table[idx];
    }
    if (!periodic) out.core = w.core - r;
    return out;
}

CAWindow shift_window(const CAWindow& w) {
    CAWindow out = w;
    const int W = w.radius();
    for (int i = -W; i <= W; ++i) {
        if (i + 1 <= W) {
            out.at(i) = w.at(i + 1);
        } else {
            out.at(i) = w.boundary == Boundary::Periodic ? w.at(-W) : w.fill;
        }
    }
    if (w.boundary == Boundary::Constant) out.core = std::max(-1, w.core - 1);
    return out;
}

double cantor_distance(const CAWindow& x, const CAWindow& y) {
    if (x.alphabet != y.alphabet) throw InputError("windows over different alphabets");
    if (x.core < 0 || y.core < 0) throw InputError("windows have no common valid core");
    const int c = std::min(x.core, y.core);
    for (int k = 0; k <= c; ++k) {
        if (x.at(k) != y.at(k) || x.at(-k) != y.at(-k)) return std::ldexp(1.0, -k);
    }
    return 0.0;
}

double besicovitch_estimate(const CAWindow& x, const CAWindow& y, int n) {
    if (n < 0 || n > x.core || n > y.core)
        throw InputError("Besicovitch radius " + std::to_string(n) + " exceeds a window core");
    int count = 0;
    for (int i = -n; i <= n; ++i) count += x.at(i) != y.at(i);
    return static_cast<double>(count) / static_cast<double>(2 * n + 1);
}

std::vector<std::pair<int, double>> besicovitch_trend(const CAWindow& x, const CAWindow& y) {
    std::vector<std::pair<int, double>> out;
    for (int n = 32; n <= 4096; n *= 2) {
        if (n > x.core || n > y.core) break;
        out.emplace_back(n, besicovitch_estimate(x, y, n));
    }
    return out;
}

namespace {

// Cell-wise sets of possible symbols, as bitmasks. Unknown cells (everything
// outside [lo, lo + masks.size())) may hold any symbol, so the propagated
// sets over-approximate the true ones and a singleton is a proof.
struct SetState {
    std::int64_t lo = 0;
    std::vector<std::uint32_t> masks;
};

class SetStepper {
public:
    explicit SetStepper(const CARule& rule) : rule_(rule), full_((1u << rule.alphabet) - 1) {}

    std::uint32_t full() const { return full_; }

    std::uint32_t image(const std::uint32_t* nb, std::int64_t& evals) const {
        const int width = 2 * rule_.radius + 1;
        const auto q = static_cast<std::size_t>(rule_.alphabet);
        std::uint32_t out = 0;
        // Enumerate neighborhoods compatible with the masks (mixed radix).
        std::vector<int> digit(static_cast<std::size_t>(width), 0);
        for (int j = 0; j < width; ++j) {
            if (nb[j] == 0) return 0;
            digit[static_cast<std::size_t>(j)] = std::countr_zero(nb[j]);
        }
        while (true) {
            std::size_t idx = 0;
            for (int j = 0; j < width; ++j) idx = idx * q + static_cast<std::size_t>(digit[static_cast<std::size_t>(j)]);
            out |= 1u << rule_.table[idx];
            ++evals;
            if (out == full_) return out;
            int j = width - 1;
            for (; j >= 0; --j) {
                auto& d = digit[static_cast<std::size_t>(j)];
                const std::uint32_t rest = nb[j] & ~((2u << d) - 1);
                if (rest) {
                    d = std::countr_zero(rest);
                    break;
                }
                d = std::countr_zero(nb[j]);
            }
            if (j < 0) return out;
        }
    }

    SetState step(const SetState& s, std::int64_t& evals) const {
        const int r = rule_.radius;
        const auto n = static_cast<std::int64_t>(s.masks.size());
        SetState out;
        out.lo = s.lo - r;
        out.masks.resize(static_cast<std::size_t>(n + 2 * r));
        std::vector<std::uint32_t> nb(static_cast<std::size_t>(2 * r + 1));
        for (std::int64_t i = 0; i < n + 2 * r; ++i) {
            const std::int64_t cell = out.lo + i;
            for (int j = -r; j <= r; ++j) {
                const std::int64_t k = cell + j - s.lo;
                nb[static_cast<std::size_t>(j + r)] = (k >= 0 && k < n) ? s.masks[static_cast<std::size_t>(k)] : full_;
            }
            out.masks[static_cast<std::size_t>(i)] = image(nb.data(), evals);
        }
        // Drop unconstrained cells at both ends.
        std::size_t a = 0;
        std::size_t b = out.masks.size();
        while (a < b && out.masks[a] == full_) ++a;
        while (b > a && out.masks[b - 1] == full_) --b;
        out.lo += static_cast<std::int64_t>(a);
        out.masks = std::vector<std::uint32_t>(out.masks.begin() + static_cast<std::ptrdiff_t>(a),
                                               out.masks.begin() + static_cast<std::ptrdiff_t>(b));
        return out;
    }

private:
    const CARule& rule_;
    std::uint32_t full_;
};

bool column_fixed(const SetState& s, int offset, int width) {
    for (int c = offset; c < offset + width; ++c) {
        const std::int64_t k = c - s.lo;
        if (k < 0 || k >= static_cast<std::int64_t>(s.masks.size())) return false;
        if (std::popcount(s.masks[static_cast<std::size_t>(k)]) != 1) return false;
    }
    return true;
}

}  // namespace

std::optional<BlockingWitness> blocking_word_search(const CARule& rule, int max_len, int horizon) {
    if (max_len < 1 || max_len > 12) throw InputError("blocking word length must be in [1, 12]");
    if (horizon < 1 || horizon > 1024) throw InputError("blocking horizon must be in [1, 1024]");
    const SetStepper stepper(rule);
    const int width = std::max(1, rule.radius);
    const auto q = static_cast<std::uint64_t>(rule.alphabet);
    std::int64_t evals = 0;
    for (int len = width; len <= max_len; ++len) {
        std::uint64_t count = 1;
        for (int i = 0; i < len; ++i) count *= q;
        Word word(static_cast<std::size_t>(len));
        for (std::uint64_t code = 0; code < count; ++code) {
            std::uint64_t c = code;
            for (int i = len - 1; i >= 0; --i) {
                word[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % q);
                c /= q;
            }
            for (int offset = 0; offset + width <= len; ++offset) {
                SetState s;
                s.lo = 0;
                for (Symbol sym : word) s.masks.push_back(1u << sym);
                bool ok = true;
                for (int t = 1; t <= horizon && ok; ++t) {
                    s = stepper.step(s, evals);
                    ok = column_fixed(s, offset, width);
                    if (evals > kBlockingBudget)
                        throw BudgetError("blocking word search exceeded 1e8 neighborhood evaluations");
                }
                if (ok) return BlockingWitness{word, offset, horizon, evals};
            }
        }
    }
    return std::nullopt;
}

std::vector<PeriodicWitness> ca_periodic_points(const CARule& rule, int p, int t_max) {
    if (p < 1) throw InputError("spatial period must be positive");
    const auto q = static_cast<std::uint64_t>(rule.alphabet);
    std::uint64_t states = 1;
    for (int i = 0; i < p; ++i) {
        states *= q;
        if (states > (std::uint64_t{1} << 20)) throw InputError("q^p exceeds 2^20");
    }
    const int r = rule.radius;
    std::vector<std::uint32_t> next(states);
    Word cfg(static_cast<std::size_t>(p));
    for (std::uint64_t code = 0; code < states; ++code) {
        std::uint64_t c = code;
        for (int i = p - 1; i >= 0; --i) {
            cfg[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % q);
            c /= q;
        }
        std::uint64_t out = 0;
        for (int i = 0; i < p; ++i) {
            std::size_t idx = 0;
            for (int j = i - r; j <= i + r; ++j) idx = idx * q + cfg[static_cast<std::size_t>(((j % p) + p) % p)];
            out = out * q + rule.table[idx];
        }
        next[code] = static_cast<std::uint32_t>(out);
    }
    // Cycles of the functional graph are exactly the periodic configurations.
    std::vector<int> period(states, 0);
    std::vector<std::uint8_t> color(states, 0);  // 0 new, 1 on current path, 2 done
    std::vector<std::uint32_t> path;
    for (std::uint64_t s0 = 0; s0 < states; ++s0) {
        if (color[s0]) continue;
        path.clear();
        std::uint32_t s = static_cast<std::uint32_t>(s0);
        while (color[s] == 0) {
            color[s] = 1;
            path.push_back(s);
            s = next[s];
        }
        if (color[s] == 1) {
            const auto it = std::find(path.begin(), path.end(), s);
            const int len = static_cast<int>(path.end() - it);
            for (auto jt = it; jt != path.end(); ++jt) period[*jt] = len;
        }
        for (auto v : path) color[v] = 2;
    }
    std::vector<PeriodicWitness> out;
    for (std::uint64_t code = 0; code < states; ++code) {
        if (period[code] == 0 || period[code] > t_max) continue;
        Word w(static_cast<std::size_t>(p));
        std::uint64_t c = code;
        for (int i = p - 1; i >= 0; --i) {
            w[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % q);
            c /= q;
        }
        out.push_back({std::move(w), period[code]});
    }
    return out;
}

}  // namespace chaoslab
