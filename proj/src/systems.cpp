#include "chaoslab/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "chaoslab/error.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

constexpr std::int64_t kMargin = kCantorRadius + 2;
constexpr std::size_t kFixedPointLength = std::size_t{1} << 20;
constexpr int kOdometerDigits = 48;
constexpr int kCAWindowRadius = 128;

// Smallest r such that agreement on [-r, r] forces the Cantor distance below rho.
int agree_radius(double rho) {
    if (rho >= 1.0) return 0;
    return std::min(kCantorRadius, static_cast<int>(std::floor(-std::log2(rho))));
}

// Log-uniform in [2^-bits, 1).
double log_uniform(SplitMix64& g, int bits) { return std::exp2(-bits * g.uniform()); }

double frac(double v) { return v - std::floor(v); }

const SymbolicPoint& sym(const Point& p) { return std::get<SymbolicPoint>(p); }

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

// ---- interval and circle maps ----

MetricSystem interval_base(const std::string& label) {
    MetricSystem s;
    s.label = label;
    s.space = SpaceKind::Interval;
    s.family = SystemClass::IntervalMap;
    s.metric = [](const Point& a, const Point& b) {
        return interval_metric(std::get<IntervalPoint>(a).x, std::get<IntervalPoint>(b).x);
    };
    s.sampler = [](std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        return IntervalPoint{g.uniform()};
    };
    // Candidates 0 and 1 are x + rho/2 and x - rho/2, later ones random in the ball.
    s.perturb = [](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        const double x = std::get<IntervalPoint>(p).x;
        double y;
        if (seed < 2) {
            y = x + (seed == 0 ? 0.5 : -0.5) * rho;
        } else {
            SplitMix64 g(seed);
            y = x + (2.0 * g.uniform() - 1.0) * rho * 0.999;
        }
        if (y < 0.0 || y > 1.0 || y == x) return std::nullopt;
        return IntervalPoint{y};
    };
    s.partner = [](const Point& p, std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        if (g() & 1) return IntervalPoint{g.uniform()};
        const double x = std::get<IntervalPoint>(p).x;
        const double y = x + (g() & 1 ? 1 : -1) * log_uniform(g, 30) * 0.5;
        return IntervalPoint{std::clamp(y, 0.0, 1.0)};
    };
    return s;
}

template <class F>
void set_interval_map(MetricSystem& s, F f) {
    s.scalar_map = f;
    s.map = [f](const Point& p) -> Point { return IntervalPoint{f(std::get<IntervalPoint>(p).x)}; };
}

double down(double v) { return std::max(0.0, std::nextafter(v, -1.0)); }
double up(double v) { return std::min(1.0, std::nextafter(v, 2.0)); }

MetricSystem make_tent(const std::string& label) {
    auto s = interval_base(label);
    set_interval_map(s, [](double x) { return x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x; });
    s.piecewise_monotone = true;
    s.turning_points = {0.5};
    s.interval_image = [](double lo, double hi) -> std::vector<std::pair<double, double>> {
        double a, b;
        if (hi <= 0.5) {
            a = 2 * lo, b = 2 * hi;
        } else if (lo >= 0.5) {
            a = 2 - 2 * hi, b = 2 - 2 * lo;
        } else {
            a = std::min(2 * lo, 2 - 2 * hi), b = 1.0;
        }
        return {{down(a), up(b)}};
    };
    return s;
}

MetricSystem make_logistic(const std::string& label, double a) {
    auto s = interval_base(label);
    set_interval_map(s, [a](double x) { return std::clamp(a * x * (1.0 - x), 0.0, 1.0); });
    s.piecewise_monotone = true;
    s.turning_points = {0.5};
    s.interval_image = [a](double lo, double hi) -> std::vector<std::pair<double, double>> {
        auto f = [a](double x) { return a * x * (1.0 - x); };
        double u = std::min(f(lo), f(hi));
        double v = std::max(f(lo), f(hi));
        if (lo < 0.5 && hi > 0.5) v = a / 4.0;
        // Four ulps either way absorb the rounding of f.
        for (int i = 0; i < 4; ++i) u = down(u), v = up(v);
        return {{u, v}};
    };
    return s;
}

MetricSystem make_identity(const std::string& label) {
    auto s = interval_base(label);
    set_interval_map(s, [](double x) { return x; });
    s.isometry = true;
    s.piecewise_monotone = true;
    s.interval_image = [](double lo, double hi) -> std::vector<std::pair<double, double>> { return {{lo, hi}}; };
    return s;
}

MetricSystem make_rotation(const std::string& label, double alpha) {
    MetricSystem s;
    s.label = label;
    s.space = SpaceKind::Circle;
    s.family = SystemClass::CircleMap;
    s.isometry = true;
    s.metric = [](const Point& a, const Point& b) {
        return circle_metric(std::get<CirclePoint>(a).t, std::get<CirclePoint>(b).t);
    };
    s.scalar_map = [alpha](double t) { return frac(t + alpha); };
    s.map = [alpha](const Point& p) -> Point { return CirclePoint{frac(std::get<CirclePoint>(p).t + alpha)}; };
    s.sampler = [](std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        return CirclePoint{g.uniform()};
    };
    s.perturb = [](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        const double t = std::get<CirclePoint>(p).t;
        SplitMix64 g(seed);
        const double off = seed < 2 ? (seed == 0 ? 0.5 : -0.5) * rho : (2.0 * g.uniform() - 1.0) * rho * 0.999;
        if (off == 0.0) return std::nullopt;
        return CirclePoint{frac(t + off)};
    };
    s.partner = [](const Point&, std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        return CirclePoint{g.uniform()};
    };
    s.interval_image = [alpha](double lo, double hi) -> std::vector<std::pair<double, double>> {
        const double a = lo + alpha, b = hi + alpha;
        if (b <= 1.0) return {{down(a), up(b)}};
        if (a >= 1.0) return {{down(a - 1.0), up(b - 1.0)}};
        return {{down(a), 1.0}, {0.0, up(b - 1.0)}};
    };
    return s;
}

// ---- shared subshift plumbing ----

MetricSystem symbolic_base(const std::string& label, int alphabet, SystemClass family) {
    MetricSystem s;
    s.label = label;
    s.space = SpaceKind::Symbolic;
    s.family = family;
    s.alphabet = alphabet;
    s.metric = [](const Point& a, const Point& b) { return cantor_metric(sym(a), sym(b)); };
    s.map = [](const Point& p) -> Point { return sym(p).shifted(1); };
    return s;
}

// ---- Sturmian ----

std::shared_ptr<const SymbolTape> sturmian_tape(double alpha, double x0) {
    auto base = SymbolTape::generated([alpha, x0](std::int64_t i) -> Symbol {
        return frac(x0 + static_cast<double>(i) * alpha) >= 1.0 - alpha ? 1 : 0;
    });
    return SymbolTape::with_factor(base, {FactorImage::Kind::Circle, x0}, alpha);
}

MetricSystem make_sturmian(const std::string& label, double alpha) {
    auto s = symbolic_base(label, 2, SystemClass::Subshift);
    s.sampler = [alpha](std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        return SymbolicPoint{sturmian_tape(alpha, g.uniform()), 0};
    };
    // Recode a nearby angle, halving the offset until the codes agree on the ball.
    s.perturb = [alpha](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        const auto& x = sym(p);
        const double t = x.factor()->value;
        SplitMix64 g(seed);
        const double sign = seed % 2 == 0 ? 1.0 : -1.0;
        const double scale = 0.5 + 0.5 * g.uniform();
        for (int u = 1; u <= 52; ++u) {
            SymbolicPoint y{sturmian_tape(alpha, frac(t + sign * scale * std::exp2(-u))), 0};
            if (cantor_metric(x, y) < rho) return y;
        }
        return std::nullopt;
    };
    // The two codings of the angle 0 differ only at coordinates -1 and 0.
    s.asymptotic_pair = [alpha](std::uint64_t seed, std::int64_t) -> std::optional<std::pair<Point, Point>> {
        auto lower = sturmian_tape(alpha, 0.0);
        auto upper = SymbolTape::with_factor(SymbolTape::generated([lower](std::int64_t i) -> Symbol {
                                                 if (i == -1 || i == 0) return lower->at(i == -1 ? 0 : -1);
                                                 return lower->at(i);
                                             }),
                                             {FactorImage::Kind::Circle, 0.0}, alpha);
        const auto k = -static_cast<std::int64_t>(seed % 8);
        return std::make_pair(Point{SymbolicPoint{lower, k}}, Point{SymbolicPoint{upper, k}});
    };
    s.partner = [alpha](const Point& p, std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        const double theta = std::exp2(-1.0 - 15.0 * g.uniform()) * (g() & 1 ? 1.0 : -1.0);
        return SymbolicPoint{sturmian_tape(alpha, frac(sym(p).factor()->value + theta)), 0};
    };
    return s;
}

// ---- substitutions ----

bool constant_length(const std::vector<Word>& rules) {
    return std::all_of(rules.begin(), rules.end(), [&](const Word& w) { return w.size() == rules[0].size(); });
}

bool eventually_periodic(const Word& w) {
    // A fixed-point prefix this long with a period <= 64 on its second half is
    // treated as periodic; the offset factor is then not injective on orbits.
    const std::size_t half = w.size() / 2;
    for (std::size_t p = 1; p <= 64; ++p) {
        bool periodic = true;
        for (std::size_t i = half; i + p < w.size() && periodic; ++i) periodic = w[i] == w[i + p];
        if (periodic) return true;
    }
    return false;
}

MetricSystem make_substitution(const std::string& label, const SubstitutionSpec& spec,
                               std::shared_ptr<const Word>& fixed_point) {
    auto s = symbolic_base(label, static_cast<int>(spec.rules.size()), SystemClass::Subshift);
    auto u = std::make_shared<const Word>(substitution_fixed_point(spec.rules, spec.seed, kFixedPointLength));
    fixed_point = u;
    // Orbit offsets of a primitive aperiodic constant-length substitution map
    // into the odometer, so distinct offsets are never proximal.
    const bool offset_factor =
        constant_length(spec.rules) && spec.rules[0].size() >= 2 && substitution_primitive(spec.rules) && !eventually_periodic(*u);
    auto tape = SymbolTape::window(0, *u);
    if (offset_factor) tape = SymbolTape::with_factor(tape, {FactorImage::Kind::Offset, 0.0}, 0.0);
    const auto len = static_cast<std::int64_t>(u->size());

    s.sampler = [tape, len](std::uint64_t seed, std::int64_t horizon) -> Point {
        const std::int64_t hi = len - horizon - kMargin;
        if (hi <= kMargin) throw BudgetError("horizon exceeds the materialized fixed point");
        SplitMix64 g(seed);
        return SymbolicPoint{tape, kMargin + static_cast<std::int64_t>(g.below(static_cast<std::uint64_t>(hi - kMargin)))};
    };
    // Another occurrence of the central word around coordinate 0.
    s.perturb = [u, tape, len](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        const auto& x = sym(p);
        const std::int64_t k = x.shift;
        const std::int64_t r = agree_radius(rho) + static_cast<std::int64_t>(seed / 2 % 6);
        if (k - r < 0 || k + r >= len) return std::nullopt;
        const Symbol* base = u->data();
        const auto width = static_cast<std::size_t>(2 * r + 1);
        const Symbol* key = base + (k - r);
        if (seed % 2 == 0) {
            for (std::int64_t j = k + 1; j + r < len - kMargin; ++j)
                if (std::memcmp(base + (j - r), key, width) == 0) return SymbolicPoint{tape, j};
        } else {
            for (std::int64_t j = k - 1; j - r >= kMargin; --j)
                if (std::memcmp(base + (j - r), key, width) == 0) return SymbolicPoint{tape, j};
        }
        return std::nullopt;
    };
    s.partner = [u, tape, len](const Point& p, std::uint64_t seed, std::int64_t horizon) -> Point {
        const auto& x = sym(p);
        SplitMix64 g(seed);
        const std::int64_t r = static_cast<std::int64_t>(g.below(24));
        const std::int64_t k = x.shift;
        const Symbol* base = u->data();
        const auto width = static_cast<std::size_t>(2 * r + 1);
        for (std::int64_t j = k + 1; j + horizon + kMargin < len; ++j)
            if (std::memcmp(base + (j - r), base + (k - r), width) == 0) return SymbolicPoint{tape, j};
        return SymbolicPoint{tape, k + 1};
    };
    return s;
}

// ---- SFTs ----

// Symbols of a walk in the graph starting at vertex v.
Word random_walk(const SFTGraph& g, int v, std::size_t length, SplitMix64& rng) {
    Word w = g.vertices()[static_cast<std::size_t>(v)];
    while (w.size() < length) {
        const auto& outs = g.out_edges()[static_cast<std::size_t>(v)];
        const auto& e = g.edges()[static_cast<std::size_t>(outs[rng.below(outs.size())])];
        w.push_back(e.label);
        v = e.to;
    }
    w.resize(length);
    return w;
}

// Continues `prefix` (an admissible word ending in a vertex) to `length`
// symbols. choose(vertex, position) returns an out-edge index.
template <class Choose>
Word continue_walk(const SFTGraph& g, Word prefix, std::size_t length, Choose choose) {
    const auto vlen = static_cast<std::size_t>(g.block() - 1);
    auto v = g.vertex_of(prefix, prefix.size() - vlen);
    if (!v) return {};
    int cur = *v;
    while (prefix.size() < length) {
        const auto& outs = g.out_edges()[static_cast<std::size_t>(cur)];
        const auto& e = g.edges()[static_cast<std::size_t>(outs[choose(cur, prefix.size())])];
        prefix.push_back(e.label);
        cur = e.to;
    }
    return prefix;
}

MetricSystem make_sft(const std::string& label, int alphabet, std::shared_ptr<const SFTGraph> graph) {
    auto s = symbolic_base(label, alphabet, SystemClass::SFT);
    s.infinite = sft_infinite(*graph);
    const auto& g = *graph;
    const auto vlen = static_cast<std::int64_t>(g.block() - 1);

    s.sampler = [graph](std::uint64_t seed, std::int64_t horizon) -> Point {
        SplitMix64 rng(seed);
        const int v = static_cast<int>(rng.below(graph->vertices().size()));
        const auto length = static_cast<std::size_t>(horizon + 2 * kMargin + 1);
        return SymbolicPoint{SymbolTape::window(-kMargin, random_walk(*graph, v, length, rng)), 0};
    };
    // Keep x up to coordinate r + extra, then walk on with a different first step when possible.
    s.perturb = [graph, vlen](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        const auto& x = sym(p);
        const std::int64_t lo = x.lo(), hi = x.hi();
        const std::int64_t keep = agree_radius(rho) + static_cast<std::int64_t>(seed % 4);
        if (keep + 1 > hi || keep - vlen + 1 < lo) return std::nullopt;
        const Word prefix = x.read(lo, keep);
        const Symbol old = x.at(keep + 1);
        SplitMix64 rng(seed);
        const auto first = static_cast<std::size_t>(keep + 1 - lo);
        Word y = continue_walk(*graph, prefix, static_cast<std::size_t>(hi - lo + 1), [&](int v, std::size_t pos) {
            const auto& outs = graph->out_edges()[static_cast<std::size_t>(v)];
            if (pos == first) {
                std::vector<std::size_t> other;
                for (std::size_t i = 0; i < outs.size(); ++i)
                    if (graph->edges()[static_cast<std::size_t>(outs[i])].label != old) other.push_back(i);
                if (!other.empty()) return other[rng.below(other.size())];
            }
            return static_cast<std::size_t>(rng.below(outs.size()));
        });
        if (y.empty()) return std::nullopt;
        SymbolicPoint out{SymbolTape::window(lo, std::move(y)), 0};
        if (same_representation(p, out)) return std::nullopt;
        return out;
    };
    // Change one negative coordinate where the constraints allow it.
    s.asymptotic_pair = [graph](std::uint64_t seed, std::int64_t horizon) -> std::optional<std::pair<Point, Point>> {
        SplitMix64 rng(seed);
        const int v = static_cast<int>(rng.below(graph->vertices().size()));
        const auto length = static_cast<std::size_t>(horizon + 2 * kMargin + 1);
        const Word x = random_walk(*graph, v, length, rng);
        for (std::int64_t j = 1; j <= 16; ++j) {
            const auto pos = static_cast<std::size_t>(kMargin - j - static_cast<std::int64_t>(seed % 4));
            for (int sym = 0; sym < graph->alphabet(); ++sym) {
                if (sym == x[pos]) continue;
                Word y = x;
                y[pos] = static_cast<Symbol>(sym);
                if (!graph->admissible(y)) continue;
                return std::make_pair(Point{SymbolicPoint{SymbolTape::window(-kMargin, x), 0}},
                                      Point{SymbolicPoint{SymbolTape::window(-kMargin, std::move(y)), 0}});
            }
        }
        return std::nullopt;
    };
    // Follow x, resampling each step with a log-uniform probability.
    s.partner = [graph, vlen](const Point& p, std::uint64_t seed, std::int64_t) -> Point {
        const auto& x = sym(p);
        const std::int64_t lo = x.lo(), hi = x.hi();
        SplitMix64 rng(seed);
        const double q = log_uniform(rng, 12);
        Word y = continue_walk(*graph, x.read(lo, lo + vlen - 1), static_cast<std::size_t>(hi - lo + 1),
                               [&](int v, std::size_t pos) {
                                   const auto& outs = graph->out_edges()[static_cast<std::size_t>(v)];
                                   const Symbol want = x.at(lo + static_cast<std::int64_t>(pos));
                                   if (rng.uniform() >= q) {
                                       for (std::size_t i = 0; i < outs.size(); ++i)
                                           if (graph->edges()[static_cast<std::size_t>(outs[i])].label == want) return i;
                                   }
                                   return static_cast<std::size_t>(rng.below(outs.size()));
                               });
        return SymbolicPoint{SymbolTape::window(lo, std::move(y)), 0};
    };
    return s;
}

// ---- odometer ----

MetricSystem make_odometer(const std::string& label, int base) {
    MetricSystem s;
    s.label = label;
    s.space = SpaceKind::Symbolic;
    s.family = SystemClass::Odometer;
    s.alphabet = base;
    s.isometry = true;
    // One-sided digit sequences on [0, D), least significant digit first.
    s.metric = [](const Point& a, const Point& b) {
        const auto& x = sym(a);
        const auto& y = sym(b);
        for (int k = 0; k < kOdometerDigits; ++k)
            if (x.at(k) != y.at(k)) return std::ldexp(1.0, -k);
        return 0.0;
    };
    s.map = [base](const Point& p) -> Point {
        Word d = sym(p).read(0, kOdometerDigits - 1);
        for (auto& c : d) {
            if (c + 1 < base) {
                ++c;
                break;
            }
            c = 0;
        }
        return SymbolicPoint{SymbolTape::window(0, std::move(d)), 0};
    };
    s.sampler = [base](std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        Word d(kOdometerDigits);
        for (auto& c : d) c = static_cast<Symbol>(g.below(static_cast<std::uint64_t>(base)));
        return SymbolicPoint{SymbolTape::window(0, std::move(d)), 0};
    };
    s.perturb = [base](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        const int k = agree_radius(rho) + 1 + static_cast<int>(seed % 4);
        if (k >= kOdometerDigits) return std::nullopt;
        Word d = sym(p).read(0, kOdometerDigits - 1);
        d[static_cast<std::size_t>(k)] = static_cast<Symbol>((d[static_cast<std::size_t>(k)] + 1) % base);
        return SymbolicPoint{SymbolTape::window(0, std::move(d)), 0};
    };
    s.partner = [base](const Point& p, std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        const auto k = static_cast<std::size_t>(g.below(kOdometerDigits));
        Word d = sym(p).read(0, kOdometerDigits - 1);
        for (std::size_t i = k; i < d.size(); ++i) d[i] = static_cast<Symbol>(g.below(static_cast<std::uint64_t>(base)));
        return SymbolicPoint{SymbolTape::window(0, std::move(d)), 0};
    };
    return s;
}

// ---- cellular automata ----

bool is_identity_rule(const CARule& rule) {
    const auto q = static_cast<std::size_t>(rule.alphabet);
    std::size_t below = 1;
    for (int i = 0; i < rule.radius; ++i) below *= q;
    for (std::size_t k = 0; k < rule.table.size(); ++k)
        if (rule.table[k] != (k / below) % q) return false;
    return true;
}

MetricSystem make_ca(const std::string& label, const CARule& rule, std::optional<BlockingWitness>& blocking) {
    MetricSystem s;
    s.label = label;
    s.space = SpaceKind::CA;
    s.family = SystemClass::CA;
    s.alphabet = rule.alphabet;
    s.isometry = is_identity_rule(rule);
    s.metric = [](const Point& a, const Point& b) {
        return cantor_distance(std::get<CAWindow>(a), std::get<CAWindow>(b));
    };
    s.map = [rule](const Point& p) -> Point { return ca_step(rule, std::get<CAWindow>(p)); };
    const int q = rule.alphabet;
    s.sampler = [q](std::uint64_t seed, std::int64_t) -> Point {
        SplitMix64 g(seed);
        Word cells(2 * kCAWindowRadius + 1);
        for (auto& c : cells) c = static_cast<Symbol>(g.below(static_cast<std::uint64_t>(q)));
        return CAWindow::periodic(std::move(cells), q);
    };
    // Change one cell just outside the ball, to the right for even candidates.
    s.perturb = [q](const Point& p, double rho, std::uint64_t seed) -> std::optional<Point> {
        CAWindow w = std::get<CAWindow>(p);
        const int k = (agree_radius(rho) + 1 + static_cast<int>(seed / 2 % 4)) * (seed % 2 == 0 ? 1 : -1);
        if (std::abs(k) > w.radius()) return std::nullopt;
        w.at(k) = static_cast<Symbol>((w.at(k) + 1 + static_cast<int>(seed / 8 % static_cast<std::uint64_t>(q - 1))) % q);
        return w;
    };
    s.partner = [q](const Point& p, std::uint64_t seed, std::int64_t) -> Point {
        CAWindow w = std::get<CAWindow>(p);
        SplitMix64 g(seed);
        const double prob = log_uniform(g, 12);
        for (auto& c : w.cells)
            if (g.uniform() < prob) c = static_cast<Symbol>(g.below(static_cast<std::uint64_t>(q)));
        return w;
    };
    if (rule.alphabet <= 4) blocking = blocking_word_search(rule, rule.alphabet == 2 ? 12 : 6, 512);
    if (blocking) s.blocking_word = word_string(blocking->word);
    return s;
}

}  // namespace

std::string type_name(const SystemKind& kind) {
    return std::visit(Overloaded{
                          [](const TentSpec&) { return std::string("tent"); },
                          [](const LogisticSpec&) { return std::string("logistic"); },
                          [](const RotationSpec&) { return std::string("rotation"); },
                          [](const IdentitySpec&) { return std::string("identity"); },
                          [](const SturmianSpec&) { return std::string("sturmian"); },
                          [](const SubstitutionSpec&) { return std::string("substitution"); },
                          [](const SFTSpec&) { return std::string("sft"); },
                          [](const FullShiftSpec&) { return std::string("fullshift"); },
                          [](const OdometerSpec&) { return std::string("odometer"); },
                          [](const CASpec&) { return std::string("ca"); },
                      },
                      kind);
}

void check_irrational(double alpha, const std::string& field) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(field, "alpha out of (0,1)");
    // Best rational approximations come from the continued fraction convergents.
    double x = alpha;
    std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(x);
        const auto ai = static_cast<std::uint64_t>(a);
        const std::uint64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > 1'000'000) break;
        // Every irrational has convergents within 1/q^2, so closeness alone
        // cannot mean rational; ask for an error far below that.
        const double qd = static_cast<double>(q2);
        const double err = std::abs(alpha - static_cast<double>(p2) / qd);
        if (err <= 1e-9 && err * qd * qd <= 1e-3)
            throw ConfigError(field, "alpha is within 1e-9 of " + std::to_string(p2) + "/" + std::to_string(q2) +
                                         " and is treated as rational");
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        const double r = x - a;
        if (r <= 0.0) break;
        x = 1.0 / r;
    }
}

void validate(const SystemSpec& spec) {
    std::visit(Overloaded{
                   [](const TentSpec&) {},
                   [](const IdentitySpec&) {},
                   [](const LogisticSpec& s) {
                       if (!(s.a > 0.0 && s.a <= 4.0)) throw ConfigError("a", "a out of (0,4]");
                   },
                   [](const RotationSpec& s) {
                       if (!(s.alpha >= 0.0 && s.alpha < 1.0)) throw ConfigError("alpha", "alpha out of [0,1)");
                   },
                   [](const SturmianSpec& s) { check_irrational(s.alpha); },
                   [](const SubstitutionSpec& s) {
                       if (s.rules.empty()) throw ConfigError("rules", "no substitution rules");
                       for (const auto& w : s.rules) {
                           if (w.empty()) throw ConfigError("rules", "substitution images must be nonempty");
                           for (Symbol c : w)
                               if (c >= s.rules.size()) throw ConfigError("rules", "image uses a symbol without a rule");
                       }
                       if (s.seed >= s.rules.size()) throw ConfigError("seed", "seed symbol has no rule");
                   },
                   [](const SFTSpec& s) {
                       if (s.alphabet < 1 || s.alphabet > 32) throw ConfigError("alphabet", "alphabet size out of [1,32]");
                       for (const auto& w : s.forbidden) {
                           if (w.empty()) throw ConfigError("forbidden", "forbidden words must be nonempty");
                           for (Symbol c : w)
                               if (c >= s.alphabet) throw ConfigError("forbidden", "forbidden word uses a symbol outside the alphabet");
                       }
                   },
                   [](const FullShiftSpec& s) {
                       if (s.alphabet < 1 || s.alphabet > 32) throw ConfigError("alphabet", "alphabet size out of [1,32]");
                   },
                   [](const OdometerSpec& s) {
                       if (s.base < 2 || s.base > 255) throw ConfigError("base", "base out of [2,255]");
                   },
                   [](const CASpec& s) {
                       if (s.rule.alphabet < 2) throw ConfigError("rule", "CA alphabet needs at least 2 symbols");
                   },
               },
               spec.kind);
}

BuiltSystem build_system(const SystemSpec& spec) {
    validate(spec);
    BuiltSystem b;
    b.spec = spec;
    const auto& label = spec.label;
    b.system = std::visit(
        Overloaded{
            [&](const TentSpec&) { return make_tent(label); },
            [&](const LogisticSpec& s) { return make_logistic(label, s.a); },
            [&](const RotationSpec& s) { return make_rotation(label, s.alpha); },
            [&](const IdentitySpec&) { return make_identity(label); },
            [&](const SturmianSpec& s) { return make_sturmian(label, s.alpha); },
            [&](const SubstitutionSpec& s) { return make_substitution(label, s, b.fixed_point); },
            [&](const SFTSpec& s) {
                b.graph = std::make_shared<const SFTGraph>(SFTGraph::build(s.alphabet, s.forbidden));
                if (b.graph->empty()) throw ConfigError("forbidden", "the forbidden words leave an empty subshift");
                return make_sft(label, s.alphabet, b.graph);
            },
            [&](const FullShiftSpec& s) {
                b.graph = std::make_shared<const SFTGraph>(SFTGraph::build(s.alphabet, {}));
                return make_sft(label, s.alphabet, b.graph);
            },
            [&](const OdometerSpec& s) { return make_odometer(label, s.base); },
            [&](const CASpec& s) {
                b.rule = s.rule;
                return make_ca(label, s.rule, b.blocking);
            },
        },
        spec.kind);
    return b;
}

Word sturmian_code(double alpha, double x0, std::size_t length) {
    check_irrational(alpha);
    Word w(length);
    for (std::size_t i = 0; i < length; ++i) w[i] = frac(x0 + static_cast<double>(i) * alpha) >= 1.0 - alpha ? 1 : 0;
    return w;
}

Word substitution_fixed_point(const std::vector<Word>& rules, Symbol seed, std::size_t length) {
    if (seed >= rules.size() || rules[seed].empty() || rules[seed][0] != seed)
        throw InputError("the image of the seed symbol must begin with the seed");
    if (length <= 1) return Word(length, seed);
    if (rules[seed].size() < 2) throw InputError("the seed image has length 1, so the fixed point does not grow");
    // The prefix of length |w| of theta(w) is w itself, so each pass only
    // needs to expand far enough to double the known prefix.
    Word w{seed};
    while (w.size() < length) {
        Word next;
        for (Symbol c : w) {
            if (c >= rules.size()) throw InputError("substitution image uses a symbol without a rule");
            next.insert(next.end(), rules[c].begin(), rules[c].end());
            if (next.size() >= length) break;
        }
        if (next.size() <= w.size()) throw InputError("substitution does not grow the fixed point");
        w = std::move(next);
    }
    w.resize(length);
    return w;
}

std::vector<std::vector<std::uint64_t>> incidence_matrix(const std::vector<Word>& rules) {
    const auto q = rules.size();
    std::vector<std::vector<std::uint64_t>> m(q, std::vector<std::uint64_t>(q, 0));
    for (std::size_t a = 0; a < q; ++a)
        for (Symbol b : rules[a])
            if (b < q) ++m[a][b];
    return m;
}

bool substitution_primitive(const std::vector<Word>& rules) {
    const auto q = rules.size();
    if (q == 0) return false;
    // Boolean powers suffice for positivity.
    std::vector<std::vector<char>> m(q, std::vector<char>(q, 0));
    const auto inc = incidence_matrix(rules);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b) m[a][b] = inc[a][b] > 0;
    auto power = m;
    for (std::size_t k = 1; k <= q * q; ++k) {
        bool positive = true;
        for (const auto& row : power)
            for (char c : row) positive = positive && c;
        if (positive) return true;
        std::vector<std::vector<char>> next(q, std::vector<char>(q, 0));
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t c = 0; c < q; ++c)
                if (power[a][c])
                    for (std::size_t b = 0; b < q; ++b) next[a][b] = next[a][b] || m[c][b];
        power = std::move(next);
    }
    return false;
}

std::optional<Word> language_sample(const BuiltSystem& built, std::size_t length) {
    if (built.fixed_point) {
        if (length > built.fixed_point->size()) throw BudgetError("sample longer than the materialized fixed point");
        return Word(built.fixed_point->begin(), built.fixed_point->begin() + static_cast<std::ptrdiff_t>(length));
    }
    if (const auto* s = std::get_if<SturmianSpec>(&built.spec.kind)) return sturmian_code(s->alpha, 0.0, length);
    if (built.graph) {
        SplitMix64 rng(0x5EED);
        return random_walk(*built.graph, 0, length, rng);
    }
    return std::nullopt;
}

Verdict uniform_recurrence_probe(const Word& sample, int n) {
    const nlohmann::json budget = {{"n", n}, {"L", sample.size()}};
    if (n < 1 || static_cast<std::size_t>(n) * 10 > sample.size())
        throw InputError("uniform recurrence probe needs 1 <= n <= L/10");
    std::map<Word, std::pair<std::size_t, std::size_t>> seen;  // first, last occurrence
    std::map<Word, std::size_t> gaps;
    const auto L = sample.size();
    std::size_t count_once = 0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= L; ++i) {
        Word f(sample.begin() + static_cast<std::ptrdiff_t>(i), sample.begin() + static_cast<std::ptrdiff_t>(i) + n);
        auto [it, fresh] = seen.emplace(f, std::make_pair(i, i));
        auto& g = gaps[f];
        if (fresh) {
            g = i + 1;  // gap from the start of the sample
        } else {
            g = std::max(g, i - it->second.second);
            it->second.second = i;
        }
    }
    std::size_t worst = 0;
    Word worst_word;
    for (auto& [f, occ] : seen) {
        if (occ.first == occ.second) ++count_once;
        const std::size_t g = std::max(gaps[f], L - occ.second);
        if (g > worst) worst = g, worst_word = f;
    }
    if (count_once > 0)
        return Verdict::inconclusive(budget, {{"factors", seen.size()}, {"seen_once", count_once}});
    if (worst * 4 > L)
        return Verdict::inconclusive(budget, {{"factors", seen.size()}, {"max_gap", worst}, {"word", word_string(worst_word)}});
    return Verdict::holds(Method::Empirical, {{"factors", seen.size()}, {"max_gap", worst}, {"word", word_string(worst_word)}},
                          budget);
}

std::size_t longest_periodic_run(const Word& w, int p) {
    if (p < 1) throw InputError("period must be positive");
    const auto pp = static_cast<std::size_t>(p);
    if (w.size() <= pp) return w.size();
    std::size_t best = pp, run = 0;
    for (std::size_t i = 0; i + pp < w.size(); ++i) {
        run = w[i] == w[i + pp] ? run + 1 : 0;
        best = std::max(best, run + pp);
    }
    return best;
}

}  // namespace chaoslab
