#include <algorithm>
#include <cmath>
#include <sstream>

#include "chaoslab/error.hpp"
#include "chaoslab/metric_system.hpp"

namespace chaoslab {

std::shared_ptr<const SymbolTape> SymbolTape::window(std::int64_t lo, Word data, Word left_tail,
                                                     Word right_tail) {
    if (data.empty() && (left_tail.empty() || right_tail.empty()))
        throw InputError("symbol tape needs a nonempty window or two tails");
    auto t = std::shared_ptr<SymbolTape>(new SymbolTape());
    t->data_lo_ = lo;
    t->lo_ = left_tail.empty() ? lo : -kUnbounded;
    t->hi_ = right_tail.empty() ? lo + static_cast<std::int64_t>(data.size()) - 1 : kUnbounded;
    t->data_ = std::move(data);
    t->left_tail_ = std::move(left_tail);
    t->right_tail_ = std::move(right_tail);
    return t;
}

std::shared_ptr<const SymbolTape> SymbolTape::generated(Generator gen, std::int64_t lo, std::int64_t hi) {
    auto t = std::shared_ptr<SymbolTape>(new SymbolTape());
    t->gen_ = std::move(gen);
    t->lo_ = lo;
    t->hi_ = hi;
    return t;
}

std::shared_ptr<const SymbolTape> SymbolTape::with_factor(const std::shared_ptr<const SymbolTape>& base,
                                                          FactorImage image, double circle_step) {
    auto t = std::shared_ptr<SymbolTape>(new SymbolTape(*base));
    t->factor_ = image;
    t->circle_step_ = circle_step;
    return t;
}

Symbol SymbolTape::at(std::int64_t i) const {
    if (!contains(i)) {
        std::ostringstream os;
        os << "coordinate " << i << " outside accessible range [" << lo_ << ", " << hi_ << "]";
        throw InputError(os.str());
    }
    if (gen_) return gen_(i);
    const auto n = static_cast<std::int64_t>(data_.size());
    if (i < data_lo_) {
        const auto p = static_cast<std::int64_t>(left_tail_.size());
        const std::int64_t j = data_lo_ - 1 - i;
        return left_tail_[static_cast<std::size_t>(p - 1 - j % p)];
    }
    if (i >= data_lo_ + n) {
        const auto p = static_cast<std::int64_t>(right_tail_.size());
        const std::int64_t j = i - data_lo_ - n;
        return right_tail_[static_cast<std::size_t>(j % p)];
    }
    return data_[static_cast<std::size_t>(i - data_lo_)];
}

Symbol SymbolicPoint::at(std::int64_t i) const { return tape->at(i + shift); }

std::int64_t SymbolicPoint::lo() const {
    return tape->lo() <= -kUnbounded ? -kUnbounded : tape->lo() - shift;
}

std::int64_t SymbolicPoint::hi() const {
    return tape->hi() >= kUnbounded ? kUnbounded : tape->hi() - shift;
}

std::optional<FactorImage> SymbolicPoint::factor() const {
    const auto& f = tape->factor();
    if (!f) return std::nullopt;
    FactorImage out = *f;
    if (out.kind == FactorImage::Kind::Offset) {
        out.value += static_cast<double>(shift);
    } else {
        const double v = out.value + static_cast<double>(shift) * tape->circle_step();
        out.value = v - std::floor(v);
    }
    return out;
}

Word SymbolicPoint::read(std::int64_t from, std::int64_t to) const {
    Word w;
    w.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, to - from + 1)));
    for (std::int64_t i = from; i <= to; ++i) w.push_back(at(i));
    return w;
}

CAWindow CAWindow::periodic(Word cells, int alphabet) {
    if (cells.size() % 2 == 0) throw InputError("CA window length must be odd");
    CAWindow w;
    w.cells = std::move(cells);
    w.alphabet = alphabet;
    w.boundary = Boundary::Periodic;
    w.core = w.radius();
    return w;
}

CAWindow CAWindow::constant(Word cells, Symbol fill, int alphabet) {
    if (cells.size() % 2 == 0) throw InputError("CA window length must be odd");
    CAWindow w;
    w.cells = std::move(cells);
    w.alphabet = alphabet;
    w.boundary = Boundary::Constant;
    w.fill = fill;
    w.core = w.radius();
    return w;
}

CAWindow CAWindow::from_string(const std::string& s, Boundary boundary, Symbol fill, int alphabet) {
    Word cells;
    for (char c : s) {
        const int v = c - '0';
        if (v < 0 || v >= alphabet) throw InputError(std::string("symbol '") + c + "' outside alphabet");
        cells.push_back(static_cast<Symbol>(v));
    }
    return boundary == Boundary::Periodic ? periodic(std::move(cells), alphabet)
                                          : constant(std::move(cells), fill, alphabet);
}

std::string CAWindow::str() const {
    std::string s;
    for (Symbol c : cells) s.push_back(static_cast<char>('0' + c));
    return s;
}

std::string describe(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IntervalPoint>) {
                os << "interval:" << v.x;
            } else if constexpr (std::is_same_v<T, CirclePoint>) {
                os << "circle:" << v.t;
            } else if constexpr (std::is_same_v<T, SymbolicPoint>) {
                os << "symbolic:";
                if (auto f = v.factor()) os << (f->kind == FactorImage::Kind::Circle ? "angle=" : "offset=") << f->value << ":";
                const std::int64_t lo = std::max<std::int64_t>(v.lo(), -8);
                const std::int64_t hi = std::min<std::int64_t>(v.hi(), 8);
                for (std::int64_t i = lo; i <= hi; ++i) {
                    if (i == 0) os << '.';
                    os << static_cast<char>('0' + v.at(i));
                }
            } else {
                os << "ca:" << v.str();
            }
        },
        p);
    return os.str();
}

bool same_representation(const Point& a, const Point& b) {
    if (a.index() != b.index()) return false;
    if (auto* x = std::get_if<IntervalPoint>(&a)) return x->x == std::get<IntervalPoint>(b).x;
    if (auto* x = std::get_if<CirclePoint>(&a)) return x->t == std::get<CirclePoint>(b).t;
    if (auto* x = std::get_if<CAWindow>(&a)) return *x == std::get<CAWindow>(b);
    const auto& s = std::get<SymbolicPoint>(a);
    const auto& t = std::get<SymbolicPoint>(b);
    if (s.tape == t.tape && s.shift == t.shift) return true;
    const auto fs = s.factor();
    const auto ft = t.factor();
    if (fs && ft && fs->kind == ft->kind && fs->value != ft->value) return false;
    constexpr std::int64_t kCompareRadius = 4096;
    const std::int64_t lo = std::max({s.lo(), t.lo(), -kCompareRadius});
    const std::int64_t hi = std::min({s.hi(), t.hi(), kCompareRadius});
    for (std::int64_t i = lo; i <= hi; ++i)
        if (s.at(i) != t.at(i)) return false;
    return true;
}

const char* to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::Interval: return "interval";
        case SpaceKind::Circle: return "circle";
        case SpaceKind::Symbolic: return "symbolic";
        case SpaceKind::CA: return "ca";
    }
    return "?";
}

const char* to_string(SystemClass c) {
    switch (c) {
        case SystemClass::IntervalMap: return "interval";
        case SystemClass::CircleMap: return "circle";
        case SystemClass::Subshift: return "subshift";
        case SystemClass::SFT: return "sft";
        case SystemClass::Odometer: return "odometer";
        case SystemClass::CA: return "ca";
    }
    return "?";
}

double interval_metric(double x, double y) { return std::abs(x - y); }

double circle_metric(double s, double t) {
    const double d = std::abs(s - t);
    return std::min(d, 1.0 - d);
}

double cantor_metric(const SymbolicPoint& x, const SymbolicPoint& y) {
    for (int k = 0; k <= kCantorRadius; ++k) {
        bool any = false;
        for (const std::int64_t i : {std::int64_t{k}, std::int64_t{-k}}) {
            if (x.contains(i) && y.contains(i)) {
                any = true;
                if (x.at(i) != y.at(i)) return std::ldexp(1.0, -k);
            }
            if (k == 0) break;
        }
        if (!any) {
            if (k == 0) throw InputError("coordinate 0 is not accessible; horizon exceeds the sampled window");
            break;
        }
    }
    return 0.0;
}

void check_space(const MetricSystem& system, const Point& p) {
    const bool ok = [&] {
        switch (system.space) {
            case SpaceKind::Interval: return std::holds_alternative<IntervalPoint>(p);
            case SpaceKind::Circle: return std::holds_alternative<CirclePoint>(p);
            case SpaceKind::Symbolic: return std::holds_alternative<SymbolicPoint>(p);
            case SpaceKind::CA: return std::holds_alternative<CAWindow>(p);
        }
        return false;
    }();
    if (!ok)
        throw InputError("point " + describe(p) + " does not belong to the " + to_string(system.space) +
                         " space of system '" + system.label + "'");
}

Point iterate(const MetricSystem& system, const Point& x, std::int64_t n) {
    if (n < 0) throw InputError("iteration count must be nonnegative");
    check_space(system, x);
    Point p = x;
    for (std::int64_t k = 0; k < n; ++k) p = system.map(p);
    return p;
}

std::vector<double> distance_series(const MetricSystem& system, const Point& x, const Point& y,
                                    std::int64_t n) {
    if (n < 1) throw InputError("distance series needs N >= 1");
    check_space(system, x);
    check_space(system, y);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    Point a = x;
    Point b = y;
    for (std::int64_t k = 0;; ++k) {
        out.push_back(system.metric(a, b));
        if (k == n) break;
        a = system.map(a);
        b = system.map(b);
    }
    return out;
}

Point sample_point(const MetricSystem& system, std::uint64_t seed, std::int64_t horizon) {
    return system.sampler(seed, horizon);
}

}  // namespace chaoslab
