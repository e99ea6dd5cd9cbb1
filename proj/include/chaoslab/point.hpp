#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chaoslab {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

// Coordinates beyond this magnitude are never queried; tapes with infinite
// tails report it as their accessible bound.
inline constexpr std::int64_t kUnbounded = std::int64_t{1} << 60;

// Image of a configuration on an isometric factor (rotation or orbit offset).
// Two points with different images are never proximal.
struct FactorImage {
    enum class Kind { Circle, Offset };
    Kind kind = Kind::Circle;
    double value = 0.0;

    bool operator==(const FactorImage&) const = default;
};

// Immutable two-sided symbol store: an explicit window, optional periodic
// tails on either side, or a generator defined on [lo, hi].
class SymbolTape {
public:
    using Generator = std::function<Symbol(std::int64_t)>;

    static std::shared_ptr<const SymbolTape> window(std::int64_t lo, Word data,
                                                    Word left_tail = {}, Word right_tail = {});
    static std::shared_ptr<const SymbolTape> generated(Generator gen, std::int64_t lo = -kUnbounded,
                                                       std::int64_t hi = kUnbounded);

    // Returns a copy of `base` that also records its factor image at coordinate 0.
    static std::shared_ptr<const SymbolTape> with_factor(const std::shared_ptr<const SymbolTape>& base,
                                                         FactorImage image, double circle_step);

    Symbol at(std::int64_t i) const;
    bool contains(std::int64_t i) const { return i >= lo_ && i <= hi_; }
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }

    const std::optional<FactorImage>& factor() const { return factor_; }
    double circle_step() const { return circle_step_; }

private:
    SymbolTape() = default;

    std::int64_t lo_ = 0;
    std::int64_t hi_ = -1;
    std::int64_t data_lo_ = 0;
    Word data_;
    Word left_tail_;
    Word right_tail_;
    Generator gen_;
    std::optional<FactorImage> factor_;
    double circle_step_ = 0.0;
};

struct IntervalPoint {
    double x = 0.0;
};

// Angle as a fraction of a full turn, in [0, 1).
struct CirclePoint {
    double t = 0.0;
};

// A two-sided configuration: coordinate i reads tape position i + shift.
struct SymbolicPoint {
    std::shared_ptr<const SymbolTape> tape;
    std::int64_t shift = 0;

    Symbol at(std::int64_t i) const;
    bool contains(std::int64_t i) const { return tape->contains(i + shift); }
    std::int64_t lo() const;
    std::int64_t hi() const;
    SymbolicPoint shifted(std::int64_t n) const { return {tape, shift + n}; }
    std::optional<FactorImage> factor() const;
    Word read(std::int64_t from, std::int64_t to) const;  // inclusive
};

enum class Boundary { Periodic, Constant };

// Finite truncation of a CA configuration on [-W, W]. Under constant fill the
// cells outside [-core, core] are no longer exact.
struct CAWindow {
    Word cells;
    int alphabet = 2;
    Boundary boundary = Boundary::Periodic;
    Symbol fill = 0;
    int core = 0;

    int radius() const { return static_cast<int>(cells.size() / 2); }
    Symbol at(int i) const { return cells[static_cast<std::size_t>(i + radius())]; }
    Symbol& at(int i) { return cells[static_cast<std::size_t>(i + radius())]; }

    static CAWindow periodic(Word cells, int alphabet = 2);
    static CAWindow constant(Word cells, Symbol fill, int alphabet = 2);
    static CAWindow from_string(const std::string& s, Boundary boundary, Symbol fill = 0, int alphabet = 2);
    std::string str() const;

    bool operator==(const CAWindow&) const = default;
};

using Point = std::variant<IntervalPoint, CirclePoint, SymbolicPoint, CAWindow>;

std::string describe(const Point& p);

// Equality of representations (not of metric classes).
bool same_representation(const Point& a, const Point& b);

}  // namespace chaoslab
