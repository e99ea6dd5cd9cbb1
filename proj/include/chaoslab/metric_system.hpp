#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/point.hpp"

namespace chaoslab {

enum class SpaceKind { Interval, Circle, Symbolic, CA };

// Coarse class used by class-guarded inference rules.
enum class SystemClass { IntervalMap, CircleMap, Subshift, SFT, Odometer, CA };

const char* to_string(SpaceKind k);
const char* to_string(SystemClass c);

// Symbols of the Cantor metric are compared out to this radius; closer points
// are at distance 0 numerically.
inline constexpr int kCantorRadius = 62;

struct MetricSystem {
    using Metric = std::function<double(const Point&, const Point&)>;
    using Map = std::function<Point(const Point&)>;
    using Sampler = std::function<Point(std::uint64_t seed, std::int64_t horizon)>;
    // Some point y of the space with d(x, y) < rho, or nullopt if this
    // candidate index produced none.
    using Perturb = std::function<std::optional<Point>(const Point& x, double rho, std::uint64_t seed)>;
    // Second member of a coupled random pair.
    using Partner = std::function<Point(const Point& x, std::uint64_t seed, std::int64_t horizon)>;
    using IntervalImage = std::function<std::vector<std::pair<double, double>>(double lo, double hi)>;
    // Two points known to differ on finitely many coordinates, hence asymptotic.
    using PairGen = std::function<std::optional<std::pair<Point, Point>>(std::uint64_t seed, std::int64_t horizon)>;

    std::string label;
    SpaceKind space = SpaceKind::Interval;
    SystemClass family = SystemClass::IntervalMap;
    int alphabet = 0;
    bool pseudo_metric = false;

    Metric metric;
    Map map;
    Sampler sampler;
    Perturb perturb;
    Partner partner;
    PairGen asymptotic_pair;

    // Structural facts known at construction time.
    bool isometry = false;
    bool infinite = true;
    std::optional<std::string> blocking_word;

    // Interval and circle maps: the map on the bare coordinate.
    std::function<double(double)> scalar_map;

    // Piecewise-monotone interval maps only.
    std::vector<double> turning_points;
    bool piecewise_monotone = false;
    // Enclosure of the image of [lo, hi]; must over-approximate.
    IntervalImage interval_image;
};

Point iterate(const MetricSystem& system, const Point& x, std::int64_t n);

std::vector<double> distance_series(const MetricSystem& system, const Point& x, const Point& y,
                                    std::int64_t n);

Point sample_point(const MetricSystem& system, std::uint64_t seed, std::int64_t horizon = 1024);

// Throws InputError if `p` is not a point of the system's space.
void check_space(const MetricSystem& system, const Point& p);

// The Cantor metric 2^-min{|i| : x_i != y_i} over the common accessible range.
double cantor_metric(const SymbolicPoint& x, const SymbolicPoint& y);

double interval_metric(double x, double y);
double circle_metric(double s, double t);

}  // namespace chaoslab
