#include <cmath>

#include <gtest/gtest.h>

#include "chaoslab/error.hpp"
#include "chaoslab/report.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;

namespace {

MetricSystem make(SystemKind kind) { return build_system({"t", std::move(kind)}).system; }

double as_real(const Point& p) {
    if (auto* i = std::get_if<IntervalPoint>(&p)) return i->x;
    return std::get<CirclePoint>(p).t;
}

Point zeros() { return SymbolicPoint{SymbolTape::window(0, {0}, {0}, {0}), 0}; }

}  // namespace

TEST(Iterate, TentDoubles) { EXPECT_DOUBLE_EQ(as_real(iterate(make(TentSpec{}), IntervalPoint{0.4}, 1)), 0.8); }

TEST(Iterate, RotationWraps) {
    EXPECT_NEAR(as_real(iterate(make(RotationSpec{0.25}), CirclePoint{0.9}, 2)), 0.4, 1e-12);
}

TEST(Iterate, LogisticHitsZero) {
    EXPECT_DOUBLE_EQ(as_real(iterate(make(LogisticSpec{4.0}), IntervalPoint{0.5}, 2)), 0.0);
}

TEST(Iterate, ZeroStepsIsIdentity) {
    const auto s = make(TentSpec{});
    EXPECT_DOUBLE_EQ(as_real(iterate(s, IntervalPoint{0.3}, 0)), 0.3);
}

TEST(Iterate, WrongSpaceThrows) {
    EXPECT_THROW(iterate(make(TentSpec{}), CirclePoint{0.1}, 1), InputError);
    EXPECT_THROW(iterate(make(TentSpec{}), IntervalPoint{0.1}, -1), InputError);
}

TEST(Iterate, SemigroupLawOnZoo) {
    for (const auto& spec : zoo_systems()) {
        const auto s = build_system(spec).system;
        SplitMix64 g(17);
        for (int trial = 0; trial < 3; ++trial) {
            const auto a = static_cast<std::int64_t>(g.below(65));
            const auto b = static_cast<std::int64_t>(g.below(65));
            const Point x = sample_point(s, g(), 256);
            const Point lhs = iterate(s, x, a + b);
            const Point rhs = iterate(s, iterate(s, x, a), b);
            EXPECT_EQ(s.metric(lhs, rhs), 0.0) << spec.label;
        }
    }
}

TEST(DistanceSeries, IdentityConstant) {
    const auto s = make(IdentitySpec{});
    const auto d = distance_series(s, IntervalPoint{0.2}, IntervalPoint{0.5}, 3);
    ASSERT_EQ(d.size(), 4u);
    for (double v : d) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(DistanceSeries, RotationConstant) {
    const auto s = make(RotationSpec{std::sqrt(2.0) - 1.0});
    const auto d = distance_series(s, CirclePoint{0.1}, CirclePoint{0.7}, 500);
    for (double v : d) EXPECT_NEAR(v, d[0], 1e-9);
}

TEST(DistanceSeries, FullShiftSingleDifference) {
    const auto s = make(FullShiftSpec{2});
    Word w(7, 0);
    w[3] = 1;  // window starts at coordinate 0
    const Point y = SymbolicPoint{SymbolTape::window(0, w, {0}, {0}), 0};
    const auto d = distance_series(s, zeros(), y, 6);
    const std::vector<double> expect{0.125, 0.25, 0.5, 1.0, 0.5, 0.25, 0.125};
    ASSERT_EQ(d.size(), expect.size());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_DOUBLE_EQ(d[i], expect[i]) << i;
}

TEST(DistanceSeries, OdometerConstant) {
    const auto s = make(OdometerSpec{2});
    const Point x = sample_point(s, 1), y = sample_point(s, 2);
    const auto d = distance_series(s, x, y, 300);
    for (double v : d) EXPECT_NEAR(v, d[0], 1e-9);
}

TEST(SamplePoint, Deterministic) {
    for (const auto& spec : zoo_systems()) {
        const auto s = build_system(spec).system;
        EXPECT_EQ(s.metric(sample_point(s, 7), sample_point(s, 7)), 0.0) << spec.label;
    }
    const double x = as_real(sample_point(make(TentSpec{}), 1));
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
}

TEST(Metric, AxiomsOnZoo) {
    for (const auto& spec : zoo_systems()) {
        const auto s = build_system(spec).system;
        for (std::uint64_t i = 0; i < 60; ++i) {
            const Point x = sample_point(s, mix_seed(1, i)), y = sample_point(s, mix_seed(2, i)),
                        z = sample_point(s, mix_seed(3, i));
            EXPECT_EQ(s.metric(x, x), 0.0);
            EXPECT_EQ(s.metric(x, y), s.metric(y, x));
            EXPECT_LE(s.metric(x, z), s.metric(x, y) + s.metric(y, z) + 1e-12) << spec.label;
            if (s.pseudo_metric || s.metric(x, y) != 0.0) continue;
            // Symbolic points are only resolved out to the Cantor radius.
            if (const auto* a = std::get_if<SymbolicPoint>(&x)) {
                const auto& b = std::get<SymbolicPoint>(y);
                for (int i = -kCantorRadius; i <= kCantorRadius; ++i) EXPECT_EQ(a->at(i), b.at(i)) << spec.label;
            } else {
                EXPECT_TRUE(same_representation(x, y)) << spec.label;
            }
        }
    }
}

TEST(Metric, Cantor) {
    Word w(9, 0);
    w[4 + 3] = 1;
    const SymbolicPoint y{SymbolTape::window(-4, w, {0}, {0}), 0};
    EXPECT_DOUBLE_EQ(cantor_metric(std::get<SymbolicPoint>(zeros()), y), 0.125);
    EXPECT_DOUBLE_EQ(cantor_metric(y, y), 0.0);
}

TEST(SymbolTape, OutOfRangeThrows) {
    const SymbolicPoint p{SymbolTape::window(0, {0, 1, 1}), 0};
    EXPECT_EQ(p.at(2), 1);
    EXPECT_THROW(p.at(3), InputError);
    EXPECT_THROW(p.at(-1), InputError);
}

TEST(SymbolTape, PeriodicTails) {
    const SymbolicPoint p{SymbolTape::window(0, {1}, {0, 1}, {1, 0}), 0};
    EXPECT_EQ(p.at(-1), 1);
    EXPECT_EQ(p.at(-2), 0);
    EXPECT_EQ(p.at(1), 1);
    EXPECT_EQ(p.at(2), 0);
    EXPECT_EQ(p.at(1000), 0);
    EXPECT_EQ(p.at(1001), 1);
}
