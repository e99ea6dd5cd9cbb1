#include <cmath>

#include <gtest/gtest.h>

#include "chaoslab/detectors.hpp"
#include "chaoslab/error.hpp"
#include "chaoslab/systems.hpp"

using namespace chaoslab;

namespace {

MetricSystem make(SystemKind kind) { return build_system({"t", std::move(kind)}).system; }

DetectorBudget small(std::int64_t n, std::int64_t m) {
    DetectorBudget b;
    b.horizon = n;
    b.samples = m;
    return b;
}

const double kRot = std::sqrt(2.0) - 1.0;

}  // namespace

TEST(Budget, Validation) {
    DetectorBudget b;
    EXPECT_NO_THROW(b.validate());
    b.delta = 0.5;
    EXPECT_THROW(b.validate(), ConfigError);
    b = {};
    b.horizon = 0;
    EXPECT_THROW(b.validate(), ConfigError);
    b = {};
    b.rho = 0;
    EXPECT_THROW(b.validate(), ConfigError);
}

TEST(ScrambledPair, FullShiftBlockPair) {
    const auto s = make(FullShiftSpec{2});
    const Point x = SymbolicPoint{SymbolTape::window(0, {0}, {0}, {0}), 0};
    Word blocks;
    for (int k = 0; (1 << k) < 600; ++k) {
        blocks.insert(blocks.end(), std::size_t{1} << k, 0);
        blocks.insert(blocks.end(), std::size_t{1} << k, 1);
    }
    const Point y = SymbolicPoint{SymbolTape::window(0, blocks, {0}, {0}), 0};
    auto b = small(512, 1);
    b.epsilon = 0.5;
    EXPECT_TRUE(scrambled_pair_test(s, x, y, b).is_holds());
}

TEST(ScrambledPair, IsometriesFail) {
    auto v = scrambled_pair_test(make(IdentitySpec{}), IntervalPoint{0.2}, IntervalPoint{0.5}, small(256, 1));
    EXPECT_TRUE(v.is_fails());
    EXPECT_EQ(v.method, Method::Exact);
    EXPECT_TRUE(scrambled_pair_test(make(RotationSpec{kRot}), CirclePoint{0.1}, CirclePoint{0.6}, small(256, 1)).is_fails());
}

TEST(ScrambledPair, SamePointRejected) {
    EXPECT_THROW(scrambled_pair_test(make(TentSpec{}), IntervalPoint{0.2}, IntervalPoint{0.2}, small(8, 1)), InputError);
}

TEST(ScrambledPair, MonotoneInBudget) {
    const auto s = make(FullShiftSpec{2});
    for (std::uint64_t i = 0; i < 30; ++i) {
        const Point x = sample_point(s, 2 * i, 2048), y = sample_point(s, 2 * i + 1, 2048);
        auto b = small(256, 1);
        b.tail_fraction = 1.0;
        const bool small_holds = scrambled_pair_test(s, x, y, b).is_holds();
        b.horizon = 1024;
        if (small_holds) EXPECT_FALSE(scrambled_pair_test(s, x, y, b).is_fails());
    }
}

TEST(LiYorke, FullShiftManyWitnesses) {
    const auto scan = li_yorke_scan(make(FullShiftSpec{2}), small(512, 2000));
    EXPECT_TRUE(scan.verdict.is_holds());
    EXPECT_GE(scan.witnesses, 20);
    EXPECT_LE(scan.examples.size(), 16u);
}

TEST(LiYorke, RotationFails) {
    const auto scan = li_yorke_scan(make(RotationSpec{kRot}), small(64, 100));
    EXPECT_TRUE(scan.verdict.is_fails());
    EXPECT_EQ(scan.verdict.method, Method::Exact);
}

TEST(LiYorke, DeterministicAcrossThreadCounts) {
    const auto s = make(FullShiftSpec{2});
    setenv("CHAOSLAB_THREADS", "1", 1);
    const auto a = li_yorke_scan(s, small(128, 300));
    setenv("CHAOSLAB_THREADS", "4", 1);
    const auto b = li_yorke_scan(s, small(128, 300));
    unsetenv("CHAOSLAB_THREADS");
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.witnesses, b.witnesses);
}

TEST(Sensitivity, Tent) {
    auto b = small(64, 256);
    b.rho = 0x1p-10;
    const auto v = sensitivity_test(make(TentSpec{}), b);
    ASSERT_TRUE(v.is_holds());
    EXPECT_GE(v.witness["eta"].get<double>(), 0.25);
}

TEST(Sensitivity, FullShiftEtaOne) {
    const auto v = sensitivity_test(make(FullShiftSpec{2}), small(128, 256));
    ASSERT_TRUE(v.is_holds());
    EXPECT_EQ(v.witness["eta"].get<double>(), 1.0);
}

TEST(Sensitivity, IsometryAndBlockingFail) {
    EXPECT_TRUE(sensitivity_test(make(RotationSpec{kRot}), small(64, 16)).is_fails());
    const auto v = sensitivity_test(make(CASpec{CARule::from_wolfram(128)}), small(64, 16));
    EXPECT_TRUE(v.is_fails());
    EXPECT_EQ(v.method, Method::Exact);
}

TEST(Sensitivity, BanksOnTransitiveSfts) {
    for (const auto& f : std::vector<std::vector<Word>>{{}, {{1, 1}}}) {
        const auto b = build_system({"s", SFTSpec{2, f}});
        ASSERT_TRUE(sft_transitive(*b.graph) && sft_dense_periodic(*b.graph));
        EXPECT_TRUE(sensitivity_test(b.system, small(256, 256)).is_holds());
    }
}

TEST(Equicontinuity, Examples) {
    const auto id = make(CASpec{CARule::from_wolfram(204)});
    EXPECT_TRUE(equicontinuity_point_test(id, sample_point(id, 1), small(64, 16)).is_holds());
    const auto rot = make(RotationSpec{kRot});
    EXPECT_TRUE(equicontinuity_point_test(rot, CirclePoint{0.3}, small(64, 16)).is_holds());
    const auto fs = make(FullShiftSpec{2});
    EXPECT_TRUE(equicontinuity_point_test(fs, sample_point(fs, 1, 256), small(256, 16)).is_fails());
}

TEST(Distality, Examples) {
    EXPECT_TRUE(distality_test(make(RotationSpec{kRot}), small(64, 64)).is_holds());
    EXPECT_TRUE(distality_test(make(OdometerSpec{2}), small(64, 64)).is_holds());
    EXPECT_TRUE(distality_test(make(FullShiftSpec{2}), small(256, 256)).is_fails());
}

TEST(Transitivity, Examples) {
    EXPECT_TRUE(numeric_transitivity_test(make(TentSpec{}), 32, small(64, 4096)).is_holds());
    const auto id = numeric_transitivity_test(make(IdentitySpec{}), 8, small(64, 256));
    EXPECT_TRUE(id.is_fails());
    EXPECT_EQ(id.method, Method::Exact);
    EXPECT_TRUE(numeric_transitivity_test(make(RotationSpec{kRot}), 32, small(10000, 1024)).is_holds());
    EXPECT_THROW(numeric_transitivity_test(make(FullShiftSpec{2}), 8, small(8, 8)), UnsupportedSystem);
}

TEST(Bowen, Tent) {
    const auto e = bowen_entropy(make(TentSpec{}), 14, 0x1p-8);
    EXPECT_NEAR(e.entropy, std::log(2.0), 0.1);
}

TEST(Bowen, RotationAndIdentity) {
    EXPECT_LE(bowen_entropy(make(RotationSpec{kRot}), 14, 0x1p-8).entropy, 0.01);
    EXPECT_EQ(bowen_entropy(make(IdentitySpec{}), 14, 0x1p-8).entropy, 0.0);
}

TEST(Laps, Counts) {
    const auto tent = lap_entropy(make(TentSpec{}), 10);
    EXPECT_EQ(tent.laps, 1024u);
    EXPECT_NEAR(tent.entropy, std::log(2.0), 1e-12);
    EXPECT_EQ(lap_entropy(make(IdentitySpec{}), 10).laps, 1u);
    EXPECT_NEAR(lap_entropy(make(LogisticSpec{4.0}), 12).entropy, std::log(2.0), 0.01);
    EXPECT_THROW(lap_entropy(make(RotationSpec{kRot}), 4), UnsupportedSystem);
}
