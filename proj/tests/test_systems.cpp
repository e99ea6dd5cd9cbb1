#include <cmath>

#include <gtest/gtest.h>

#include "chaoslab/error.hpp"
#include "chaoslab/systems.hpp"

using namespace chaoslab;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

std::string str(const Word& w) { return word_string(w); }

const std::vector<Word> kMorse{{0, 1}, {1, 0}};
const std::vector<Word> kChacon{{0, 0, 1, 0}, {1}};
const std::vector<Word> kFibonacci{{0, 1}, {0}};

}  // namespace

TEST(Build, FullShiftIsShiftWithCantorMetric) {
    const auto b = build_system({"fs", FullShiftSpec{2}});
    EXPECT_EQ(b.system.space, SpaceKind::Symbolic);
    const Point x = sample_point(b.system, 3);
    const auto& sx = std::get<SymbolicPoint>(x);
    const auto& fx = std::get<SymbolicPoint>(b.system.map(x));
    for (int i = -20; i <= 20; ++i) EXPECT_EQ(fx.at(i), sx.at(i + 1));
}

TEST(Build, RotationIsIsometry) {
    const auto b = build_system({"r", RotationSpec{0.25}});
    EXPECT_TRUE(b.system.isometry);
    EXPECT_EQ(b.system.space, SpaceKind::Circle);
}

TEST(Build, GoldenMeanAvoidsForbiddenWord) {
    const auto b = build_system({"g", SFTSpec{2, {{1, 1}}}});
    ASSERT_TRUE(b.graph);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Point x = sample_point(b.system, s, 128);
        const auto& p = std::get<SymbolicPoint>(x);
        for (int i = -60; i < 128; ++i) EXPECT_FALSE(p.at(i) == 1 && p.at(i + 1) == 1);
    }
}

TEST(Build, InvalidParametersNameTheField) {
    try {
        build_system({"l", LogisticSpec{5.0}});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "a");
        EXPECT_NE(std::string(e.what()).find("a out of (0,4]"), std::string::npos);
    }
    EXPECT_THROW(build_system({"o", OdometerSpec{1}}), ConfigError);
    EXPECT_THROW(build_system({"s", SFTSpec{2, {{}}}}), ConfigError);
    EXPECT_THROW(build_system({"s", SFTSpec{2, {{0}, {1}}}}), ConfigError);
    EXPECT_THROW(build_system({"u", SubstitutionSpec{{{0, 1}, {}}, 0}}), ConfigError);
}

TEST(Irrational, RejectsNearRationals) {
    EXPECT_THROW(check_irrational(0.5), ConfigError);
    EXPECT_THROW(check_irrational(1.0 / 3.0 + 1e-12), ConfigError);
    EXPECT_THROW(check_irrational(355.0 / 999983.0), ConfigError);
    EXPECT_NO_THROW(check_irrational(kGolden));
    EXPECT_NO_THROW(check_irrational(std::sqrt(2.0) - 1.0));
    EXPECT_THROW(check_irrational(0.0), ConfigError);
}

TEST(Sturmian, CodeOfGoldenMean) {
    EXPECT_EQ(str(sturmian_code(kGolden, 0.0, 8)), "01011010");
    EXPECT_EQ(str(sturmian_code(0.3819660112501051, 0.0, 1)), "0");
}

TEST(Sturmian, FrequencyOfOnes) {
    const auto w = sturmian_code(kGolden, 0.0, 100000);
    double ones = 0;
    for (auto c : w) ones += c;
    EXPECT_NEAR(ones / 1e5, kGolden, 1e-2);
}

TEST(Sturmian, ComplexityIsNPlusOne) {
    const auto w = sturmian_code(kGolden, 0.0, 1000000);
    const auto t = factor_complexity(w, 30);
    for (int n = 1; n <= 30; ++n) EXPECT_EQ(t.p(n), static_cast<std::uint64_t>(n + 1)) << n;
}

TEST(Substitution, FixedPoints) {
    EXPECT_EQ(str(substitution_fixed_point(kMorse, 0, 8)), "01101001");
    EXPECT_EQ(str(substitution_fixed_point(kChacon, 0, 8)), "00100010");
    EXPECT_EQ(str(substitution_fixed_point(kFibonacci, 0, 1)), "0");
    EXPECT_THROW(substitution_fixed_point({{1, 0}, {0, 1}}, 0, 8), InputError);
}

TEST(Substitution, PrefixConsistency) {
    const auto a = substitution_fixed_point(kChacon, 0, 1000);
    const auto b = substitution_fixed_point(kChacon, 0, 5000);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
}

TEST(Substitution, Primitivity) {
    EXPECT_TRUE(substitution_primitive(kMorse));
    EXPECT_FALSE(substitution_primitive(kChacon));
    EXPECT_TRUE(substitution_primitive(kFibonacci));
}

TEST(Substitution, IncidenceMatrix) {
    const auto m = incidence_matrix(kChacon);
    EXPECT_EQ(m[0][0], 3u);
    EXPECT_EQ(m[0][1], 1u);
    EXPECT_EQ(m[1][0], 0u);
    EXPECT_EQ(m[1][1], 1u);
}

TEST(UniformRecurrence, Substitutions) {
    EXPECT_TRUE(uniform_recurrence_probe(substitution_fixed_point(kMorse, 0, 100000), 5).is_holds());
    EXPECT_TRUE(uniform_recurrence_probe(substitution_fixed_point(kChacon, 0, 100000), 5).is_holds());
}

TEST(UniformRecurrence, RandomFullShiftSampleIsInconclusive) {
    const auto b = build_system({"fs", FullShiftSpec{2}});
    const Point x = sample_point(b.system, 5, 10000);
    const Word w = std::get<SymbolicPoint>(x).read(0, 9999);
    EXPECT_TRUE(uniform_recurrence_probe(w, 12).is_inconclusive());
}

TEST(PeriodicRun, ChaconHasNoLongPeriodicFactor) {
    const auto w = substitution_fixed_point(kChacon, 0, 100000);
    for (int p = 1; p <= 12; ++p) EXPECT_LT(longest_periodic_run(w, p), 100u) << p;
    EXPECT_EQ(longest_periodic_run(Word(50, 1), 1), 50u);
}
