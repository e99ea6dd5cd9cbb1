#include <gtest/gtest.h>

#include "chaoslab/profile.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;
using P = PropertyId;

namespace {

Verdict exact_holds() { return Verdict::holds(Method::Exact, {{"test", true}}); }
Verdict exact_fails() { return Verdict::fails(Method::Exact, {{"test", true}}); }
Verdict emp_holds() { return Verdict::holds(Method::Empirical, {{"test", true}}); }
Verdict emp_fails() { return Verdict::fails(Method::Empirical, {{"test", true}}); }
Verdict unknown() { return Verdict::inconclusive({{"test", true}}); }

const SystemFacts kInfiniteShift{SystemClass::Subshift, true};

}  // namespace

TEST(Properties, NamesRoundTrip) {
    for (auto p : kAllProperties) EXPECT_EQ(property_from_string(to_string(p)), p);
    EXPECT_THROW(property_from_string("Chaos"), std::exception);
}

TEST(Closure, TransitiveDensePeriodicGivesSensitivity) {
    VerdictMap m{{P::Transitive, exact_holds()}, {P::DensePeriodic, exact_holds()}};
    const auto c = implication_closure(m, kInfiniteShift);
    ASSERT_TRUE(c.count(P::Sensitivity));
    const auto& v = c.at(P::Sensitivity);
    EXPECT_TRUE(v.is_holds());
    EXPECT_EQ(v.method, Method::Inferred);
    EXPECT_EQ(v.witness["rule"], "a");
    EXPECT_TRUE(c.at(P::Devaney).is_holds());
}

TEST(Closure, GuardBlocksFiniteSystems) {
    VerdictMap m{{P::Transitive, exact_holds()}, {P::DensePeriodic, exact_holds()}};
    const auto c = implication_closure(m, {SystemClass::SFT, false});
    EXPECT_FALSE(c.count(P::Sensitivity) && c.at(P::Sensitivity).is_holds());
}

TEST(Closure, DistalGivesZeroEntropyAndNoScrambledPair) {
    VerdictMap m{{P::Distal, exact_holds()}};
    const auto c = implication_closure(m, kInfiniteShift);
    EXPECT_TRUE(c.at(P::EntropyZeroEvidence).is_holds());
    EXPECT_EQ(c.at(P::EntropyZeroEvidence).witness["rule"], "e");
    EXPECT_TRUE(c.at(P::ScrambledPairExists).is_fails());
}

TEST(Closure, EmptyMapStaysEmpty) { EXPECT_TRUE(implication_closure({}, kInfiniteShift).empty()); }

TEST(Closure, EmpiricalPremisesAreMarked) {
    VerdictMap m{{P::EntropyPositive, emp_holds()}};
    const auto c = implication_closure(m, kInfiniteShift);
    EXPECT_EQ(c.at(P::LiYorkeEvidence).method, Method::InferredFromEmpirical);
}

TEST(Closure, ExactNeverOverwritten) {
    VerdictMap m{{P::Transitive, exact_holds()}, {P::DensePeriodic, exact_holds()}, {P::Sensitivity, exact_fails()}};
    const auto c = implication_closure(m, kInfiniteShift);
    EXPECT_EQ(c.at(P::Sensitivity), exact_fails());
}

TEST(Closure, IdempotentAndMonotone) {
    SplitMix64 g(3);
    const Verdict choices[] = {exact_holds(), exact_fails(), emp_holds(), emp_fails(), unknown()};
    for (int trial = 0; trial < 300; ++trial) {
        VerdictMap m;
        for (auto p : kAllProperties)
            if (g.below(3) == 0) m[p] = choices[g.below(5)];
        const SystemFacts f{g.below(2) ? SystemClass::CA : SystemClass::IntervalMap, g.below(4) != 0};
        const auto once = implication_closure(m, f);
        EXPECT_EQ(implication_closure(once, f), once);
        for (const auto& [p, v] : m)
            if (!v.is_inconclusive()) EXPECT_EQ(once.at(p).outcome, v.outcome) << to_string(p);
    }
}

TEST(Consistency, WeakMixingWithoutSensitivity) {
    VerdictMap m{{P::WeakMixingProxy, emp_holds()}, {P::Sensitivity, emp_fails()}};
    const auto v = consistency_check(m, kInfiniteShift);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].rule, "d");
}

TEST(Consistency, DistalWithScrambledPair) {
    VerdictMap m{{P::Distal, exact_holds()}, {P::ScrambledPairExists, emp_holds()}};
    EXPECT_EQ(consistency_check(m, kInfiniteShift).size(), 1u);
}

TEST(Consistency, InconclusiveNeverViolates) {
    VerdictMap m;
    for (auto p : kAllProperties) m[p] = unknown();
    EXPECT_TRUE(consistency_check(m, kInfiniteShift).empty());
}

TEST(Placement, FullShiftLike) {
    VerdictMap m{{P::EntropyPositive, exact_holds()}, {P::WeakMixingProxy, exact_holds()}};
    const auto s = scale_placement(m);
    EXPECT_EQ(s.partial, "positive entropy");
    EXPECT_EQ(s.overall, "weak mixing");
    EXPECT_EQ(s.deterministic, "unplaced");
}

TEST(Placement, RotationLike) {
    const auto p = make_profile("rot", {SystemClass::CircleMap, true}, {{P::Equicontinuous, exact_holds()}});
    EXPECT_EQ(p.placement.partial, "unplaced");
    EXPECT_EQ(p.placement.overall, "unplaced");
    EXPECT_EQ(p.placement.deterministic, "equicontinuity");
    EXPECT_TRUE(p.violations.empty());
}

TEST(Placement, SturmianLike) {
    VerdictMap m{{P::Sensitivity, emp_holds()}, {P::EntropyZeroEvidence, emp_holds()}};
    const auto s = scale_placement(m);
    EXPECT_EQ(s.overall, "sensitivity");
    EXPECT_EQ(s.deterministic, "entropy 0");
    EXPECT_EQ(s.partial, "unplaced");
}

TEST(Placement, UpeCandidateIsOnlyANote) {
    VerdictMap m{{P::UPECandidate, emp_holds()}, {P::WeakMixingProxy, exact_holds()}};
    const auto s = scale_placement(m);
    EXPECT_EQ(s.overall, "weak mixing");
    ASSERT_FALSE(s.notes.empty());
}
