#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/metric_system.hpp"
#include "chaoslab/verdict.hpp"

namespace chaoslab {

enum class PropertyId {
    LiYorkeEvidence,
    ScrambledPairExists,
    Sensitivity,
    EquicontinuityPoints,
    Equicontinuous,
    Distal,
    Transitive,
    Minimal,
    DensePeriodic,
    AuslanderYorke,
    Devaney,
    WeakMixingProxy,
    PartialWeakMixingProbe,
    EntropyPositive,
    EntropyZeroEvidence,
    UPECandidate,
};

inline constexpr PropertyId kAllProperties[] = {
    PropertyId::LiYorkeEvidence,  PropertyId::ScrambledPairExists,    PropertyId::Sensitivity,
    PropertyId::EquicontinuityPoints, PropertyId::Equicontinuous,     PropertyId::Distal,
    PropertyId::Transitive,       PropertyId::Minimal,                PropertyId::DensePeriodic,
    PropertyId::AuslanderYorke,   PropertyId::Devaney,                PropertyId::WeakMixingProxy,
    PropertyId::PartialWeakMixingProbe, PropertyId::EntropyPositive,  PropertyId::EntropyZeroEvidence,
    PropertyId::UPECandidate,
};

const char* to_string(PropertyId p);
PropertyId property_from_string(const std::string& s);

using VerdictMap = std::map<PropertyId, Verdict>;

// Which systems a rule applies to.
enum class Guard { All, Infinite, IntervalMap, CA };

struct SystemFacts {
    SystemClass family = SystemClass::Subshift;
    bool infinite = true;

    bool operator==(const SystemFacts&) const = default;
};

bool guard_applies(Guard g, const SystemFacts& facts);

struct Literal {
    PropertyId property;
    Outcome outcome;  // Holds or Fails
};

struct ImplicationRule {
    std::string id;
    std::vector<Literal> premises;
    Literal conclusion;
    Guard guard = Guard::All;
    std::string citation;
};

const std::vector<ImplicationRule>& implication_rules();

// Applies the rules to a fixed point. Exact verdicts are never replaced; a
// verdict of the same outcome may be upgraded to Inferred when every premise
// is exact or inferred.
VerdictMap implication_closure(VerdictMap verdicts, const SystemFacts& facts);

struct Violation {
    std::string rule;
    std::string message;

    bool operator==(const Violation&) const = default;
};

// A violation is a rule whose premises all hold while its conclusion has the
// opposite outcome, over all non-Inconclusive verdicts.
std::vector<Violation> consistency_check(const VerdictMap& verdicts, const SystemFacts& facts);

struct ScalePlacement {
    std::string partial = "unplaced";
    std::string overall = "unplaced";
    std::string deterministic = "unplaced";
    std::vector<std::string> notes;

    bool operator==(const ScalePlacement&) const = default;
};

ScalePlacement scale_placement(const VerdictMap& verdicts);

struct ChaosProfile {
    std::string label;
    SystemFacts facts;
    VerdictMap verdicts;
    ScalePlacement placement;
    std::vector<Violation> violations;
};

// Closure, consistency check and placement in one step.
ChaosProfile make_profile(const std::string& label, const SystemFacts& facts, VerdictMap measured);

}  // namespace chaoslab
