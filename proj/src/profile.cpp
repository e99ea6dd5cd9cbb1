#include "chaoslab/profile.hpp"

#include "chaoslab/error.hpp"

namespace chaoslab {

const char* to_string(PropertyId p) {
    switch (p) {
        case PropertyId::LiYorkeEvidence: return "LiYorkeEvidence";
        case PropertyId::ScrambledPairExists: return "ScrambledPairExists";
        case PropertyId::Sensitivity: return "Sensitivity";
        case PropertyId::EquicontinuityPoints: return "EquicontinuityPoints";
        case PropertyId::Equicontinuous: return "Equicontinuous";
        case PropertyId::Distal: return "Distal";
        case PropertyId::Transitive: return "Transitive";
        case PropertyId::Minimal: return "Minimal";
        case PropertyId::DensePeriodic: return "DensePeriodic";
        case PropertyId::AuslanderYorke: return "AuslanderYorke";
        case PropertyId::Devaney: return "Devaney";
        case PropertyId::WeakMixingProxy: return "WeakMixingProxy";
        case PropertyId::PartialWeakMixingProbe: return "PartialWeakMixingProbe";
        case PropertyId::EntropyPositive: return "EntropyPositive";
        case PropertyId::EntropyZeroEvidence: return "EntropyZeroEvidence";
        case PropertyId::UPECandidate: return "UPECandidate";
    }
    return "?";
}

PropertyId property_from_string(const std::string& s) {
    for (auto p : kAllProperties)
        if (s == to_string(p)) return p;
    throw InputError("unknown property '" + s + "'");
}

bool guard_applies(Guard g, const SystemFacts& facts) {
    switch (g) {
        case Guard::All: return true;
        case Guard::Infinite: return facts.infinite;
        case Guard::IntervalMap: return facts.family == SystemClass::IntervalMap;
        case Guard::CA: return facts.family == SystemClass::CA;
    }
    return false;
}

namespace {

using P = PropertyId;
constexpr Outcome H = Outcome::Holds;
constexpr Outcome F = Outcome::Fails;

std::vector<ImplicationRule> build_rules() {
    std::vector<ImplicationRule> r;
    auto add = [&](std::string id, std::vector<Literal> premises, Literal conclusion, Guard guard, std::string citation) {
        r.push_back({std::move(id), std::move(premises), conclusion, guard, std::move(citation)});
    };
    const std::string banks = "transitivity and dense periodic orbits imply sensitivity";
    add("a", {{P::Transitive, H}, {P::DensePeriodic, H}}, {P::Sensitivity, H}, Guard::Infinite, banks);
    add("b", {{P::Transitive, H}, {P::DensePeriodic, H}}, {P::LiYorkeEvidence, H}, Guard::Infinite,
        "transitivity and a fixed point imply Li-Yorke chaos");
    add("c", {{P::EntropyPositive, H}}, {P::LiYorkeEvidence, H}, Guard::All, "positive entropy implies Li-Yorke chaos");
    add("d", {{P::WeakMixingProxy, H}}, {P::Sensitivity, H}, Guard::Infinite, "Weak mixing implies sensitivity");
    add("e", {{P::Distal, H}}, {P::EntropyZeroEvidence, H}, Guard::All, "it implies entropy 0");
    add("e.scrambled", {{P::Distal, H}}, {P::ScrambledPairExists, F}, Guard::All,
        "forbidding the existence of any non-empty scrambled set");
    add("f", {{P::Transitive, H}, {P::Sensitivity, F}}, {P::EquicontinuityPoints, H}, Guard::All,
        "a transitive system that is not sensitive has equicontinuity points");
    add("g", {{P::UPECandidate, H}}, {P::WeakMixingProxy, H}, Guard::All, "u.p.e. implies weak mixing");
    add("h.1", {{P::EntropyPositive, H}}, {P::PartialWeakMixingProbe, H}, Guard::All,
        "positive entropy implies partial weak mixing");
    add("h.2", {{P::PartialWeakMixingProbe, H}}, {P::LiYorkeEvidence, H}, Guard::All,
        "partial weak mixing, which in its turn implies Li-Yorke chaos");
    add("i", {{P::Transitive, H}}, {P::Sensitivity, H}, Guard::CA, "transitivity implies sensitivity");
    add("j", {{P::Sensitivity, F}}, {P::EquicontinuityPoints, H}, Guard::CA, "not sensitive has equicontinuity points");
    add("k", {}, {P::Minimal, F}, Guard::CA, "any CA has at least one periodic point");
    const std::string interval = "transitivity implies Li-Yorke chaos, sensitivity, positive entropy, dense periodic orbits";
    add("l.1", {{P::Transitive, H}}, {P::LiYorkeEvidence, H}, Guard::IntervalMap, interval);
    add("l.2", {{P::Transitive, H}}, {P::Sensitivity, H}, Guard::IntervalMap, interval);
    add("l.3", {{P::Transitive, H}}, {P::EntropyPositive, H}, Guard::IntervalMap, interval);
    add("l.4", {{P::Transitive, H}}, {P::DensePeriodic, H}, Guard::IntervalMap, interval);

    add("m.1", {{P::Equicontinuous, H}}, {P::Distal, H}, Guard::All, "Equicontinuity implies distality");
    add("m.2", {{P::Equicontinuous, H}}, {P::EquicontinuityPoints, H}, Guard::All,
        "a system is equicontinuous if and only if all its points are equicontinuity points");
    add("m.3", {{P::Equicontinuous, H}}, {P::Sensitivity, F}, Guard::All, "Equicontinuity forbids any kind of sensitivity");
    add("n.1", {{P::WeakMixingProxy, H}}, {P::LiYorkeEvidence, H}, Guard::Infinite, "it implies both Li-Yorke chaos");
    add("n.2", {{P::WeakMixingProxy, H}}, {P::Transitive, H}, Guard::All, "it is much stronger than transitivity");
    add("o", {{P::Minimal, H}}, {P::Transitive, H}, Guard::All, "minimal, hence transitive");
    add("p", {{P::Minimal, H}}, {P::DensePeriodic, F}, Guard::Infinite, "minimal, hence without periodic points");
    add("q", {{P::LiYorkeEvidence, H}}, {P::ScrambledPairExists, H}, Guard::All, "an uncountable scrambled set");
    add("r", {{P::EntropyPositive, H}}, {P::EntropyZeroEvidence, F}, Guard::All, "positive entropy");
    add("r.zero", {{P::EntropyZeroEvidence, H}}, {P::EntropyPositive, F}, Guard::All, "entropy 0");

    const std::string ay = "sensitive and transitive";
    add("ay.1", {{P::Transitive, H}, {P::Sensitivity, H}}, {P::AuslanderYorke, H}, Guard::All, ay);
    add("ay.2", {{P::Transitive, F}}, {P::AuslanderYorke, F}, Guard::All, ay);
    add("ay.3", {{P::Sensitivity, F}}, {P::AuslanderYorke, F}, Guard::All, ay);
    add("ay.4", {{P::AuslanderYorke, H}}, {P::Transitive, H}, Guard::All, ay);
    add("ay.5", {{P::AuslanderYorke, H}}, {P::Sensitivity, H}, Guard::All, ay);
    const std::string dv = "sensitive, transitive and if X contains a dense set of f-periodic points";
    add("dv.1", {{P::Transitive, H}, {P::DensePeriodic, H}, {P::Sensitivity, H}}, {P::Devaney, H}, Guard::All, dv);
    add("dv.2", {{P::Transitive, F}}, {P::Devaney, F}, Guard::All, dv);
    add("dv.3", {{P::DensePeriodic, F}}, {P::Devaney, F}, Guard::All, dv);
    add("dv.4", {{P::Sensitivity, F}}, {P::Devaney, F}, Guard::All, dv);
    add("dv.5", {{P::Devaney, H}}, {P::Transitive, H}, Guard::All, dv);
    add("dv.6", {{P::Devaney, H}}, {P::DensePeriodic, H}, Guard::All, dv);
    add("dv.7", {{P::Devaney, H}}, {P::Sensitivity, H}, Guard::All, dv);
    return r;
}

Outcome negate(Outcome o) { return o == H ? F : H; }

bool satisfied(const VerdictMap& v, const Literal& l) {
    const auto it = v.find(l.property);
    return it != v.end() && it->second.outcome == l.outcome;
}

bool assertive(Method m) { return m == Method::Exact || m == Method::Inferred; }

// One derivation step for `conclusion` from `premises`; returns true on change.
bool apply(VerdictMap& v, const ImplicationRule& rule, const std::vector<Literal>& premises, const Literal& conclusion,
           bool contrapositive) {
    bool exact = true;
    nlohmann::json cited = nlohmann::json::array();
    for (const auto& p : premises) {
        if (!satisfied(v, p)) return false;
        const auto& pv = v.at(p.property);
        exact = exact && assertive(pv.method);
        cited.push_back({{"property", to_string(p.property)}, {"outcome", to_string(p.outcome)}, {"method", to_string(pv.method)}});
    }
    const Method method = exact ? Method::Inferred : Method::InferredFromEmpirical;
    const auto it = v.find(conclusion.property);
    if (it != v.end() && !it->second.is_inconclusive()) {
        const auto& cur = it->second;
        if (cur.outcome != conclusion.outcome) return false;  // left for the consistency check
        if (cur.method == Method::Exact || cur.method == Method::Inferred) return false;
        if (method != Method::Inferred) return false;
    }
    nlohmann::json witness = {{"rule", rule.id}, {"premises", cited}, {"citation", rule.citation}};
    if (contrapositive) witness["contrapositive"] = true;
    if (it != v.end() && !it->second.is_inconclusive()) witness["confirms"] = it->second.witness;
    Verdict out = conclusion.outcome == H ? Verdict::holds(method, witness, {{"source", "implication closure"}})
                                          : Verdict::fails(method, witness, {{"source", "implication closure"}});
    v[conclusion.property] = std::move(out);
    return true;
}

}  // namespace

const std::vector<ImplicationRule>& implication_rules() {
    static const std::vector<ImplicationRule> rules = build_rules();
    return rules;
}

VerdictMap implication_closure(VerdictMap verdicts, const SystemFacts& facts) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& rule : implication_rules()) {
            if (!guard_applies(rule.guard, facts)) continue;
            changed = apply(verdicts, rule, rule.premises, rule.conclusion, false) || changed;
            // Single-premise rules also run backwards.
            if (rule.premises.size() == 1) {
                const Literal back_premise{rule.conclusion.property, negate(rule.conclusion.outcome)};
                const Literal back_conclusion{rule.premises[0].property, negate(rule.premises[0].outcome)};
                changed = apply(verdicts, rule, {back_premise}, back_conclusion, true) || changed;
            }
        }
    }
    return verdicts;
}

std::vector<Violation> consistency_check(const VerdictMap& verdicts, const SystemFacts& facts) {
    std::vector<Violation> out;
    for (const auto& rule : implication_rules()) {
        if (!guard_applies(rule.guard, facts)) continue;
        bool all = true;
        for (const auto& p : rule.premises) all = all && satisfied(verdicts, p);
        if (!all) continue;
        const Literal opposite{rule.conclusion.property, negate(rule.conclusion.outcome)};
        if (!satisfied(verdicts, opposite)) continue;
        std::string msg;
        for (const auto& p : rule.premises) msg += std::string(to_string(p.property)) + "=" + to_string(p.outcome) + " ";
        msg += "but " + std::string(to_string(opposite.property)) + "=" + to_string(opposite.outcome) + " (" +
               rule.citation + ")";
        out.push_back({rule.id, msg});
    }
    return out;
}

ScalePlacement scale_placement(const VerdictMap& verdicts) {
    ScalePlacement s;
    auto holds = [&](PropertyId p) {
        const auto it = verdicts.find(p);
        return it != verdicts.end() && it->second.is_holds();
    };
    auto place = [&](std::initializer_list<std::pair<const char*, PropertyId>> rungs) -> std::string {
        for (const auto& [name, p] : rungs)
            if (holds(p)) return name;
        return "unplaced";
    };
    s.partial = place({{"positive entropy", P::EntropyPositive},
                       {"partial weak mixing", P::PartialWeakMixingProbe},
                       {"Li-Yorke chaos", P::LiYorkeEvidence}});
    // Uniform positive entropy is only ever tested on chosen covers, so it is
    // a candidate and never a rung.
    const auto upe = verdicts.find(P::UPECandidate);
    const bool upe_exact = upe != verdicts.end() && upe->second.is_holds() && upe->second.method == Method::Exact;
    if (upe_exact) {
        s.overall = "uniform positive entropy";
    } else {
        s.overall = place({{"weak mixing", P::WeakMixingProxy}, {"sensitivity", P::Sensitivity}});
        if (holds(P::UPECandidate)) s.notes.push_back("UPECandidate holds on the tested covers");
    }
    s.deterministic = place({{"equicontinuity", P::Equicontinuous},
                             {"distality", P::Distal},
                             {"entropy 0", P::EntropyZeroEvidence}});
    if (holds(P::ScrambledPairExists)) {
        const auto& w = verdicts.at(P::ScrambledPairExists).witness;
        if (w.contains("witnesses") && w.contains("pairs"))
            s.notes.push_back("scrambled witness density " + std::to_string(w["witnesses"].get<std::int64_t>()) + "/" +
                              std::to_string(w["pairs"].get<std::int64_t>()));
    }
    return s;
}

ChaosProfile make_profile(const std::string& label, const SystemFacts& facts, VerdictMap measured) {
    ChaosProfile p;
    p.label = label;
    p.facts = facts;
    p.verdicts = implication_closure(std::move(measured), facts);
    p.violations = consistency_check(p.verdicts, facts);
    p.placement = scale_placement(p.verdicts);
    return p;
}

}  // namespace chaoslab
