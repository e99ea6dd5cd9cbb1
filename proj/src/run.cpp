#include <algorithm>
#include <cmath>

#include "chaoslab/report.hpp"
#include "chaoslab/rng.hpp"

#ifndef CHAOSLAB_VERSION
#define CHAOSLAB_VERSION "0.0.0"
#endif

namespace chaoslab {

namespace {

using json = nlohmann::json;
using P = PropertyId;

constexpr double kZeroEntropy = 0.05;      // slope at or below: zero-entropy evidence
constexpr double kPositiveEntropy = 0.1;   // slope at or above: positive-entropy evidence
constexpr std::size_t kSampleLength = 1 << 17;

json graph_witness(const SFTGraph& g) {
    const auto sccs = strongly_connected_components(g.successors());
    return {{"vertices", g.vertices().size()}, {"edges", g.edges().size()}, {"components", sccs.size()},
            {"block", g.block()}};
}

Verdict exact_fact(bool holds, json witness) {
    return holds ? Verdict::holds(Method::Exact, std::move(witness)) : Verdict::fails(Method::Exact, std::move(witness));
}

void sft_stage(const SFTGraph& g, SystemReport& r, VerdictMap& v) {
    const bool transitive = sft_transitive(g);
    const bool dense = sft_dense_periodic(g);
    const bool mixing2 = sft_product_transitive(g, 2);
    const bool positive = sft_entropy_positive(g);
    const auto gw = graph_witness(g);
    r.exact["sft"] = {{"transitive", transitive},
                      {"dense_periodic", dense},
                      {"product_transitive_2", mixing2},
                      {"product_transitive_3", sft_product_transitive(g, 3)},
                      {"infinite", sft_infinite(g)},
                      {"minimal", sft_minimal(g)},
                      {"entropy_positive", positive},
                      {"graph", gw}};
    auto w = [&](const char* check) {
        json j = gw;
        j["check"] = check;
        return j;
    };
    v[P::Transitive] = exact_fact(transitive, w("one strongly connected component"));
    v[P::DensePeriodic] = exact_fact(dense, w("every edge lies on a cycle"));
    v[P::Minimal] = exact_fact(sft_minimal(g), w("finite and transitive"));
    v[P::WeakMixingProxy] = exact_fact(mixing2, w("product graph strongly connected"));
    v[P::EntropyPositive] = exact_fact(positive, w("a component with two cycles"));
    v[P::EntropyZeroEvidence] = exact_fact(!positive, w("a component with two cycles"));

    const auto& start = g.vertices().front();
    v[P::PartialWeakMixingProbe] = weakly_mixing_set_probe(g, {start}, 2, static_cast<int>(start.size()) + 2, 64);

    const int n_max = 12;
    const auto table = factor_complexity(g, n_max);
    const auto est = complexity_entropy(table);
    r.entropy["complexity"] = {{"n_max", n_max}, {"counts", table.counts}, {"ratio", est.ratio},
                               {"slope", est.slope}, {"exact", true}};
    Series s{"complexity", {}};
    for (int n = 1; n <= n_max; ++n) s.points.emplace_back(n, static_cast<double>(table.p(n)));
    r.series.push_back(std::move(s));

    const auto cover = cover_entropy(g, CylinderCover::partition(g.alphabet()), 10);
    r.entropy["cover_partition"] = {{"n", 10}, {"sizes", cover.sizes}, {"entropy", cover.entropy}};

    // Two-set covers by complements of distinct length-2 cylinders.
    if (!positive) {
        v[P::UPECandidate] = Verdict::inconclusive({{"reason", "entropy is zero"}});
        return;
    }
    const auto words = g.words(2);
    json covers = json::array();
    bool all_positive = true;
    int evaluated = 0;
    for (std::size_t a = 0; a < words.size() && covers.size() < 6; ++a) {
        for (std::size_t b = a + 1; b < words.size() && covers.size() < 6; ++b) {
            CylinderCover c;
            for (auto skip : {a, b}) {
                std::vector<Cylinder> elem;
                for (std::size_t k = 0; k < words.size(); ++k)
                    if (k != skip) elem.push_back({words[k], 0});
                c.elements.push_back(std::move(elem));
            }
            double h = 0.0;
            try {
                h = cover_entropy(g, c, 6).entropy;
            } catch (const BudgetError& e) {
                covers.push_back({{"without", {word_string(words[a]), word_string(words[b])}}, {"skipped", e.what()}});
                continue;
            }
            ++evaluated;
            all_positive = all_positive && h >= kZeroEntropy;
            covers.push_back({{"without", {word_string(words[a]), word_string(words[b])}}, {"entropy", h}});
        }
    }
    r.entropy["upe_covers"] = covers;
    const json budget = {{"covers", covers.size()}, {"evaluated", evaluated}, {"n", 6}, {"threshold", kZeroEntropy}};
    v[P::UPECandidate] = all_positive && evaluated >= 2 ? Verdict::holds(Method::Empirical, {{"covers", covers}}, budget)
                                                         : Verdict::inconclusive(budget, {{"covers", covers}});
}

void language_stage(const BuiltSystem& b, SystemReport& r, VerdictMap& v) {
    const auto sample = language_sample(b, kSampleLength);
    if (!sample) return;
    if (auto* sub = std::get_if<SubstitutionSpec>(&b.spec.kind)) {
        r.exact["primitive"] = substitution_primitive(sub->rules);
        r.exact["incidence"] = incidence_matrix(sub->rules);
    }
    // The longest window the sample supports; log p(n) / n decays like log n / n for zero entropy.
    const int n_max = static_cast<int>(sample->size() / 100 / 64) * 64;
    const auto table = factor_complexity(*sample, n_max);
    const auto est = complexity_entropy(table);
    r.entropy["complexity"] = {{"n_max", n_max}, {"counts", table.counts}, {"ratio", est.ratio},
                               {"slope", est.slope}, {"stable", est.stable}, {"exact", false},
                               {"sample", sample->size()}};
    Series s{"complexity", {}};
    for (int n = 1; n <= n_max; ++n) s.points.emplace_back(n, static_cast<double>(table.p(n)));
    r.series.push_back(std::move(s));
    const json budget = {{"sample", sample->size()}, {"n_max", n_max}};
    const json witness = {{"slope", est.slope}, {"p_n_max", table.p(n_max)}};
    if (est.slope <= kZeroEntropy) v[P::EntropyZeroEvidence] = Verdict::holds(Method::Empirical, witness, budget);
    else if (est.slope >= kPositiveEntropy) v[P::EntropyPositive] = Verdict::holds(Method::Empirical, witness, budget);

    const Word head(sample->begin(), sample->begin() + 100000);
    v[P::Minimal] = uniform_recurrence_probe(head, 5);
    json runs = json::object();
    for (int p = 1; p <= 12; ++p) runs[std::to_string(p)] = longest_periodic_run(head, p);
    r.exact["longest_periodic_run"] = runs;
}

void ca_stage(const BuiltSystem& b, const DetectorBudget& budget, SystemReport& r, VerdictMap& v) {
    const auto& rule = *b.rule;
    if (b.blocking) {
        const json w = {{"word", word_string(b.blocking->word)}, {"offset", b.blocking->offset},
                        {"horizon", b.blocking->horizon}};
        r.exact["blocking_word"] = w;
        v[P::EquicontinuityPoints] = Verdict::holds(Method::Exact, {{"blocking_word", w}});
    } else {
        r.exact["blocking_word"] = nullptr;
    }
    if (std::pow(rule.alphabet, 4) <= 4096) {
        const auto periodic = ca_periodic_points(rule, 4, 4096);
        r.exact["periodic_points_p4"] = periodic.size();
    }
    // Besicovitch trends need wider cores than the detector windows.
    SplitMix64 g(mix_seed(budget.seed, 0xB35));
    auto random_window = [&] {
        Word cells((1 << 13) + 1);
        for (auto& c : cells) c = static_cast<Symbol>(g.below(static_cast<std::uint64_t>(rule.alphabet)));
        return CAWindow::periodic(std::move(cells), rule.alphabet);
    };
    const auto x = random_window();
    auto y = x;
    for (std::size_t i = 0; i < y.cells.size(); ++i)
        if (g.below(8) == 0) y.cells[i] = static_cast<Symbol>((y.cells[i] + 1) % rule.alphabet);
    Series s0{"besicovitch", {}}, s1{"besicovitch-image", {}};
    for (auto [n, d] : besicovitch_trend(x, y)) s0.points.emplace_back(n, d);
    for (auto [n, d] : besicovitch_trend(ca_step(rule, x), ca_step(rule, y))) s1.points.emplace_back(n, d);
    r.series.push_back(std::move(s0));
    r.series.push_back(std::move(s1));
}

void interval_stage(const BuiltSystem& b, const DetectorBudget& budget, SystemReport& r, VerdictMap& v) {
    const auto& sys = b.system;
    v[P::Transitive] = numeric_transitivity_test(sys, 16, budget);
    const auto bowen = bowen_entropy(sys, 14, 0x1p-8);
    r.entropy["bowen"] = {{"n", 14}, {"eps", 0x1p-8}, {"entropy", bowen.entropy}, {"ratio", bowen.ratio},
                          {"size", bowen.size}, {"half_size", bowen.half_size}, {"grid", bowen.grid}};
    double h = bowen.entropy;
    json witness = {{"bowen", bowen.entropy}};
    if (sys.piecewise_monotone) {
        const auto laps = lap_entropy(sys, 10);
        r.entropy["laps"] = {{"n", 10}, {"laps", laps.laps}, {"entropy", laps.entropy}};
        witness["laps"] = laps.entropy;
    }
    const json eb = {{"n", 14}, {"eps", 0x1p-8}, {"grid", bowen.grid}};
    if (h <= kZeroEntropy) v[P::EntropyZeroEvidence] = Verdict::holds(Method::Empirical, witness, eb);
    else if (h >= kPositiveEntropy) v[P::EntropyPositive] = Verdict::holds(Method::Empirical, witness, eb);
}

void odometer_stage(const BuiltSystem& b, const DetectorBudget& budget, SystemReport& r, VerdictMap& v) {
    const auto bowen = bowen_entropy(b.system, 14, 0x1p-8, 4096, budget.seed);
    r.entropy["bowen"] = {{"n", 14}, {"eps", 0x1p-8}, {"entropy", bowen.entropy}, {"ratio", bowen.ratio},
                          {"size", bowen.size}, {"half_size", bowen.half_size}, {"grid", bowen.grid}};
    if (bowen.entropy <= kZeroEntropy)
        v[P::EntropyZeroEvidence] = Verdict::holds(Method::Empirical, {{"bowen", bowen.entropy}},
                                                   {{"n", 14}, {"eps", 0x1p-8}, {"points", bowen.grid}});
}

void detector_stage(const BuiltSystem& b, const DetectorBudget& budget, SystemReport& r, VerdictMap& v) {
    const auto& sys = b.system;
    v[P::Sensitivity] = sensitivity_test(sys, budget);

    const auto scan = li_yorke_scan(sys, budget);
    v[P::ScrambledPairExists] = scan.verdict;
    if (scan.verdict.is_holds()) v[P::LiYorkeEvidence] = scan.verdict;
    r.witnesses["li_yorke"] = {{"witnesses", scan.witnesses}, {"pairs", scan.pairs}, {"examples", scan.examples}};

    v[P::Distal] = distality_test(sys, budget);

    json points = json::array();
    std::optional<Verdict> holds, fails;
    bool all_fail = true;
    for (std::uint64_t k = 0; k < 4; ++k) {
        const Point x = sample_point(sys, mix_seed(budget.seed, 0xE0 + k), budget.horizon);
        auto t = equicontinuity_point_test(sys, x, budget);
        points.push_back({{"point", describe(x)}, {"outcome", to_string(t.outcome)}});
        all_fail = all_fail && t.is_fails();
        if (t.is_holds() && !holds) holds = t;
        if (t.is_fails() && !fails) fails = t;
    }
    r.witnesses["equicontinuity_points"] = points;
    if (sys.isometry)
        v[P::Equicontinuous] = Verdict::holds(Method::Exact, {{"certificate", "isometry"}});
    else if (all_fail)
        v[P::Equicontinuous] = *fails;
    if (holds && !v.count(P::EquicontinuityPoints)) v[P::EquicontinuityPoints] = *holds;

    const Point x = sample_point(sys, budget.seed, budget.horizon);
    const Point y = sys.partner(x, mix_seed(budget.seed, 1), budget.horizon);
    const auto series = distance_series(sys, x, y, std::min<std::int64_t>(256, budget.horizon));
    Series s{"distance", {}};
    for (std::size_t t = 0; t < series.size(); ++t) s.points.emplace_back(static_cast<std::int64_t>(t), series[t]);
    r.series.push_back(std::move(s));
}

}  // namespace

SystemReport run_system(const SystemSpec& spec, const DetectorBudget& budget) {
    SystemReport r;
    r.label = spec.label;
    r.type = type_name(spec.kind);
    VerdictMap v;
    try {
        const BuiltSystem b = build_system(spec);
        const auto& sys = b.system;
        r.facts = {sys.family, sys.infinite};
        r.exact["spec"] = system_to_json(spec);
        r.exact["isometry"] = sys.isometry;
        if (b.graph) sft_stage(*b.graph, r, v);
        if (b.fixed_point || std::holds_alternative<SturmianSpec>(spec.kind)) language_stage(b, r, v);
        if (b.rule) ca_stage(b, budget, r, v);
        if (sys.scalar_map) interval_stage(b, budget, r, v);
        if (sys.family == SystemClass::Odometer) odometer_stage(b, budget, r, v);
        detector_stage(b, budget, r, v);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    const auto profile = make_profile(r.label, r.facts, std::move(v));
    r.verdicts = profile.verdicts;
    r.placement = profile.placement;
    r.violations = profile.violations;
    std::sort(r.series.begin(), r.series.end(), [](const Series& a, const Series& b) { return a.name < b.name; });
    return r;
}

Report run(const RunConfig& config) {
    config.budget.validate();
    Report report;
    report.version = CHAOSLAB_VERSION;
    report.budget = config.budget.to_json();
    for (const auto& spec : config.systems) {
        auto r = run_system(spec, config.budget);
        if (config.properties) {
            std::erase_if(r.verdicts, [&](const auto& kv) { return !config.properties->count(kv.first); });
        }
        report.systems.push_back(std::move(r));
    }
    return report;
}

std::size_t Report::violation_count() const {
    std::size_t n = 0;
    for (const auto& s : systems) n += s.violations.size();
    return n;
}

std::vector<SystemSpec> zoo_systems() {
    auto sft = [](std::string label, std::vector<Word> forbidden) {
        return SystemSpec{std::move(label), SFTSpec{2, std::move(forbidden)}};
    };
    auto ca = [](int n) { return SystemSpec{"ca" + std::to_string(n), CASpec{CARule::from_wolfram(n)}}; };
    return {
        {"fullshift", FullShiftSpec{2}},
        sft("golden", {{1, 1}}),
        sft("period2", {{0, 0}, {1, 1}}),
        sft("forbid10", {{1, 0}}),
        {"sturmian", SturmianSpec{(std::sqrt(5.0) - 1.0) / 2.0}},
        {"morse", SubstitutionSpec{{{0, 1}, {1, 0}}, 0}},
        {"chacon", SubstitutionSpec{{{0, 0, 1, 0}, {1}}, 0}},
        {"fibonacci", SubstitutionSpec{{{0, 1}, {0}}, 0}},
        {"tent", TentSpec{}},
        {"logistic", LogisticSpec{4.0}},
        {"rotation", RotationSpec{std::sqrt(2.0) - 1.0}},
        {"identity", IdentitySpec{}},
        {"odometer", OdometerSpec{2}},
        ca(204),
        ca(170),
        ca(128),
        ca(90),
        ca(184),
        ca(110),
    };
}

}  // namespace chaoslab
