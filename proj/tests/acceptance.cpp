// Acceptance suite: one PASS/FAIL line per criterion. Takes the path to the
// chaoslab binary as its only argument.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "chaoslab/ca.hpp"
#include "chaoslab/detectors.hpp"
#include "chaoslab/report.hpp"
#include "chaoslab/rng.hpp"
#include "chaoslab/symlang.hpp"
#include "chaoslab/systems.hpp"

using namespace chaoslab;

namespace {

std::string cli_path;

// Collects failed checks for one criterion.
struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

MetricSystem make(SystemKind kind) { return build_system({"a", std::move(kind)}).system; }

DetectorBudget budget(std::int64_t n, std::int64_t m) {
    DetectorBudget b;
    b.horizon = n;
    b.samples = m;
    return b;
}

double eta(const Verdict& v) { return v.is_holds() ? v.witness.value("eta", 0.0) : 0.0; }

const double kLog2 = std::log(2.0);
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const std::size_t kSample = std::size_t{1} << 17;

void full_shift(Check& c) {
    const auto g = SFTGraph::build(2, {});
    const double ce = complexity_entropy(factor_complexity(g, 12)).ratio;
    c.expect(ce == kLog2, "complexity_entropy = " + num(ce));
    const double cv = cover_entropy(g, CylinderCover::partition(2), 10).entropy;
    c.expect(std::abs(cv - kLog2) <= 1e-9, "cover_entropy = " + num(cv));
    c.expect(sft_transitive(g), "not transitive");
    c.expect(sft_dense_periodic(g), "periodic points not dense");
    c.expect(sft_product_transitive(g, 2) && sft_product_transitive(g, 3), "product not transitive");
    const auto scan = li_yorke_scan(make(FullShiftSpec{2}), budget(512, 10000));
    c.expect(scan.witnesses >= 100, "li_yorke witnesses = " + std::to_string(scan.witnesses));
}

void golden_mean(Check& c) {
    const double target = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    const auto g = SFTGraph::build(2, {{1, 1}});
    const double cv = cover_entropy(g, CylinderCover::partition(2), 12).entropy;
    const double ce = complexity_entropy(factor_complexity(g, 12)).ratio;
    c.expect(std::abs(cv - target) <= 0.05, "cover_entropy = " + num(cv));
    c.expect(std::abs(ce - target) <= 0.05, "complexity_entropy = " + num(ce));
    c.expect(sft_transitive(g) && sft_dense_periodic(g), "not transitive with dense periodic points");
    const auto r = run_system({"golden", SFTSpec{2, {{1, 1}}}}, DetectorBudget{});
    c.expect(!r.error, "run error");
    const auto& v = r.verdicts.at(PropertyId::Sensitivity);
    c.expect(v.is_holds() && v.method == Method::Inferred && v.witness.value("rule", "") == "a",
             "Sensitivity not inferred by rule a");
    c.expect(v.witness.contains("confirms"), "Sensitivity not confirmed empirically");
}

void sturmian(Check& c) {
    const auto s = make(SturmianSpec{kGolden});
    const double e = eta(sensitivity_test(s, budget(4096, 4096)));
    c.expect(e >= 0.5, "eta = " + num(e));
    const auto scan = li_yorke_scan(s, budget(1024, 10000));
    c.expect(scan.witnesses == 0, "li_yorke witnesses = " + std::to_string(scan.witnesses));
    const auto t = factor_complexity(sturmian_code(kGolden, 0.0, 1000000), 30);
    for (int n = 1; n <= 30; ++n)
        c.expect(t.p(n) == static_cast<std::uint64_t>(n + 1), "p(" + std::to_string(n) + ") = " + std::to_string(t.p(n)));
    const auto est = complexity_entropy(factor_complexity(sturmian_code(kGolden, 0.0, kSample), 1024));
    c.expect(est.ratio <= 0.02 && est.slope <= 0.02, "entropy = " + num(est.ratio) + "/" + num(est.slope));
}

void morse(Check& c) {
    const std::vector<Word> rules{{0, 1}, {1, 0}};
    c.expect(substitution_primitive(rules), "not primitive");
    c.expect(sensitivity_test(make(SubstitutionSpec{rules, 0}), DetectorBudget{}).is_holds(), "not sensitive");
    const auto est = complexity_entropy(factor_complexity(substitution_fixed_point(rules, 0, kSample), 1024));
    c.expect(est.ratio <= 0.05 && est.slope <= 0.05, "entropy = " + num(est.ratio) + "/" + num(est.slope));
}

void chacon(Check& c) {
    const std::vector<Word> rules{{0, 0, 1, 0}, {1}};
    const auto w = substitution_fixed_point(rules, 0, 100000);
    c.expect(uniform_recurrence_probe(w, 5).is_holds(), "not uniformly recurrent");
    for (int p = 1; p <= 12; ++p)
        c.expect(longest_periodic_run(w, p) < 100, "long run of period " + std::to_string(p));
    const auto scan = li_yorke_scan(make(SubstitutionSpec{rules, 0}), DetectorBudget{});
    c.expect(scan.witnesses >= 3, "li_yorke witnesses = " + std::to_string(scan.witnesses));
    const auto est = complexity_entropy(factor_complexity(substitution_fixed_point(rules, 0, kSample), 1024));
    c.expect(est.ratio <= 0.05 && est.slope <= 0.05, "entropy = " + num(est.ratio) + "/" + num(est.slope));
}

void tent(Check& c) {
    const auto s = make(TentSpec{});
    const auto laps = lap_entropy(s, 10);
    c.expect(laps.laps == 1024 && laps.entropy == std::log(1024.0) / 10, "laps = " + std::to_string(laps.laps));
    const double b = bowen_entropy(s, 14, 0x1p-8).entropy;
    c.expect(std::abs(b - kLog2) <= 0.1, "bowen = " + num(b));
    c.expect(sensitivity_test(s, DetectorBudget{}).is_holds(), "not sensitive");
    c.expect(numeric_transitivity_test(s, 16, DetectorBudget{}).is_holds(), "not transitive");
    const auto r = run_system({"tent", TentSpec{}}, DetectorBudget{});
    c.expect(r.placement.partial == "positive entropy", "partial rung = " + r.placement.partial);
}

void isometries(Check& c) {
    for (const auto& spec : std::vector<SystemSpec>{{"rotation", RotationSpec{std::sqrt(2.0) - 1.0}},
                                                     {"odometer", OdometerSpec{2}}}) {
        const auto s = build_system(spec).system;
        const auto sens = sensitivity_test(s, DetectorBudget{});
        c.expect(sens.is_fails() && sens.method == Method::Exact, spec.label + " sensitivity not exactly failing");
        for (std::uint64_t i = 0; i < 20; ++i)
            c.expect(equicontinuity_point_test(s, sample_point(s, mix_seed(11, i)), DetectorBudget{}).is_holds(),
                     spec.label + " point " + std::to_string(i) + " not an equicontinuity point");
        c.expect(distality_test(s, DetectorBudget{}).is_holds(), spec.label + " not distal");
        const double b = bowen_entropy(s, 14, 0x1p-8, 4096).entropy;
        c.expect(b <= 0.01, spec.label + " bowen = " + num(b));
        const auto r = run_system(spec, DetectorBudget{});
        c.expect(r.placement.deterministic == "equicontinuity", spec.label + " rung = " + r.placement.deterministic);
        for (const auto& [name, e] : r.entropy.items())
            if (e.contains("entropy")) c.expect(e["entropy"].get<double>() <= 0.01, spec.label + " " + name + " entropy");
    }
}

void cellular(Check& c) {
    const auto b204 = blocking_word_search(CARule::from_wolfram(204), 12, 256);
    c.expect(b204 && b204->word.size() == 1, "rule 204 blocking word");
    const auto b128 = blocking_word_search(CARule::from_wolfram(128), 12, 256);
    c.expect(b128 && word_string(b128->word) == "0", "rule 128 blocking word");
    c.expect(!blocking_word_search(CARule::from_wolfram(170), 12, 256), "rule 170 has a blocking word");
    const double e = eta(sensitivity_test(make(CASpec{CARule::from_wolfram(170)}), DetectorBudget{}));
    c.expect(e == 1.0, "rule 170 eta = " + num(e));
    const auto per = ca_periodic_points(CARule::from_wolfram(170), 4, 16);
    c.expect(per.size() == 16, "rule 170 periodic points = " + std::to_string(per.size()));
    for (std::uint64_t i = 0; i < 100; ++i) {
        SplitMix64 g(mix_seed(8, i));
        Word a(1025), b(1025);
        for (auto& s : a) s = static_cast<Symbol>(g.below(2));
        for (auto& s : b) s = static_cast<Symbol>(g.below(2));
        const auto x = CAWindow::periodic(a), y = CAWindow::periodic(b);
        const double d0 = besicovitch_estimate(x, y, 512);
        const double d1 = besicovitch_estimate(shift_window(x), shift_window(y), 512);
        c.expect(std::abs(d1 - d0) <= 2.0 / 1025.0, "Besicovitch shift defect on pair " + std::to_string(i));
    }
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const auto kZooA = std::filesystem::temp_directory_path() / "chaoslab_zoo_a.json";
const auto kZooB = std::filesystem::temp_directory_path() / "chaoslab_zoo_b.json";

void consistency_sweep(Check& c) {
    const int code = shell(cli_path + " zoo --out " + kZooA.string() + " 2>/dev/null");
    c.expect(code == 0, "zoo exit code " + std::to_string(code));
    try {
        const auto r = parse_report(slurp(kZooA));
        c.expect(r.systems.size() == zoo_systems().size(), "zoo report is missing systems");
        for (const auto& s : r.systems) {
            c.expect(!s.error, s.label + " error: " + s.error.value_or(""));
            for (const auto& v : s.violations) c.expect(false, s.label + " violates " + v.rule + ": " + v.message);
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("unreadable report: ") + e.what());
    }
}

void determinism(Check& c) {
    const int code = shell(cli_path + " zoo --out " + kZooB.string() + " 2>/dev/null");
    c.expect(code == 0, "zoo exit code " + std::to_string(code));
    const auto a = slurp(kZooA), b = slurp(kZooB);
    c.expect(!a.empty() && a == b, "reports differ");
}

struct Criterion {
    const char* name;
    std::function<void(Check&)> body;
    double limit_seconds;  // 0: no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-chaoslab>\n";
        return 2;
    }
    cli_path = argv[1];
    const std::vector<Criterion> criteria{
        {"full shift", full_shift, 30},
        {"golden-mean SFT", golden_mean, 0},
        {"Sturmian", sturmian, 60},
        {"Morse", morse, 0},
        {"Chacon", chacon, 0},
        {"tent map", tent, 0},
        {"rotation and odometer", isometries, 0},
        {"cellular automata", cellular, 60},
        {"consistency sweep", consistency_sweep, 600},
        {"determinism", determinism, 0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double t = seconds_since(t0);
        if (criteria[i].limit_seconds > 0 && t > criteria[i].limit_seconds)
            c.expect(false, "runtime " + num(t) + " s over " + num(criteria[i].limit_seconds) + " s");
        const bool ok = c.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("[%s] %2zu %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name, t);
        for (const auto& f : c.failures) std::printf("       %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
