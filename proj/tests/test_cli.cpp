#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "chaoslab/report.hpp"

using namespace chaoslab;
using P = PropertyId;

namespace {

DetectorBudget quick() {
    DetectorBudget b;
    b.horizon = 256;
    b.samples = 256;
    return b;
}

bool has_field(const ConfigErrors& e, const std::string& field) {
    for (const auto& [f, m] : e.issues())
        if (f == field) return true;
    return false;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CHAOSLAB_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("chaoslab_test_" + name);
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST(Config, GoldenMeanSft) {
    const auto c = parse_config(R"({"systems":[{"type":"sft","label":"g","alphabet":["0","1"],"forbidden":["11"]}]})");
    ASSERT_EQ(c.systems.size(), 1u);
    EXPECT_EQ(c.systems[0].label, "g");
    const auto& sft = std::get<SFTSpec>(c.systems[0].kind);
    EXPECT_EQ(sft.alphabet, 2);
    ASSERT_EQ(sft.forbidden.size(), 1u);
    EXPECT_EQ(sft.forbidden[0], (Word{1, 1}));
}

TEST(Config, LogisticOutOfRange) {
    try {
        parse_config(R"({"systems":[{"type":"logistic","a":5}]})");
        FAIL();
    } catch (const ConfigErrors& e) {
        ASSERT_EQ(e.issues().size(), 1u);
        EXPECT_EQ(e.issues()[0].first, "systems[0].a");
        EXPECT_NE(e.issues()[0].second.find("a out of (0,4]"), std::string::npos);
    }
}

TEST(Config, WolframCa) {
    const auto c = parse_config(R"({"systems":[{"type":"ca","wolfram":170}]})");
    EXPECT_EQ(std::get<CASpec>(c.systems[0].kind).rule, CARule::from_wolfram(170));
    EXPECT_EQ(c.systems[0].label, "ca");
}

TEST(Config, EveryProblemIsListed) {
    try {
        parse_config(R"({"systems":[{"type":"rotation","color":1},{"type":"warp"},{"type":"tent","label":"x"},
                                     {"type":"identity","label":"x"}],
                         "budget":{"horizon":0}})");
        FAIL();
    } catch (const ConfigErrors& e) {
        EXPECT_TRUE(has_field(e, "systems[0].alpha"));
        EXPECT_TRUE(has_field(e, "systems[1].type"));
        EXPECT_TRUE(has_field(e, "systems[0].color"));
        EXPECT_TRUE(has_field(e, "systems[3].label"));
        EXPECT_TRUE(has_field(e, "budget.horizon"));
    }
}

TEST(Config, SystemFromFile) {
    const auto p = temp_file("sys.json", R"({"type":"tent","label":"t"})");
    const auto c = parse_config(R"({"systems":[")" + p.filename().string() + R"("]})", p.parent_path().string());
    EXPECT_EQ(c.systems[0].label, "t");
}

TEST(Config, SystemJsonRoundTrip) {
    for (const auto& spec : zoo_systems()) {
        const auto back = parse_system(system_to_json(spec), "s");
        EXPECT_EQ(system_to_json(back), system_to_json(spec)) << spec.label;
    }
}

TEST(Run, GoldenSensitivityIsInferred) {
    const auto r = run_system({"g", SFTSpec{2, {{1, 1}}}}, quick());
    ASSERT_FALSE(r.error) << *r.error;
    const auto& v = r.verdicts.at(P::Sensitivity);
    EXPECT_TRUE(v.is_holds());
    EXPECT_EQ(v.method, Method::Inferred);
    EXPECT_EQ(v.witness["rule"], "a");
    EXPECT_TRUE(r.violations.empty());
}

TEST(Run, RotationIsEquicontinuous) {
    const auto r = run_system({"r", RotationSpec{std::sqrt(2.0) - 1.0}}, quick());
    ASSERT_FALSE(r.error) << *r.error;
    EXPECT_TRUE(r.verdicts.at(P::Equicontinuous).is_holds());
    EXPECT_EQ(r.placement.partial, "unplaced");
    EXPECT_EQ(r.placement.overall, "unplaced");
    EXPECT_EQ(r.placement.deterministic, "equicontinuity");
}

TEST(Run, EmptyPropertyFilter) {
    RunConfig c;
    c.systems = {{"t", TentSpec{}}};
    c.budget = quick();
    c.properties = std::set<PropertyId>{};
    const auto r = run(c);
    ASSERT_EQ(r.systems.size(), 1u);
    EXPECT_TRUE(r.systems[0].verdicts.empty());
}

TEST(Report, RoundTrip) {
    RunConfig c;
    c.systems = {{"t", TentSpec{}}, {"m", SubstitutionSpec{{{0, 1}, {1, 0}}, 0}}};
    c.budget = quick();
    const auto r = run(c);
    EXPECT_EQ(parse_report(emit(r, "json")), r);
    EXPECT_EQ(report_to_json(r)["schema"], kReportSchema);
}

TEST(Report, CsvSturmianComplexity) {
    RunConfig c;
    c.systems = {{"st", SturmianSpec{(std::sqrt(5.0) - 1.0) / 2.0}}};
    c.budget = quick();
    const auto csv = emit(run(c), "csv-series");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "system,series,index,value");
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.rfind("st,complexity,", 0) != 0) continue;
        std::istringstream row(line.substr(14));
        std::string idx, val;
        std::getline(row, idx, ',');
        std::getline(row, val);
        const long n = std::stol(idx);
        if (n <= 30) {
            EXPECT_EQ(std::stod(val), static_cast<double>(n + 1)) << n;
            ++seen;
        }
    }
    EXPECT_EQ(seen, 30);
}

TEST(Report, UnknownFormatThrows) { EXPECT_THROW(emit(Report{}, "xml"), InputError); }

TEST(Cli, ExitCodes) {
    const auto out = std::filesystem::temp_directory_path() / "chaoslab_test_out.json";
    const auto good = temp_file("good.json", R"({"systems":[{"type":"identity"}]})");
    EXPECT_EQ(run_cli("analyze --config " + good.string() + " --out " + out.string() + " --horizon 128 --pairs 128"), 0);
    EXPECT_TRUE(std::filesystem::exists(out));
    const auto bad = temp_file("bad.json", R"({"systems":[{"type":"logistic","a":5}]})");
    EXPECT_EQ(run_cli("analyze --config " + bad.string() + " --out " + out.string()), 2);
    EXPECT_EQ(run_cli("analyze --config /nonexistent/x.json --out " + out.string()), 2);
    const auto garbled = temp_file("garbled.json", "{systems:");
    EXPECT_EQ(run_cli("analyze --config " + garbled.string() + " --out " + out.string()), 2);
}
