// chaoslab: chaos profiles for bundled and configured dynamical systems.
//
// Exit codes: 0 no violations, 1 some profile has violations, 2 config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chaoslab/report.hpp"

using namespace chaoslab;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> pairs;
    std::string out;
    std::string format;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--horizon", o.horizon, "orbit horizon N");
    cmd->add_option("--pairs", o.pairs, "sampled pairs / points M");
    cmd->add_option("--format", o.format, "json or csv-series")->check(CLI::IsMember({"json", "csv-series"}));
}

void apply(const Overrides& o, RunConfig& cfg) {
    if (o.seed) cfg.budget.seed = *o.seed;
    if (o.horizon) cfg.budget.horizon = *o.horizon;
    if (o.pairs) cfg.budget.samples = *o.pairs;
    if (!o.out.empty()) cfg.out = o.out;
    if (!o.format.empty()) cfg.format = o.format;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int execute(const RunConfig& cfg) {
    try {
        cfg.budget.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: budget." << e.what() << "\n";
        return 2;
    }
    const Report report = run(cfg);
    const std::string bytes = emit(report, cfg.format);
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << bytes;
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out || !(out << bytes)) {
            std::cerr << "cannot write report to " << cfg.out << "\n";
            return 2;
        }
    }
    for (const auto& s : report.systems) {
        std::cerr << s.label << ": partial=" << s.placement.partial << " overall=" << s.placement.overall
                  << " deterministic=" << s.placement.deterministic;
        if (s.error) std::cerr << " error=" << *s.error;
        std::cerr << "\n";
        for (const auto& v : s.violations) std::cerr << "  violation (" << v.rule << "): " << v.message << "\n";
    }
    return report.violation_count() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaoslab: empirical and exact chaos profiles"};
    app.set_version_flag("--version", std::string(CHAOSLAB_VERSION));
    app.require_subcommand(1);

    Overrides analyze_opts;
    std::string config_path;
    auto* analyze = app.add_subcommand("analyze", "profile the systems listed in a config");
    analyze->add_option("--config", config_path, "JSON config")->required();
    analyze->add_option("--out", analyze_opts.out, "report path")->required();
    add_overrides(analyze, analyze_opts);

    Overrides zoo_opts;
    auto* zoo = app.add_subcommand("zoo", "profile the bundled system zoo");
    zoo->add_option("--out", zoo_opts.out, "report path (default stdout)");
    add_overrides(zoo, zoo_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (*analyze) {
            const auto base = std::filesystem::path(config_path).parent_path().string();
            cfg = parse_config(read_file(config_path), base.empty() ? "." : base);
            apply(analyze_opts, cfg);
        } else {
            cfg.systems = zoo_systems();
            apply(zoo_opts, cfg);
        }
        return execute(cfg);
    } catch (const ConfigErrors& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
