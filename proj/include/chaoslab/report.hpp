#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaoslab/detectors.hpp"
#include "chaoslab/error.hpp"
#include "chaoslab/profile.hpp"
#include "chaoslab/systems.hpp"

namespace chaoslab {

inline constexpr const char* kReportSchema = "chaoslab/1";

struct RunConfig {
    std::vector<SystemSpec> systems;
    DetectorBudget budget;
    std::optional<std::set<PropertyId>> properties;  // nullopt: all
    std::string out;
    std::string format = "json";  // json | csv-series
};

// Every problem found while parsing a config, as (field, message) pairs.
class ConfigErrors : public Error {
public:
    explicit ConfigErrors(std::vector<std::pair<std::string, std::string>> issues);
    const std::vector<std::pair<std::string, std::string>>& issues() const { return issues_; }

private:
    std::vector<std::pair<std::string, std::string>> issues_;
};

// Entries of "systems" may be inline objects or paths to JSON files holding
// one system object; relative paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

// One system entry of a config; throws ConfigErrors.
SystemSpec parse_system(const nlohmann::json& j, const std::string& where);
nlohmann::json system_to_json(const SystemSpec& spec);

struct Series {
    std::string name;
    std::vector<std::pair<std::int64_t, double>> points;

    bool operator==(const Series&) const = default;
};

struct SystemReport {
    std::string label;
    std::string type;
    std::optional<std::string> error;  // set when the run for this system aborted
    SystemFacts facts;
    VerdictMap verdicts;
    ScalePlacement placement;
    std::vector<Violation> violations;
    nlohmann::json exact = nlohmann::json::object();    // exact structural results
    nlohmann::json entropy = nlohmann::json::object();  // entropy estimate tables
    nlohmann::json witnesses = nlohmann::json::object();
    std::vector<Series> series;

    bool operator==(const SystemReport&) const = default;
};

struct Report {
    std::string version;
    nlohmann::json budget;
    std::vector<SystemReport> systems;

    bool operator==(const Report&) const = default;
    std::size_t violation_count() const;
};

Report run(const RunConfig& config);
SystemReport run_system(const SystemSpec& spec, const DetectorBudget& budget);

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

// "json" or "csv-series".
std::string emit(const Report& r, const std::string& format);
Report parse_report(const std::string& json_text);

// The bundled system zoo.
std::vector<SystemSpec> zoo_systems();

}  // namespace chaoslab
