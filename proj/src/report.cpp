#include <sstream>

#include "chaoslab/report.hpp"

namespace chaoslab {

namespace {

using json = nlohmann::json;

std::optional<SystemClass> class_from_string(const std::string& s) {
    for (auto c : {SystemClass::IntervalMap, SystemClass::CircleMap, SystemClass::Subshift, SystemClass::SFT,
                   SystemClass::Odometer, SystemClass::CA})
        if (s == to_string(c)) return c;
    return std::nullopt;
}

json system_json(const SystemReport& s) {
    json verdicts = json::object();
    for (const auto& [p, v] : s.verdicts) verdicts[to_string(p)] = v;
    json violations = json::array();
    for (const auto& v : s.violations) violations.push_back({{"rule", v.rule}, {"message", v.message}});
    json series = json::object();
    for (const auto& sr : s.series) {
        json pts = json::array();
        for (const auto& [i, x] : sr.points) pts.push_back({i, x});
        series[sr.name] = pts;
    }
    return {{"label", s.label},
            {"type", s.type},
            {"error", s.error ? json(*s.error) : json(nullptr)},
            {"facts", {{"class", to_string(s.facts.family)}, {"infinite", s.facts.infinite}}},
            {"verdicts", verdicts},
            {"placement",
             {{"partial", s.placement.partial},
              {"overall", s.placement.overall},
              {"deterministic", s.placement.deterministic},
              {"notes", s.placement.notes}}},
            {"violations", violations},
            {"exact", s.exact},
            {"entropy", s.entropy},
            {"witnesses", s.witnesses},
            {"series", series}};
}

SystemReport system_from_json(const json& j) {
    SystemReport s;
    s.label = j.at("label").get<std::string>();
    s.type = j.at("type").get<std::string>();
    if (!j.at("error").is_null()) s.error = j.at("error").get<std::string>();
    const auto cls = class_from_string(j.at("facts").at("class").get<std::string>());
    if (!cls) throw InputError("unknown system class in report");
    s.facts = {*cls, j.at("facts").at("infinite").get<bool>()};
    for (const auto& [k, v] : j.at("verdicts").items()) s.verdicts[property_from_string(k)] = v.get<Verdict>();
    const auto& pl = j.at("placement");
    s.placement.partial = pl.at("partial").get<std::string>();
    s.placement.overall = pl.at("overall").get<std::string>();
    s.placement.deterministic = pl.at("deterministic").get<std::string>();
    s.placement.notes = pl.at("notes").get<std::vector<std::string>>();
    for (const auto& v : j.at("violations")) s.violations.push_back({v.at("rule"), v.at("message")});
    s.exact = j.at("exact");
    s.entropy = j.at("entropy");
    s.witnesses = j.at("witnesses");
    // Series names are object keys, so they come back sorted; emission sorts too.
    for (const auto& [name, pts] : j.at("series").items()) {
        Series sr{name, {}};
        for (const auto& p : pts) sr.points.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<double>());
        s.series.push_back(std::move(sr));
    }
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

json report_to_json(const Report& r) {
    json systems = json::array();
    for (const auto& s : r.systems) systems.push_back(system_json(s));
    return {{"schema", kReportSchema}, {"version", r.version}, {"budget", r.budget}, {"systems", systems}};
}

Report report_from_json(const json& j) {
    if (j.value("schema", "") != kReportSchema) throw InputError("not a chaoslab/1 report");
    Report r;
    r.version = j.at("version").get<std::string>();
    r.budget = j.at("budget");
    for (const auto& s : j.at("systems")) r.systems.push_back(system_from_json(s));
    return r;
}

std::string emit(const Report& r, const std::string& format) {
    if (format == "json") return report_to_json(r).dump(2) + "\n";
    if (format != "csv-series") throw InputError("unknown report format '" + format + "'");
    std::ostringstream out;
    out << "system,series,index,value\n";
    for (const auto& s : r.systems) {
        auto sorted = s.series;
        std::sort(sorted.begin(), sorted.end(), [](const Series& a, const Series& b) { return a.name < b.name; });
        for (const auto& sr : sorted)
            for (const auto& [i, x] : sr.points)
                out << csv_field(s.label) << ',' << csv_field(sr.name) << ',' << i << ',' << json(x).dump() << '\n';
    }
    return out.str();
}

Report parse_report(const std::string& json_text) { return report_from_json(json::parse(json_text)); }

}  // namespace chaoslab
