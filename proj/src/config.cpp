#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "chaoslab/report.hpp"

namespace chaoslab {

namespace {

using json = nlohmann::json;
using Issues = std::vector<std::pair<std::string, std::string>>;

std::string join_issues(const Issues& issues) {
    std::string s = "invalid config:";
    for (const auto& [field, msg] : issues) s += "\n  " + field + ": " + msg;
    return s;
}

const std::string kDigits = "0123456789abcdefghijklmnopqrstuv";

std::vector<std::string> default_alphabet(int q) {
    std::vector<std::string> out;
    for (int i = 0; i < q; ++i) out.emplace_back(1, kDigits[static_cast<std::size_t>(i)]);
    return out;
}

std::string render(const Word& w) {
    std::string s;
    for (auto c : w) s += kDigits[c];
    return s;
}

// Collects issues for one system object instead of stopping at the first.
class Reader {
public:
    Reader(const json& j, std::string where, Issues& issues) : j_(j), where_(std::move(where)), issues_(issues) {}

    void fail(const std::string& key, const std::string& msg) { issues_.emplace_back(where_ + "." + key, msg); }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    std::optional<T> get(const std::string& key, bool required) {
        used_.insert(key);
        if (!j_.contains(key)) {
            if (required) fail(key, "missing");
            return std::nullopt;
        }
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            fail(key, "has the wrong type");
            return std::nullopt;
        }
    }

    void check_unknown() {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) fail(k, "unknown field");
    }

private:
    const json& j_;
    std::string where_;
    Issues& issues_;
    std::set<std::string> used_;
};

// Alphabet given as a list of distinct one-character strings.
std::optional<std::vector<std::string>> read_alphabet(Reader& r, int fallback) {
    if (!r.has("alphabet")) return fallback > 0 ? std::optional(default_alphabet(fallback)) : std::nullopt;
    auto a = r.get<std::vector<std::string>>("alphabet", true);
    if (!a) return std::nullopt;
    std::set<std::string> seen;
    for (const auto& s : *a) {
        if (s.size() != 1) {
            r.fail("alphabet", "symbols must be single characters");
            return std::nullopt;
        }
        if (!seen.insert(s).second) {
            r.fail("alphabet", "duplicate symbol '" + s + "'");
            return std::nullopt;
        }
    }
    if (a->empty() || a->size() > 32) {
        r.fail("alphabet", "alphabet size out of [1,32]");
        return std::nullopt;
    }
    return a;
}

std::optional<Word> read_word(Reader& r, const std::string& key, const std::string& text,
                              const std::vector<std::string>& alphabet) {
    Word w;
    for (char c : text) {
        std::size_t i = 0;
        while (i < alphabet.size() && alphabet[i][0] != c) ++i;
        if (i == alphabet.size()) {
            r.fail(key, "word '" + text + "' uses a symbol outside the alphabet");
            return std::nullopt;
        }
        w.push_back(static_cast<Symbol>(i));
    }
    return w;
}

std::optional<SystemKind> read_kind(Reader& r, const std::string& type) {
    if (type == "tent") return TentSpec{};
    if (type == "identity") return IdentitySpec{};
    if (type == "logistic") {
        auto a = r.get<double>("a", false);
        return LogisticSpec{a.value_or(4.0)};
    }
    if (type == "rotation" || type == "sturmian") {
        auto a = r.get<double>("alpha", true);
        if (!a) return std::nullopt;
        if (type == "rotation") return RotationSpec{*a};
        return SturmianSpec{*a};
    }
    if (type == "odometer") {
        auto b = r.get<int>("base", false);
        return OdometerSpec{b.value_or(2)};
    }
    if (type == "fullshift") {
        auto a = read_alphabet(r, 2);
        if (!a) return std::nullopt;
        return FullShiftSpec{static_cast<int>(a->size())};
    }
    if (type == "sft") {
        auto a = read_alphabet(r, 0);
        if (!a) {
            if (!r.has("alphabet")) r.fail("alphabet", "missing");
            return std::nullopt;
        }
        SFTSpec s{static_cast<int>(a->size()), {}};
        auto words = r.get<std::vector<std::string>>("forbidden", false).value_or(std::vector<std::string>{});
        for (const auto& t : words) {
            auto w = read_word(r, "forbidden", t, *a);
            if (!w) return std::nullopt;
            s.forbidden.push_back(std::move(*w));
        }
        return s;
    }
    if (type == "substitution") {
        auto images = r.get<std::vector<std::string>>("rules", true);
        if (!images) return std::nullopt;
        auto a = read_alphabet(r, static_cast<int>(std::min<std::size_t>(images->size(), 32)));
        if (!a) return std::nullopt;
        if (a->size() != images->size()) {
            r.fail("rules", "need exactly one image per alphabet symbol");
            return std::nullopt;
        }
        SubstitutionSpec s;
        for (const auto& t : *images) {
            auto w = read_word(r, "rules", t, *a);
            if (!w) return std::nullopt;
            s.rules.push_back(std::move(*w));
        }
        auto seed = r.get<std::string>("seed", false).value_or((*a)[0]);
        auto sw = read_word(r, "seed", seed, *a);
        if (!sw) return std::nullopt;
        if (sw->size() != 1) {
            r.fail("seed", "seed must be a single symbol");
            return std::nullopt;
        }
        s.seed = (*sw)[0];
        return s;
    }
    if (type == "ca") {
        try {
            if (r.has("wolfram")) {
                auto n = r.get<int>("wolfram", true);
                if (!n) return std::nullopt;
                return CASpec{CARule::from_wolfram(*n)};
            }
            auto q = r.get<int>("alphabet", false).value_or(2);
            auto rad = r.get<int>("radius", false).value_or(1);
            auto table = r.get<std::string>("table", true);
            if (!table) return std::nullopt;
            return CASpec{CARule::from_table(q, rad, *table)};
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            r.fail(e.field(), what.substr(what.find(": ") + 2));
            return std::nullopt;
        }
    }
    r.fail("type", "unknown system type '" + type + "'");
    return std::nullopt;
}

std::optional<SystemSpec> read_system(const json& j, const std::string& where, Issues& issues) {
    if (!j.is_object()) {
        issues.emplace_back(where, "must be an object or a file path");
        return std::nullopt;
    }
    Reader r(j, where, issues);
    auto type = r.get<std::string>("type", true);
    auto label = r.get<std::string>("label", false);
    if (!type) return std::nullopt;
    const std::size_t before = issues.size();
    auto kind = read_kind(r, *type);
    r.check_unknown();
    if (!kind || issues.size() != before) return std::nullopt;
    SystemSpec spec{label.value_or(*type), std::move(*kind)};
    if (spec.label.empty()) r.fail("label", "must be nonempty");
    try {
        validate(spec);
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        r.fail(e.field(), what.substr(what.find(": ") + 2));
        return std::nullopt;
    }
    return spec;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void read_budget(const json& j, DetectorBudget& b, Issues& issues) {
    if (!j.is_object()) {
        issues.emplace_back("budget", "must be an object");
        return;
    }
    Reader r(j, "budget", issues);
    if (auto v = r.get<std::int64_t>("horizon", false)) b.horizon = *v;
    if (auto v = r.get<std::int64_t>("samples", false)) b.samples = *v;
    if (auto v = r.get<double>("delta", false)) b.delta = *v;
    if (auto v = r.get<double>("epsilon", false)) b.epsilon = *v;
    if (auto v = r.get<double>("rho", false)) b.rho = *v;
    if (auto v = r.get<std::uint64_t>("seed", false)) b.seed = *v;
    if (auto v = r.get<double>("tail_fraction", false)) b.tail_fraction = *v;
    r.check_unknown();
    try {
        b.validate();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        issues.emplace_back("budget." + e.field(), what.substr(what.find(": ") + 2));
    }
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::pair<std::string, std::string>> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

SystemSpec parse_system(const json& j, const std::string& where) {
    Issues issues;
    auto s = read_system(j, where, issues);
    if (!s || !issues.empty()) throw ConfigErrors(std::move(issues));
    return *s;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigErrors(Issues{{"(document)", std::string("not valid JSON: ") + e.what()}});
    }
    Issues issues;
    RunConfig cfg;
    if (!j.is_object()) throw ConfigErrors(Issues{{"(document)", "must be a JSON object"}});
    for (const auto& [k, v] : j.items())
        if (k != "systems" && k != "budget" && k != "properties" && k != "format" && k != "out")
            issues.emplace_back(k, "unknown field");

    if (!j.contains("systems") || !j["systems"].is_array() || j["systems"].empty()) {
        issues.emplace_back("systems", "need a nonempty list of systems");
    } else {
        std::map<std::string, std::size_t> labels;
        const auto& list = j["systems"];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "systems[" + std::to_string(i) + "]";
            json entry = list[i];
            if (entry.is_string()) {
                const auto path = std::filesystem::path(base_dir) / entry.get<std::string>();
                try {
                    entry = json::parse(read_file(path));
                } catch (const std::exception& e) {
                    issues.emplace_back(where, "cannot load " + path.string() + ": " + e.what());
                    continue;
                }
            }
            auto spec = read_system(entry, where, issues);
            if (!spec) continue;
            auto [it, fresh] = labels.emplace(spec->label, i);
            if (!fresh) {
                issues.emplace_back(where + ".label", "duplicate label '" + spec->label + "' (also systems[" +
                                                          std::to_string(it->second) + "])");
                continue;
            }
            cfg.systems.push_back(std::move(*spec));
        }
    }
    if (j.contains("budget")) read_budget(j["budget"], cfg.budget, issues);
    if (j.contains("properties")) {
        if (!j["properties"].is_array()) {
            issues.emplace_back("properties", "must be a list of property names");
        } else {
            std::set<PropertyId> props;
            for (const auto& p : j["properties"]) {
                try {
                    props.insert(property_from_string(p.get<std::string>()));
                } catch (const std::exception&) {
                    issues.emplace_back("properties", "unknown property " + p.dump());
                }
            }
            cfg.properties = std::move(props);
        }
    }
    if (j.contains("format")) {
        const auto& f = j["format"];
        if (!f.is_string() || (f != "json" && f != "csv-series"))
            issues.emplace_back("format", "must be \"json\" or \"csv-series\"");
        else
            cfg.format = f.get<std::string>();
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) issues.emplace_back("out", "must be a path");
        else cfg.out = j["out"].get<std::string>();
    }
    if (!issues.empty()) throw ConfigErrors(std::move(issues));
    return cfg;
}

json system_to_json(const SystemSpec& spec) {
    json j = {{"type", type_name(spec.kind)}, {"label", spec.label}};
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, LogisticSpec>) {
                j["a"] = k.a;
            } else if constexpr (std::is_same_v<K, RotationSpec> || std::is_same_v<K, SturmianSpec>) {
                j["alpha"] = k.alpha;
            } else if constexpr (std::is_same_v<K, OdometerSpec>) {
                j["base"] = k.base;
            } else if constexpr (std::is_same_v<K, FullShiftSpec>) {
                j["alphabet"] = default_alphabet(k.alphabet);
            } else if constexpr (std::is_same_v<K, SFTSpec>) {
                j["alphabet"] = default_alphabet(k.alphabet);
                json f = json::array();
                for (const auto& w : k.forbidden) f.push_back(render(w));
                j["forbidden"] = f;
            } else if constexpr (std::is_same_v<K, SubstitutionSpec>) {
                json rules = json::array();
                for (const auto& w : k.rules) rules.push_back(render(w));
                j["rules"] = rules;
                j["seed"] = std::string(1, kDigits[k.seed]);
            } else if constexpr (std::is_same_v<K, CASpec>) {
                if (k.rule.wolfram) {
                    j["wolfram"] = *k.rule.wolfram;
                } else {
                    j["alphabet"] = k.rule.alphabet;
                    j["radius"] = k.rule.radius;
                    j["table"] = render(k.rule.table);
                }
            }
        },
        spec.kind);
    return j;
}

}  // namespace chaoslab
