#include "chaoslab/verdict.hpp"

#include "chaoslab/error.hpp"

namespace chaoslab {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Holds: return "holds";
        case Outcome::Fails: return "fails";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Method m) {
    switch (m) {
        case Method::Empirical: return "empirical";
        case Method::Exact: return "exact";
        case Method::Inferred: return "inferred";
        case Method::InferredFromEmpirical: return "inferred-from-empirical";
    }
    return "?";
}

Outcome outcome_from_string(const std::string& s) {
    for (auto o : {Outcome::Holds, Outcome::Fails, Outcome::Inconclusive})
        if (s == to_string(o)) return o;
    throw InputError("unknown outcome '" + s + "'");
}

Method method_from_string(const std::string& s) {
    for (auto m : {Method::Empirical, Method::Exact, Method::Inferred, Method::InferredFromEmpirical})
        if (s == to_string(m)) return m;
    throw InputError("unknown method '" + s + "'");
}

Verdict Verdict::holds(Method m, nlohmann::json witness, nlohmann::json budget) {
    if (witness.is_null()) throw InputError("a Holds verdict needs a witness");
    return {Outcome::Holds, m, std::move(witness), std::move(budget)};
}

Verdict Verdict::fails(Method m, nlohmann::json witness, nlohmann::json budget) {
    if (witness.is_null()) throw InputError("a Fails verdict needs a witness");
    return {Outcome::Fails, m, std::move(witness), std::move(budget)};
}

Verdict Verdict::inconclusive(nlohmann::json budget, nlohmann::json witness) {
    if (budget.is_null()) throw InputError("an Inconclusive verdict needs its budget");
    return {Outcome::Inconclusive, Method::Empirical, std::move(witness), std::move(budget)};
}

void to_json(nlohmann::json& j, const Verdict& v) {
    j = {{"outcome", to_string(v.outcome)}, {"method", to_string(v.method)}, {"witness", v.witness}, {"budget", v.budget}};
}

void from_json(const nlohmann::json& j, Verdict& v) {
    v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    v.method = method_from_string(j.at("method").get<std::string>());
    v.witness = j.at("witness");
    v.budget = j.at("budget");
}

}  // namespace chaoslab
