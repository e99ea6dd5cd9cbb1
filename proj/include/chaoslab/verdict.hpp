#pragma once

#include <string>

#include <json.hpp>

namespace chaoslab {

enum class Outcome { Holds, Fails, Inconclusive };

// How a verdict was reached. InferredFromEmpirical marks rule conclusions
// drawn from at least one empirical premise.
enum class Method { Empirical, Exact, Inferred, InferredFromEmpirical };

const char* to_string(Outcome o);
const char* to_string(Method m);
Outcome outcome_from_string(const std::string& s);
Method method_from_string(const std::string& s);

// Three-valued result of a property test. Holds and Fails always carry a
// witness; Inconclusive always carries the exhausted budget.
struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    Method method = Method::Empirical;
    nlohmann::json witness;
    nlohmann::json budget;

    static Verdict holds(Method m, nlohmann::json witness, nlohmann::json budget = nullptr);
    static Verdict fails(Method m, nlohmann::json witness, nlohmann::json budget = nullptr);
    static Verdict inconclusive(nlohmann::json budget, nlohmann::json witness = nullptr);

    bool is_holds() const { return outcome == Outcome::Holds; }
    bool is_fails() const { return outcome == Outcome::Fails; }
    bool is_inconclusive() const { return outcome == Outcome::Inconclusive; }

    bool operator==(const Verdict&) const = default;
};

void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);

}  // namespace chaoslab
