#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chaoslab/ca.hpp"
#include "chaoslab/metric_system.hpp"
#include "chaoslab/symlang.hpp"
#include "chaoslab/verdict.hpp"

namespace chaoslab {

struct TentSpec {};
struct LogisticSpec {
    double a = 4.0;
};
struct RotationSpec {
    double alpha = 0.0;
};
struct IdentitySpec {};
struct SturmianSpec {
    double alpha = 0.0;
};
// rules[s] is the image of symbol s; the alphabet is {0 .. rules.size()-1}.
struct SubstitutionSpec {
    std::vector<Word> rules;
    Symbol seed = 0;
};
struct SFTSpec {
    int alphabet = 2;
    std::vector<Word> forbidden;
};
struct FullShiftSpec {
    int alphabet = 2;
};
struct OdometerSpec {
    int base = 2;
};
struct CASpec {
    CARule rule;
};

using SystemKind = std::variant<TentSpec, LogisticSpec, RotationSpec, IdentitySpec, SturmianSpec, SubstitutionSpec,
                                SFTSpec, FullShiftSpec, OdometerSpec, CASpec>;

struct SystemSpec {
    std::string label;
    SystemKind kind;
};

// Name used in configs ("tent", "sft", ...).
std::string type_name(const SystemKind& kind);

// A constructed system together with the exact objects behind it.
struct BuiltSystem {
    SystemSpec spec;
    MetricSystem system;
    std::shared_ptr<const SFTGraph> graph;          // SFT and full shift
    std::optional<CARule> rule;                     // CA
    std::shared_ptr<const Word> fixed_point;        // substitution, one-sided prefix
    std::optional<BlockingWitness> blocking;        // CA, from the construction-time search
};

BuiltSystem build_system(const SystemSpec& spec);

// Throws ConfigError naming the field when the spec is invalid.
void validate(const SystemSpec& spec);

// Throws ConfigError when alpha is within 1e-9 of p/q with q <= 10^6 and the
// error is also below 10^-3 / q^2 (far better than any convergent of a
// badly approximable number).
void check_irrational(double alpha, const std::string& field = "alpha");

Word sturmian_code(double alpha, double x0, std::size_t length);
Word substitution_fixed_point(const std::vector<Word>& rules, Symbol seed, std::size_t length);
bool substitution_primitive(const std::vector<Word>& rules);
// incidence[a][b] = number of b in the image of a.
std::vector<std::vector<std::uint64_t>> incidence_matrix(const std::vector<Word>& rules);

// A long finite word of the language for non-SFT subshifts, nullopt otherwise.
std::optional<Word> language_sample(const BuiltSystem& built, std::size_t length);

// Holds when every length-n factor of the sample recurs with a bounded gap;
// the witness records the largest gap seen.
Verdict uniform_recurrence_probe(const Word& sample, int n);

// Length of the longest factor of `w` with period p.
std::size_t longest_periodic_run(const Word& w, int p);

}  // namespace chaoslab
