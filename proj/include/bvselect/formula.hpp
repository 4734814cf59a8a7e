#pragma once
#include <string>
#include <string_view>
#include <vector>

namespace bvs {

class Dataset;

/// One right-hand-side term: a plain column, or a derived sum `I(a+b+...)`.
struct Term {
    std::vector<std::string> columns;
    bool derived = false;

    /// Display name as written, e.g. "pop15" or "I(pop15+pop75)".
    std::string name() const;
    /// Name with inner columns sorted, used for set comparisons between hypotheses.
    std::string canonical() const;

    friend bool operator==(const Term&, const Term&) = default;
};

/** A model formula restricted to `response ~ rhs` where rhs is "1", ".", or a "+"-separated
 * list of terms. The intercept is always present in this grammar.
 */
struct Formula {
    std::string response;
    std::vector<Term> terms;
    bool intercept = true;
    bool dot = false;  ///< "." not yet expanded against a dataset

    friend bool operator==(const Formula&, const Formula&) = default;
};

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

/// Expands "." and checks that every referenced column exists and terms are unique.
Formula bind(const Formula& f, const Dataset& ds);

}  // namespace bvs
