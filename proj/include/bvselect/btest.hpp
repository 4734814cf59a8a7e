#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvselect/dataset.hpp"
#include "bvselect/formula.hpp"
#include "bvselect/gprior.hpp"

namespace bvs {

/// Named competing models over one dataset.
struct HypothesisSet {
    std::vector<std::pair<std::string, Formula>> models;
    /// Unnormalized prior weight per hypothesis name; empty means a constant prior.
    std::map<std::string, double> prior;
    bool relax_nest = false;
};

struct BtestResult {
    std::vector<std::string> names;
    std::string null_name;
    std::vector<double> bayes_factors;  ///< each hypothesis against the null; the null itself is 1
    std::vector<double> prior;          ///< normalized prior probabilities
    std::vector<double> posterior;
};

/** Identifies the null hypothesis.
 *
 * Strict mode: the unique hypothesis whose term-name set is contained in every other one.
 * Relaxed mode: the hypothesis with the largest SSE, which must have strictly fewer parameters
 * than every other hypothesis.
 */
std::string detect_null(const HypothesisSet& hs, const Dataset& ds);

BtestResult btest(const HypothesisSet& hs, const Dataset& ds, GPrior variant = GPrior::Robust);

}  // namespace bvs
