#pragma once
#include <string>
#include <variant>
#include <vector>

namespace bvs {

/** Exchangeable prior over the model space: the weight of a model depends only on pγ.
 *
 * Weights are unnormalized and handled in log space.
 */
struct ModelPriorSpec {
    struct Constant {};
    struct ScottBerger {};
    struct UserDims {
        std::vector<double> weights;  ///< length p+1, weights[k] for models with k candidates
    };
    struct ThetaFixed {
        double theta;
    };
    struct BetaBinomial {
        double b;
    };
    std::variant<Constant, ScottBerger, UserDims, ThetaFixed, BetaBinomial> kind = ScottBerger{};

    static ModelPriorSpec constant() { return {Constant{}}; }
    static ModelPriorSpec scott_berger() { return {ScottBerger{}}; }
    static ModelPriorSpec user(std::vector<double> w);
    static ModelPriorSpec theta(double theta);
    static ModelPriorSpec beta_binomial(double b);
    /// b = (p − w*)/w*, so that the prior expected number of covariates is w*.
    static ModelPriorSpec beta_binomial_wstar(double wstar, std::size_t p);

    std::string describe() const;
};

/// log of the unnormalized prior weight of a single model with `pg` of `p` candidates.
double log_prior_weight(const ModelPriorSpec& spec, std::size_t pg, std::size_t p);
double prior_weight(const ModelPriorSpec& spec, std::size_t pg, std::size_t p);

/// Prior mass of each dimension 0..p, i.e. C(p,k)·weight(k) normalized to sum to one.
std::vector<double> normalized_prior(const ModelPriorSpec& spec, std::size_t p);

double log_choose(std::size_t n, std::size_t k);

}  // namespace bvs
