#pragma once
#include <string>
#include <string_view>

namespace bvs {

/// Parameter-prior families scaled by σ²(V_γᵀV_γ)⁻¹, differing in the treatment of g.
enum class GPrior { Robust, ZellnerSiow, UnitInformation, FLS, HyperGOverN };

struct GPriorSpec {
    GPrior variant = GPrior::Robust;
    double g = 0.0;  ///< fixed g for UnitInformation (n) and FLS (max{n, p²}); unused otherwise

    bool fixed_g() const { return variant == GPrior::UnitInformation || variant == GPrior::FLS; }
};

/// `p` is the number of candidate covariates in the problem (used by FLS only).
GPriorSpec make_gprior(GPrior variant, std::size_t n, std::size_t p);

/// Accepts the command-line names Robust, ZellnerSiow, gZellner, FLS and Liangetal.
GPrior parse_gprior(std::string_view name);
std::string to_string(GPrior v);

/// Sufficient inputs for every Bayes factor against the null model.
struct BFInput {
    std::size_t n = 0;
    std::size_t p0 = 0;
    std::size_t pg = 0;
    double q = 1.0;  ///< SSE_γ / SSE_0
};

/// log B(g) = ((n−p0−pγ)/2)·log(1+g) − ((n−p0)/2)·log(1+g·Q)
double log_bf_fixed_g(const BFInput& in, double g);
double bf_fixed_g(const BFInput& in, double g);

/// log B_γ0 under `spec`; mixtures over g are integrated by adaptive quadrature in u = 1/(1+g).
double log_bf(const GPriorSpec& spec, const BFInput& in);
double bf(const GPriorSpec& spec, const BFInput& in);

/// (1+n)/(pγ+p0) − 1
double robust_support_lower(std::size_t n, std::size_t p0, std::size_t pg);
/// ½·sqrt((1+n)/(pγ+p0))·(g+1)^(−3/2) above the support bound, 0 below it.
double robust_g_density(double g, std::size_t n, std::size_t p0, std::size_t pg);
/// Log of the normalized mixing density π(g) of a non-fixed variant.
double log_g_density(GPrior variant, double g, std::size_t n, std::size_t p0, std::size_t pg);

}  // namespace bvs
