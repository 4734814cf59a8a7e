#include "bvselect/gprior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvselect/error.hpp"
#include "bvselect/quadrature.hpp"

namespace bvs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

GPriorSpec make_gprior(GPrior variant, std::size_t n, std::size_t p) {
    GPriorSpec s{variant, 0.0};
    if (variant == GPrior::UnitInformation) s.g = static_cast<double>(n);
    if (variant == GPrior::FLS) s.g = std::max(static_cast<double>(n), static_cast<double>(p) * static_cast<double>(p));
    return s;
}

GPrior parse_gprior(std::string_view name) {
    if (name == "Robust") return GPrior::Robust;
    if (name == "ZellnerSiow") return GPrior::ZellnerSiow;
    if (name == "gZellner") return GPrior::UnitInformation;
    if (name == "FLS") return GPrior::FLS;
    if (name == "Liangetal") return GPrior::HyperGOverN;
    throw UsageError("unknown parameter prior '" + std::string(name) +
                     "' (expected Robust, ZellnerSiow, gZellner, FLS or Liangetal)");
}

std::string to_string(GPrior v) {
    switch (v) {
        case GPrior::Robust: return "Robust";
        case GPrior::ZellnerSiow: return "ZellnerSiow";
        case GPrior::UnitInformation: return "gZellner";
        case GPrior::FLS: return "FLS";
        case GPrior::HyperGOverN: return "Liangetal";
    }
    return "?";
}

double log_bf_fixed_g(const BFInput& in, double g) {
    if (in.pg == 0) return 0.0;
    const double a = 0.5 * static_cast<double>(in.n - in.p0 - in.pg);
    const double b = 0.5 * static_cast<double>(in.n - in.p0);
    return a * std::log1p(g) - b * std::log1p(g * in.q);
}

double bf_fixed_g(const BFInput& in, double g) { return std::exp(log_bf_fixed_g(in, g)); }

double robust_support_lower(std::size_t n, std::size_t p0, std::size_t pg) {
    return (1.0 + static_cast<double>(n)) / static_cast<double>(pg + p0) - 1.0;
}

double robust_g_density(double g, std::size_t n, std::size_t p0, std::size_t pg) {
    if (!(g > robust_support_lower(n, p0, pg))) return 0.0;
    const double c = (1.0 + static_cast<double>(n)) / static_cast<double>(pg + p0);
    return 0.5 * std::sqrt(c) * std::pow(g + 1.0, -1.5);
}

double log_g_density(GPrior variant, double g, std::size_t n, std::size_t p0, std::size_t pg) {
    const double nn = static_cast<double>(n);
    if (!(g > 0.0)) return kNegInf;
    switch (variant) {
        case GPrior::Robust: {
            if (!(g > robust_support_lower(n, p0, pg))) return kNegInf;
            const double c = (1.0 + nn) / static_cast<double>(pg + p0);
            return std::log(0.5) + 0.5 * std::log(c) - 1.5 * std::log1p(g);
        }
        case GPrior::ZellnerSiow:
            // inverse gamma IGa(1/2, n/2)
            return 0.5 * std::log(0.5 * nn) - std::lgamma(0.5) - 1.5 * std::log(g) - nn / (2.0 * g);
        case GPrior::HyperGOverN:
            return -std::log(2.0 * nn) - 1.5 * std::log1p(g / nn);
        default:
            throw UsageError("fixed-g prior has no mixing density");
    }
}

double log_bf(const GPriorSpec& spec, const BFInput& in) {
    if (in.n <= in.p0 + in.pg)
        throw InsufficientData("Bayes factor requires n > p0 + pγ (n = " + std::to_string(in.n) + ")");
    if (in.pg == 0) return 0.0;
    if (spec.fixed_g()) return log_bf_fixed_g(in, spec.g);

    // g = 1/u − 1, dg = du/u²; u ranges over (0, u_max].
    double u_max = 1.0;
    if (spec.variant == GPrior::Robust) u_max = static_cast<double>(in.pg + in.p0) / (1.0 + static_cast<double>(in.n));
    auto log_integrand = [&](double u) {
        if (!(u > 0.0) || u > 1.0) return kNegInf;
        const double g = (1.0 - u) / u;
        const double lg = log_g_density(spec.variant, g, in.n, in.p0, in.pg);
        if (lg == kNegInf) return kNegInf;
        return log_bf_fixed_g(in, g) + lg - 2.0 * std::log(u);
    };
    if (spec.variant == GPrior::Robust) {
        // On the support the Robust density is closed-form in u: ½·sqrt(c)·u^{3/2}.
        const double c = (1.0 + static_cast<double>(in.n)) / static_cast<double>(in.pg + in.p0);
        const double log_half_sqrt_c = std::log(0.5) + 0.5 * std::log(c);
        return integrate_log(
                   [&](double u) {
                       if (!(u > 0.0)) return kNegInf;
                       const double g = (1.0 - u) / u;
                       return log_bf_fixed_g(in, g) + log_half_sqrt_c - 0.5 * std::log(u);
                   },
                   0.0, u_max)
            .log_value;
    }
    return integrate_log(log_integrand, 0.0, u_max).log_value;
}

double bf(const GPriorSpec& spec, const BFInput& in) { return std::exp(log_bf(spec, in)); }

}  // namespace bvs
