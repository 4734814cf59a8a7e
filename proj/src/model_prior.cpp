#include "bvselect/model_prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bvselect/error.hpp"

namespace bvs {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

ModelPriorSpec ModelPriorSpec::user(std::vector<double> w) {
    if (w.empty()) throw UsageError("user prior needs p+1 weights");
    bool any = false;
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("user prior weights must be finite and nonnegative");
        any = any || v > 0.0;
    }
    if (!any) throw UsageError("user prior weights are all zero");
    return {UserDims{std::move(w)}};
}

ModelPriorSpec ModelPriorSpec::theta(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw UsageError("theta must lie in (0, 1)");
    return {ThetaFixed{theta}};
}

ModelPriorSpec ModelPriorSpec::beta_binomial(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw UsageError("beta-binomial b must be positive");
    return {BetaBinomial{b}};
}

ModelPriorSpec ModelPriorSpec::beta_binomial_wstar(double wstar, std::size_t p) {
    if (!(wstar > 0.0 && wstar < static_cast<double>(p))) throw UsageError("w* must lie in (0, p)");
    return beta_binomial((static_cast<double>(p) - wstar) / wstar);
}

std::string ModelPriorSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{[&](const Constant&) { os << "Constant"; },
                          [&](const ScottBerger&) { os << "ScottBerger"; },
                          [&](const UserDims& u) {
                              os << "User(";
                              for (std::size_t i = 0; i < u.weights.size(); ++i) os << (i ? "," : "") << u.weights[i];
                              os << ")";
                          },
                          [&](const ThetaFixed& t) { os << "Theta(" << t.theta << ")"; },
                          [&](const BetaBinomial& b) { os << "BetaBinomial(" << b.b << ")"; }},
               kind);
    return os.str();
}

double log_choose(std::size_t n, std::size_t k) {
    const double nn = static_cast<double>(n), kk = static_cast<double>(k);
    return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
}

double log_prior_weight(const ModelPriorSpec& spec, std::size_t pg, std::size_t p) {
    if (pg > p) throw UsageError("model dimension exceeds the number of candidates");
    const double k = static_cast<double>(pg), pp = static_cast<double>(p);
    return std::visit(
        overloaded{[](const ModelPriorSpec::Constant&) { return 0.0; },
                   [&](const ModelPriorSpec::ScottBerger&) { return -std::log(pp + 1.0) - log_choose(p, pg); },
                   [&](const ModelPriorSpec::UserDims& u) {
                       if (u.weights.size() != p + 1)
                           throw UsageError("user prior has " + std::to_string(u.weights.size()) +
                                            " weights but the problem needs p+1 = " + std::to_string(p + 1));
                       const double w = u.weights[pg];
                       return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
                   },
                   [&](const ModelPriorSpec::ThetaFixed& t) {
                       return k * std::log(t.theta) + (pp - k) * std::log1p(-t.theta);
                   },
                   [&](const ModelPriorSpec::BetaBinomial& b) {
                       return std::lgamma(k + 1.0) + std::lgamma(pp - k + b.b);
                   }},
        spec.kind);
}

double prior_weight(const ModelPriorSpec& spec, std::size_t pg, std::size_t p) {
    return std::exp(log_prior_weight(spec, pg, p));
}

std::vector<double> normalized_prior(const ModelPriorSpec& spec, std::size_t p) {
    std::vector<double> logm(p + 1);
    for (std::size_t k = 0; k <= p; ++k) logm[k] = log_choose(p, k) + log_prior_weight(spec, k, p);
    const double mx = *std::max_element(logm.begin(), logm.end());
    double total = 0.0;
    for (double& v : logm) total += (v = std::exp(v - mx));
    for (double& v : logm) v /= total;
    return logm;
}

}  // namespace bvs
