#include <doctest.h>

#include <cmath>

#include "bvselect/error.hpp"
#include "bvselect/model_prior.hpp"

using namespace bvs;

namespace {

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Ratio w(k)/w(0) must match between two specs for every k.
void check_proportional(const ModelPriorSpec& a, const ModelPriorSpec& b, std::size_t p, double tol) {
    const double a0 = log_prior_weight(a, 0, p), b0 = log_prior_weight(b, 0, p);
    for (std::size_t k = 0; k <= p; ++k)
        CHECK(std::abs((log_prior_weight(a, k, p) - a0) - (log_prior_weight(b, k, p) - b0)) <= tol);
}

}  // namespace

TEST_CASE("prior weights: closed forms") {
    CHECK(prior_weight(ModelPriorSpec::constant(), 3, 10) == 1.0);
    CHECK(prior_weight(ModelPriorSpec::scott_berger(), 2, 4) == doctest::Approx(1.0 / 30.0).epsilon(1e-14));
    CHECK(prior_weight(ModelPriorSpec::theta(0.25), 0, 15) == doctest::Approx(std::pow(0.75, 15)).epsilon(1e-13));
    CHECK(prior_weight(ModelPriorSpec::user({1, 2, 3}), 1, 2) == 2.0);
    const ModelPriorSpec bb = ModelPriorSpec::beta_binomial_wstar(7, 67);
    CHECK(std::get<ModelPriorSpec::BetaBinomial>(bb.kind).b == doctest::Approx(60.0 / 7.0).epsilon(1e-15));
    for (std::size_t k : {0u, 7u, 30u, 67u})
        CHECK(log_prior_weight(bb, k, 67) ==
              doctest::Approx(std::lgamma(k + 1.0) + std::lgamma(67.0 - k + 60.0 / 7.0)).epsilon(1e-14));
}

TEST_CASE("prior weights: overflow-free for large p") {
    const ModelPriorSpec bb = ModelPriorSpec::beta_binomial_wstar(7, 67);
    CHECK(std::isfinite(log_prior_weight(bb, 0, 67)));
    CHECK(std::isinf(std::tgamma(67.0 + 60.0 / 7.0) * std::tgamma(200.0)));
    CHECK(std::isfinite(log_prior_weight(ModelPriorSpec::scott_berger(), 60, 120)));
}

TEST_CASE("normalized prior over dimensions") {
    for (std::size_t p : {1u, 4u, 14u, 30u}) {
        const auto sb = normalized_prior(ModelPriorSpec::scott_berger(), p);
        for (double v : sb) CHECK(v == doctest::Approx(1.0 / static_cast<double>(p + 1)).epsilon(1e-12));
    }
    const auto c = normalized_prior(ModelPriorSpec::constant(), 3);
    CHECK(c[0] == doctest::Approx(1.0 / 8));
    CHECK(c[1] == doctest::Approx(3.0 / 8));
    CHECK(c[2] == doctest::Approx(3.0 / 8));
    CHECK(c[3] == doctest::Approx(1.0 / 8));
}

TEST_CASE("beta-binomial prior mean of the model size equals w*") {
    for (auto [p, wstar] : {std::pair<std::size_t, double>{67, 7.0}, {14, 3.5}, {30, 10.0}, {5, 0.5}}) {
        // independent summation with explicit binomial coefficients and Beta-function weights
        const double b = (static_cast<double>(p) - wstar) / wstar;
        double mass = 0.0, mean = 0.0;
        for (std::size_t k = 0; k <= p; ++k) {
            const double w = std::exp(std::lgamma(k + 1.0) + std::lgamma(p - k + b) - std::lgamma(p + 1.0 + b));
            mass += binom(p, k) * w;
            mean += static_cast<double>(k) * binom(p, k) * w;
        }
        CHECK(mean / mass == doctest::Approx(wstar).epsilon(1e-9));
        const auto dist = normalized_prior(ModelPriorSpec::beta_binomial_wstar(wstar, p), p);
        double m = 0.0;
        for (std::size_t k = 0; k <= p; ++k) m += static_cast<double>(k) * dist[k];
        CHECK(std::abs(m - wstar) <= 1e-6);
    }
}

TEST_CASE("Scott-Berger is the beta-binomial with b = 1") {
    for (std::size_t p = 1; p <= 30; ++p)
        check_proportional(ModelPriorSpec::scott_berger(), ModelPriorSpec::beta_binomial(1.0), p, 1e-10);
}

TEST_CASE("theta = 1/2 is the constant prior") {
    for (std::size_t p = 1; p <= 30; ++p) check_proportional(ModelPriorSpec::theta(0.5), ModelPriorSpec::constant(), p, 1e-12);
}

TEST_CASE("user weights are accepted up to a constant") {
    const std::vector<double> w{1, 4, 6, 4, 1};
    std::vector<double> scaled;
    for (double v : w) scaled.push_back(v * 123.0);
    const auto a = normalized_prior(ModelPriorSpec::user(w), 4);
    const auto b = normalized_prior(ModelPriorSpec::user(scaled), 4);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
    CHECK(normalized_prior(ModelPriorSpec::user({0, 1, 0}), 2)[1] == 1.0);
}

TEST_CASE("invalid model priors") {
    CHECK_THROWS_AS(ModelPriorSpec::user({}), UsageError);
    CHECK_THROWS_AS(ModelPriorSpec::user({0, 0}), UsageError);
    CHECK_THROWS_AS(ModelPriorSpec::user({1, -1}), UsageError);
    CHECK_THROWS_AS(ModelPriorSpec::theta(0.0), UsageError);
    CHECK_THROWS_AS(ModelPriorSpec::theta(1.0), UsageError);
    CHECK_THROWS_AS(ModelPriorSpec::beta_binomial(0.0), UsageError);
    CHECK_THROWS_AS(ModelPriorSpec::beta_binomial_wstar(10, 10), UsageError);
    CHECK_THROWS_AS(log_prior_weight(ModelPriorSpec::user({1, 1}), 0, 3), UsageError);
    CHECK_THROWS_AS(log_prior_weight(ModelPriorSpec::constant(), 4, 3), UsageError);
}
