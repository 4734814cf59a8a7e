#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bvselect/error.hpp"
#include "test_support.hpp"

using namespace bvs;

namespace {

// Normalized posterior of every model, computed directly from log_mass.
std::vector<double> brute_posterior(const Problem& prob) {
    const std::uint64_t total = std::uint64_t{1} << prob.p();
    std::vector<double> lm(total);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::uint64_t b = 0; b < total; ++b) {
        try {
            lm[b] = prob.log_mass(ModelId(b));
        } catch (const Error&) {
            lm[b] = -std::numeric_limits<double>::infinity();
        }
        mx = std::max(mx, lm[b]);
    }
    double s = 0.0;
    for (double& v : lm) s += (v = std::exp(v - mx));
    for (double& v : lm) v /= s;
    return lm;
}

ModelId bits_of(std::initializer_list<std::size_t> idx) {
    ModelId m;
    for (auto i : idx) m = m.with(i, true);
    return m;
}

}  // namespace

TEST_CASE("model id: bit operations and ordering") {
    const ModelId m = ModelId{}.with(0, true).with(2, true).with(70, true);
    CHECK(m.size() == 3);
    CHECK(m.test(70));
    CHECK_FALSE(m.test(1));
    CHECK(m.indices() == std::vector<std::size_t>{0, 2, 70});
    CHECK(m.to_bitstring(4) == "1010");
    CHECK(ModelId::full(67).size() == 67);
    CHECK(ModelId::full(64).size() == 64);
    CHECK(m.fits(71));
    CHECK_FALSE(m.fits(70));
    CHECK(ModelId(5) < ModelId(6));
    CHECK(ModelId(~std::uint64_t{0}) < ModelId{}.with(64, true));
    CHECK(m.with(70, false) == ModelId(5));
}

TEST_CASE("top set: keeps the best entries with ModelId tie-breaking") {
    TopSet t(3);
    t.offer({ModelId(9), -1.0});
    t.offer({ModelId(4), -0.5});
    t.offer({ModelId(7), -1.0});
    t.offer({ModelId(2), -1.0});
    t.offer({ModelId(1), -3.0});
    const auto s = t.sorted();
    REQUIRE(s.size() == 3);
    CHECK(s[0].model == ModelId(4));
    CHECK(s[1].model == ModelId(2));
    CHECK(s[2].model == ModelId(7));
}

TEST_CASE("accumulators: rescaling keeps ratios across huge mass ranges") {
    Accumulators a(2, true);
    a.add(ModelId(1), -800.0);
    a.add(ModelId(3), 0.0);
    a.add(ModelId(2), 900.0);
    a.add(ModelId(0), 900.0);
    const auto incl = a.inclusion();
    CHECK(incl[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(incl[0] < 1e-300);
    CHECK(a.log_total() == doctest::Approx(900.0 + std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("enumerate: savings ranking and completeness") {
    const Problem prob = testing::savings_problem();
    const ExploreResult r = enumerate(prob, {16});
    REQUIRE(r.top.size() == 16);
    double sum = 0.0;
    for (const auto& e : r.top) sum += r.posterior(e);
    CHECK(std::abs(sum - 1.0) <= 1e-10);

    // order of the published top-10 table: pop15=0, pop75=1, dpi=2, ddpi=3
    const std::vector<ModelId> order{bits_of({0, 1, 2, 3}), bits_of({0, 1, 3}), bits_of({0, 3}), bits_of({0}),
                                     bits_of({0, 2, 3}),    bits_of({0, 1}),    bits_of({0, 2}), bits_of({0, 1, 2}),
                                     ModelId{},             bits_of({1, 3})};
    for (std::size_t k = 0; k < order.size(); ++k) CHECK(r.top[k].model == order[k]);
    CHECK(r.skipped_models == 0);
    CHECK(r.acc.has_joint());

    const auto post = brute_posterior(prob);
    for (const auto& e : r.top) CHECK(r.posterior(e) == doctest::Approx(post[e.model.low()]).epsilon(1e-12));
}

TEST_CASE("enumerate: accumulator invariants") {
    const ExploreResult r = enumerate(testing::uscrime_problem(), {10});
    const auto& a = r.acc;
    double dim_sum = 0.0;
    for (double v : a.dim) dim_sum += v;
    CHECK(dim_sum == doctest::Approx(a.total).epsilon(1e-12));
    for (std::size_t i = 0; i < r.p(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        CHECK(a.incl[i] <= a.total * (1 + 1e-15));
        CHECK(a.joint(ii, ii) == doctest::Approx(a.incl[i]).epsilon(1e-13));
        for (std::size_t j = 0; j < r.p(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            CHECK(a.joint(ii, jj) == a.joint(jj, ii));
            CHECK(a.joint(ii, jj) <= std::min(a.incl[i], a.incl[j]) * (1 + 1e-13));
        }
    }
}

TEST_CASE("enumerate: pure noise covariate favours the null model") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z;
    Eigen::MatrixXd v(500, 2);
    for (Eigen::Index i = 0; i < 500; ++i) v(i, 0) = z(rng), v(i, 1) = z(rng);
    const Dataset ds({"x", "y"}, v);
    const Problem prob = testing::problem(testing::design(ds, "y~x"));
    const ExploreResult r = enumerate(prob);
    const double b = bf({GPrior::Robust}, {500, 1, 1, q_ratio(ModelId(1), *prob.stats)});
    // two models, Scott-Berger weights 1/2 each
    const double null_post = 1.0 / (1.0 + b);
    CHECK(null_post > 0.5);
    CHECK(r.top.front().model == ModelId{});
    CHECK(r.posterior(r.top.front()) == doctest::Approx(null_post).epsilon(1e-12));
}

TEST_CASE("enumerate: posteriors do not depend on the anchoring model") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t p = 3 + static_cast<std::size_t>(rep) * 2;
        const Dataset ds = testing::random_dataset(rng, 40, p);
        const Problem prob = testing::problem(testing::design(ds, testing::rhs_all(p)));
        const std::uint64_t total = std::uint64_t{1} << p;
        const ExploreResult r = enumerate(prob, {static_cast<std::size_t>(total)});
        // re-express every Bayes factor against the full model
        const double lf = prob.log_mass(ModelId::full(p));
        std::vector<double> rel(total);
        double s = 0.0;
        for (std::uint64_t b = 0; b < total; ++b) s += (rel[b] = std::exp(prob.log_mass(ModelId(b)) - lf));
        for (const auto& e : r.top) CHECK(std::abs(r.posterior(e) - rel[e.model.low()] / s) <= 1e-9);
    }
}

TEST_CASE("enumerate: singular models get zero mass and are counted") {
    const Dataset dup = parse_csv("y,a,b,c\n1,1,2,0.3\n2,2,4,0.1\n3,3,6,0.7\n5,4,8,0.2\n4,6,12,0.9\n7,2,4,0.4\n");
    const Problem prob = testing::problem(testing::design(dup, "y~a+b+c"));
    const ExploreResult r = enumerate(prob, {8});
    CHECK(r.skipped_models == 2);
    CHECK(r.top.size() == 6);
    for (const auto& e : r.top) CHECK_FALSE((e.model.test(0) && e.model.test(1)));
}

TEST_CASE("enumerate: size guard") {
    std::mt19937_64 rng(1);
    const Dataset ds = testing::random_dataset(rng, 60, 26);
    const Problem prob = testing::problem(testing::design(ds, testing::rhs_all(26)));
    try {
        enumerate(prob);
        FAIL("p = 26 accepted without force");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("--force") != std::string::npos);
    }
    CHECK_THROWS_AS(enumerate(testing::savings_problem(), {0}), UsageError);
}

TEST_CASE("enumerate_parallel: identical to the serial path") {
    for (const Problem& prob : {testing::savings_problem(), testing::uscrime_problem()}) {
        const ExploreResult s = enumerate(prob, {50});
        for (std::size_t w : {1u, 2u, 3u, 4u, 8u}) {
            const ExploreResult p = enumerate_parallel(prob, {50}, w);
            REQUIRE(p.top.size() == s.top.size());
            for (std::size_t k = 0; k < s.top.size(); ++k) {
                CHECK(p.top[k].model == s.top[k].model);
                CHECK(std::abs(p.posterior(p.top[k]) - s.posterior(s.top[k])) <= 1e-12 * s.posterior(s.top[k]));
            }
            const auto a = s.acc.inclusion(), b = p.acc.inclusion();
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
            CHECK((s.acc.joint_probabilities() - p.acc.joint_probabilities()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(enumerate_parallel(testing::savings_problem(), {}, 0), UsageError);
}

TEST_CASE("gibbs: retained draw count, determinism and options") {
    const Problem prob = testing::savings_problem();
    GibbsOptions o;
    o.iterations = 10;
    o.thin = 5;
    o.seed = 3;
    const ExploreResult r = gibbs(prob, o);
    CHECK(r.retained == 2);
    std::uint64_t total = 0;
    for (const auto& v : r.visits) total += v.count;
    CHECK(total == 2);

    o.iterations = 2000;
    o.thin = 3;
    const ExploreResult a = gibbs(prob, o), b = gibbs(prob, o);
    CHECK(a.retained == 666);
    REQUIRE(a.visits.size() == b.visits.size());
    for (std::size_t k = 0; k < a.visits.size(); ++k) {
        CHECK(a.visits[k].model == b.visits[k].model);
        CHECK(a.visits[k].count == b.visits[k].count);
    }
    CHECK(a.acc.incl == b.acc.incl);
    double dsum = 0.0;
    for (double v : a.acc.dimension()) dsum += v;
    CHECK(dsum == 1.0);

    o.init = GibbsOptions::Init::Explicit;
    o.explicit_model = ModelId{}.with(4, true);
    CHECK_THROWS_AS(gibbs(prob, o), UsageError);
    o.explicit_model = ModelId(0b0101);
    CHECK(gibbs(prob, o).init == "1010");
    o.thin = 0;
    CHECK_THROWS_AS(gibbs(prob, o), UsageError);
    o.thin = 1;
    o.iterations = 0;
    CHECK_THROWS_AS(gibbs(prob, o), UsageError);
}

TEST_CASE("gibbs: visit frequencies converge to the exact posterior") {
    SUBCASE("p = 8 synthetic problem, inclusion within 0.02") {
        std::mt19937_64 rng(8);
        const Dataset ds = testing::random_dataset(rng, 60, 8, 0.35);
        const Problem prob = testing::problem(testing::design(ds, testing::rhs_all(8)));
        const auto exact = enumerate(prob).acc.inclusion();
        GibbsOptions o;
        o.iterations = 50000;
        o.seed = 21;
        const auto approx = gibbs(prob, o).acc.inclusion();
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(exact[i] - approx[i]) <= 0.02);
    }
    SUBCASE("p = 5 total variation below 0.01 with 10^6 draws") {
        std::mt19937_64 rng(6);
        const Dataset ds = testing::random_dataset(rng, 30, 5, 0.3);
        const Problem prob = testing::problem(testing::design(ds, testing::rhs_all(5)));
        const auto post = brute_posterior(prob);
        GibbsOptions o;
        o.iterations = 1000000;
        o.seed = 99;
        o.init = GibbsOptions::Init::Random;
        const ExploreResult r = gibbs(prob, o);
        std::vector<double> freq(32, 0.0);
        for (const auto& v : r.visits) freq[v.model.low()] = static_cast<double>(v.count) / static_cast<double>(r.retained);
        double tv = 0.0;
        for (std::size_t b = 0; b < 32; ++b) tv += 0.5 * std::abs(freq[b] - post[b]);
        CHECK(tv < 0.01);
    }
}

TEST_CASE("gibbs: handles more than 64 candidates") {
    std::mt19937_64 rng(70);
    const Dataset ds = testing::random_dataset(rng, 150, 70, 0.5);
    const Problem prob = testing::problem(testing::design(ds, testing::rhs_all(70)),
                                          GPrior::Robust, ModelPriorSpec::beta_binomial_wstar(7, 70));
    GibbsOptions o;
    o.iterations = 300;
    o.seed = 5;
    const ExploreResult r = gibbs(prob, o);
    CHECK(r.retained == 300);
    // x1, x4, ..., x70 carry effects; x67 and x70 sit in the upper word
    const auto incl = r.acc.inclusion();
    CHECK(incl[66] > 0.9);
    CHECK(incl[69] > 0.9);
}
