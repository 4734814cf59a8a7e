#include "bvselect/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvselect/error.hpp"

namespace bvs {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_joint(const ExploreResult& r) {
    if (!r.acc.has_joint()) throw UsageError("joint inclusion probabilities were not accumulated for this result");
}
}  // namespace

std::size_t candidate_index(const ExploreResult& r, const std::string& name) {
    auto it = std::find(r.names.begin(), r.names.end(), name);
    if (it == r.names.end()) throw UsageError("'" + name + "' is not a candidate covariate");
    return static_cast<std::size_t>(it - r.names.begin());
}

SummaryReport summarize(const ExploreResult& r) {
    if (r.top.empty()) throw Error("result has no retained models");
    SummaryReport s;
    s.names = r.names;
    s.inclusion = r.acc.inclusion();
    s.hpm = r.top.front().model;
    for (std::size_t i = 0; i < s.inclusion.size(); ++i)
        if (s.inclusion[i] > 0.5) s.mpm = s.mpm.with(i, true);
    s.dimension = dimension_posterior(r);
    s.p0 = r.p0();
    return s;
}

Eigen::MatrixXd joint_matrix(const ExploreResult& r) {
    require_joint(r);
    return r.acc.joint_probabilities();
}

Eigen::MatrixXd conditional_matrix(const ExploreResult& r, Warnings* warnings) {
    const Eigen::MatrixXd joint = joint_matrix(r);
    const auto p = joint.rows();
    Eigen::MatrixXd m(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double incl = joint(i, i);
        if (incl <= 0.0) {
            m.row(i).setConstant(kNaN);
            if (warnings) warnings->push_back("Pr(. | " + r.names[static_cast<std::size_t>(i)] + ") undefined: inclusion probability is 0");
            continue;
        }
        for (Eigen::Index j = 0; j < p; ++j) m(i, j) = i == j ? 1.0 : joint(i, j) / incl;
    }
    return m;
}

Eigen::MatrixXd not_matrix(const ExploreResult& r, Warnings* warnings) {
    const Eigen::MatrixXd joint = joint_matrix(r);
    const auto p = joint.rows();
    Eigen::MatrixXd m(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double out = 1.0 - joint(i, i);
        if (out <= 0.0) {
            m.row(i).setConstant(kNaN);
            if (warnings) warnings->push_back("Pr(. | Not " + r.names[static_cast<std::size_t>(i)] + ") undefined: inclusion probability is 1");
            continue;
        }
        for (Eigen::Index j = 0; j < p; ++j) m(i, j) = i == j ? 0.0 : (joint(j, j) - joint(i, j)) / out;
    }
    return m;
}

Jointness jointness(const ExploreResult& r, std::size_t i, std::size_t j, Warnings* warnings) {
    if (i == j) throw UsageError("jointness needs two different covariates");
    const Eigen::MatrixXd joint = joint_matrix(r);
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    const double both = joint(a, b);
    const double either = joint(a, a) + joint(b, b) - both;
    const double alone = joint(a, a) + joint(b, b) - 2.0 * both;
    auto ratio = [&](double den, const char* what) {
        if (both == 0.0) return 0.0;
        if (den <= 0.0) {
            if (warnings) warnings->push_back(std::string("jointness ratio undefined: ") + what + " has probability 0");
            return kNaN;
        }
        return both / den;
    };
    return {both, ratio(either, "including at least one"), ratio(alone, "including exactly one")};
}

std::vector<double> dimension_posterior(const ExploreResult& r) { return r.acc.dimension(); }

}  // namespace bvs
