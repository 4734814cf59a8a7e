#pragma once
#include <Eigen/Core>
#include <string>
#include <vector>

#include "bvselect/explore.hpp"

namespace bvs {

struct SummaryReport {
    std::vector<std::string> names;
    std::vector<double> inclusion;
    ModelId hpm;                    ///< best-ranked retained model
    ModelId mpm;                    ///< candidates with inclusion > 0.5
    std::vector<double> dimension;  ///< entry k is Pr(model has p0 + k covariates)
    std::size_t p0 = 0;
};

SummaryReport summarize(const ExploreResult& r);

/// Warnings about undefined entries are appended to `warnings` when it is non-null.
using Warnings = std::vector<std::string>;

/// Pr(x_i ∧ x_j | y); the diagonal holds the inclusion probabilities.
Eigen::MatrixXd joint_matrix(const ExploreResult& r);
/// Entry (i,j) = Pr(x_j | x_i, y); row i is the conditioning variable. NaN where incl(i) = 0.
Eigen::MatrixXd conditional_matrix(const ExploreResult& r, Warnings* warnings = nullptr);
/// Entry (i,j) = Pr(x_j | not x_i, y); zero diagonal. NaN where incl(i) = 1.
Eigen::MatrixXd not_matrix(const ExploreResult& r, Warnings* warnings = nullptr);

struct Jointness {
    double joint;        ///< Pr(i ∧ j)
    double vs_either;    ///< joint / Pr(i ∨ j)
    double vs_one_alone; ///< joint / [Pr(i only) + Pr(j only)]
};
Jointness jointness(const ExploreResult& r, std::size_t i, std::size_t j, Warnings* warnings = nullptr);

/// Posterior of the model dimension over p0 .. p0 + p.
std::vector<double> dimension_posterior(const ExploreResult& r);

/// Index of a candidate by name; throws UsageError when absent.
std::size_t candidate_index(const ExploreResult& r, const std::string& name);

}  // namespace bvs
