#pragma once
#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "bvselect/dataset.hpp"
#include "bvselect/formula.hpp"

namespace bvs {

inline constexpr const char* kInterceptName = "Intercept";

/** Response plus the fixed (X0, n×p0) and candidate (X, n×p) covariate matrices.
 *
 * X0 holds the intercept (when fixed) followed by fixed covariates in formula order; X holds the
 * remaining terms in formula order. Derived I(...) terms are materialized as column sums.
 */
struct DesignSplit {
    Eigen::VectorXd y;
    Eigen::MatrixXd X0;
    Eigen::MatrixXd X;
    std::vector<std::string> names0;
    std::vector<std::string> names;
    std::string response;

    std::size_t n() const { return static_cast<std::size_t>(y.size()); }
    std::size_t p0() const { return names0.size(); }
    std::size_t p() const { return names.size(); }
};

/** Splits `full` into fixed and candidate covariates.
 *
 * `fixed_names` entries are "Intercept" or term names of `full`; std::nullopt means X0 is empty
 * (the intercept then competes as a candidate). Constant candidate columns are rejected.
 */
DesignSplit build_design(const Dataset& ds, const Formula& full,
                         const std::optional<std::vector<std::string>>& fixed_names =
                             std::vector<std::string>{kInterceptName});

/// Materializes one term as a column.
Eigen::VectorXd term_column(const Dataset& ds, const Term& t);

}  // namespace bvs
