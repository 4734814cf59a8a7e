#pragma once
#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <vector>

#include "bvselect/design.hpp"
#include "bvselect/model_id.hpp"

namespace bvs {

/// Gram quantities of Z = [X0 | X]; per-model work is then independent of n.
struct SuffStats {
    Eigen::MatrixXd G;  ///< ZᵀZ
    Eigen::VectorXd c;  ///< Zᵀy
    double yty = 0.0;
    std::size_t n = 0;
    std::size_t p0 = 0;
    std::size_t p = 0;
    double sse0 = 0.0;  ///< SSE of the X0-only model (yᵀy when p0 = 0)

    /// Column indices into G for a model: all fixed columns then the selected candidates.
    std::vector<Eigen::Index> columns(ModelId m) const;
};

struct ModelFit {
    ModelId model;
    Eigen::VectorXd coef;     ///< (α̂, β̂_γ)
    double sse = 0.0;
    int df = 0;               ///< n − p0 − pγ
    Eigen::MatrixXd gram_inv; ///< (Z_γᵀZ_γ)⁻¹
    Eigen::MatrixXd gram_inv_chol; ///< lower factor L with L·Lᵀ = gram_inv
};

SuffStats precompute(const DesignSplit& design);

/// Least-squares SSE of a model. Throws SingularModel or InsufficientData.
double model_sse(ModelId m, const SuffStats& stats);

/// Full fit including the inverse Gram matrix. Throws SingularModel or InsufficientData.
ModelFit fit(ModelId m, const SuffStats& stats);

/// Q_γ = SSE_γ / SSE_0, in (0, 1]; Q of the null model is exactly 1.
double q_ratio(ModelId m, const SuffStats& stats);

}  // namespace bvs
