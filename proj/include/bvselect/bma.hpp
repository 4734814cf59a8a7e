#pragma once
#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "bvselect/dataset.hpp"
#include "bvselect/explore.hpp"
#include "bvselect/formula.hpp"

namespace bvs {

struct BmaProvenance {
    std::size_t n_sim = 0;
    std::uint64_t seed = 0;
    std::size_t models_used = 0;
    double accumulated_probability = 1.0;  ///< share of posterior mass carried by the models used (exact only)
    std::string weighting;                 ///< "retained" or "visit-frequency"
    std::string source;
    std::vector<std::string> warnings;
};

/// Draws from a model-averaged mixture: n.sim rows, fixed columns first, then candidates.
struct BmaSamples {
    std::vector<std::string> names;
    Eigen::MatrixXd draws;
    BmaProvenance provenance;

    std::size_t column(const std::string& name) const;
};

/// Draws (α, β) from the mixture of per-model multivariate Student posteriors.
BmaSamples sample_coeffs(const ExploreResult& r, std::size_t n_sim, std::uint64_t seed);

/// Covariate values x* in design order (fixed columns then candidates).
struct PredictionPoint {
    Eigen::VectorXd x;
};

/// One point per row of `newdata`; terms are evaluated from `full` and "Intercept" is set to 1.
std::vector<PredictionPoint> prediction_points(const Dataset& newdata, const Formula& full, const ExploreResult& r);

/// n.sim × |points| draws from the model-averaged predictive distribution.
Eigen::MatrixXd sample_predictive(const ExploreResult& r, const std::vector<PredictionPoint>& points,
                                  std::size_t n_sim, std::uint64_t seed, BmaProvenance* provenance = nullptr);

/// x (ZᵀZ)⁻¹ xᵀ; the predictive scale factor is 1 + this value, i.e. 1/h.
double predictive_leverage(const Eigen::VectorXd& x, const Eigen::MatrixXd& gram_inv);

struct HistData {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::size_t zero_count = 0;
};

/// Equal-width bins over the nonzero draws; exact zeros are counted separately.
HistData hist_data(const BmaSamples& s, const std::string& covariate, std::size_t n_breaks = 100);

/// Fraction of draws strictly above `threshold`.
double tail_probability(const BmaSamples& s, const std::string& covariate, double threshold);

}  // namespace bvs
