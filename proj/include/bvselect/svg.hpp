#pragma once
#include <Eigen/Core>
#include <string>
#include <vector>

#include "bvselect/bma.hpp"

namespace bvs::svg {

/// Horizontal bars, one per label; values are expected in [0, max].
std::string bar_chart(const std::vector<std::string>& labels, const std::vector<double>& values,
                      const std::string& title, double max = 1.0);

/// Grey-scale heatmap of a matrix with entries in [0, 1]; NaN cells are hatched.
std::string heatmap(const std::vector<std::string>& labels, const Eigen::MatrixXd& m, const std::string& title);

/// Histogram bars plus a separate bar for the point mass at zero.
std::string histogram(const HistData& h, const std::string& title);

}  // namespace bvs::svg
