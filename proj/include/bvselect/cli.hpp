#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "bvselect/btest.hpp"
#include "bvselect/explore.hpp"
#include "bvselect/summaries.hpp"

namespace bvs::cli {

/// Exit codes: 0 success, 1 computation or input failure, 2 usage error.
int run(int argc, char** argv);
/// `args` includes the program name; all output goes to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string format_top_models(const ExploreResult& r);
std::string format_summary(const SummaryReport& s);
std::string format_btest(const BtestResult& b);
std::string format_jointness(const std::string& a, const std::string& b, const Jointness& j);
/// Square matrix as CSV with a header row and a leading label column.
std::string matrix_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& m);

}  // namespace bvs::cli
