#include "bvselect/design.hpp"

#include <algorithm>
#include <set>

#include "bvselect/error.hpp"

namespace bvs {

Eigen::VectorXd term_column(const Dataset& ds, const Term& t) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ds.rows()));
    for (const auto& c : t.columns) col += ds.column(c);
    return col;
}

namespace {

Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& cols, Eigen::Index n) {
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = cols[j];
    return m;
}

}  // namespace

DesignSplit build_design(const Dataset& ds, const Formula& full,
                         const std::optional<std::vector<std::string>>& fixed_names) {
    const Formula f = bind(full, ds);
    const auto n = static_cast<Eigen::Index>(ds.rows());

    std::set<std::string> fixed;
    if (fixed_names) {
        for (const auto& name : *fixed_names) {
            bool known = name == kInterceptName ||
                         std::any_of(f.terms.begin(), f.terms.end(), [&](const Term& t) { return t.name() == name; });
            if (!known) throw DataError("fixed covariate '" + name + "' is not a term of the formula");
            if (!fixed.insert(name).second) throw DataError("fixed covariate '" + name + "' listed twice");
        }
    }

    DesignSplit d;
    d.response = f.response;
    d.y = ds.column(f.response);
    std::vector<Eigen::VectorXd> cols0, cols;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    if (fixed.count(kInterceptName)) {
        cols0.push_back(ones);
        d.names0.emplace_back(kInterceptName);
    } else if (f.intercept) {
        cols.push_back(ones);
        d.names.emplace_back(kInterceptName);
    }
    for (const auto& t : f.terms) {
        if (t.name() == kInterceptName) throw DataError("a data column may not be named 'Intercept'");
        Eigen::VectorXd col = term_column(ds, t);
        if (fixed.count(t.name())) {
            cols0.push_back(std::move(col));
            d.names0.push_back(t.name());
        } else {
            if (n < 2 || (col.array() - col.mean()).square().sum() == 0.0)
                throw DataError("candidate covariate '" + t.name() + "' is constant");
            cols.push_back(std::move(col));
            d.names.push_back(t.name());
        }
    }
    d.X0 = stack(cols0, n);
    d.X = stack(cols, n);
    return d;
}

}  // namespace bvs
