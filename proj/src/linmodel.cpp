#include "bvselect/linmodel.hpp"

#include <algorithm>
#include <cmath>

#include "bvselect/error.hpp"

namespace bvs {

namespace {

constexpr double kPivotTolerance = 1e-10;

// Cholesky of the selected Gram block after equilibrating it to unit diagonal, so the pivot test
// is relative and independent of column scale.
struct ScaledCholesky {
    Eigen::MatrixXd L;      // factor of D⁻¹ G D⁻¹
    Eigen::VectorXd scale;  // D = sqrt(diag G)
};

ScaledCholesky factor(const SuffStats& s, const std::vector<Eigen::Index>& cols) {
    const auto k = static_cast<Eigen::Index>(cols.size());
    ScaledCholesky f{Eigen::MatrixXd::Zero(k, k), Eigen::VectorXd(k)};
    for (Eigen::Index i = 0; i < k; ++i) {
        double d = s.G(cols[i], cols[i]);
        if (!(d > 0.0)) throw SingularModel("zero column in model");
        f.scale(i) = std::sqrt(d);
    }
    for (Eigen::Index j = 0; j < k; ++j) {
        double diag = 1.0;
        for (Eigen::Index m = 0; m < j; ++m) diag -= f.L(j, m) * f.L(j, m);
        if (diag <= kPivotTolerance) throw SingularModel("collinear columns (relative pivot " + std::to_string(diag) + ")");
        const double ljj = std::sqrt(diag);
        f.L(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < k; ++i) {
            double v = s.G(cols[i], cols[j]) / (f.scale(i) * f.scale(j));
            for (Eigen::Index m = 0; m < j; ++m) v -= f.L(i, m) * f.L(j, m);
            f.L(i, j) = v / ljj;
        }
    }
    return f;
}

void check_size(ModelId m, const SuffStats& s) {
    if (s.n <= s.p0 + m.size())
        throw InsufficientData("n = " + std::to_string(s.n) + " is not larger than p0 + pγ = " +
                               std::to_string(s.p0 + m.size()));
}

Eigen::VectorXd solve(const ScaledCholesky& f, const SuffStats& s, const std::vector<Eigen::Index>& cols) {
    const auto k = static_cast<Eigen::Index>(cols.size());
    Eigen::VectorXd rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) rhs(i) = s.c(cols[i]) / f.scale(i);
    auto tri = f.L.triangularView<Eigen::Lower>();
    Eigen::VectorXd z = tri.solve(rhs);
    f.L.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
    return z.cwiseQuotient(f.scale);
}

}  // namespace

std::vector<Eigen::Index> SuffStats::columns(ModelId m) const {
    std::vector<Eigen::Index> cols;
    cols.reserve(p0 + m.size());
    for (std::size_t i = 0; i < p0; ++i) cols.push_back(static_cast<Eigen::Index>(i));
    for (auto i : m.indices()) cols.push_back(static_cast<Eigen::Index>(p0 + i));
    return cols;
}

SuffStats precompute(const DesignSplit& d) {
    SuffStats s;
    s.n = d.n();
    s.p0 = d.p0();
    s.p = d.p();
    Eigen::MatrixXd Z(static_cast<Eigen::Index>(s.n), static_cast<Eigen::Index>(s.p0 + s.p));
    Z << d.X0, d.X;
    s.G = Z.transpose() * Z;
    s.c = Z.transpose() * d.y;
    s.yty = d.y.squaredNorm();
    s.sse0 = s.p0 == 0 ? s.yty : 0.0;
    if (s.p0 > 0) {
        try {
            s.sse0 = model_sse(ModelId{}, s);
        } catch (const InsufficientData&) {
            s.sse0 = 0.0;
        }
    }
    return s;
}

double model_sse(ModelId m, const SuffStats& s) {
    check_size(m, s);
    const auto cols = s.columns(m);
    if (cols.empty()) return s.yty;
    const auto f = factor(s, cols);
    const Eigen::VectorXd coef = solve(f, s, cols);
    double fitted = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) fitted += s.c(cols[i]) * coef(static_cast<Eigen::Index>(i));
    return std::max(0.0, s.yty - fitted);
}

ModelFit fit(ModelId m, const SuffStats& s) {
    check_size(m, s);
    ModelFit out;
    out.model = m;
    out.df = static_cast<int>(s.n - s.p0 - m.size());
    const auto cols = s.columns(m);
    const auto k = static_cast<Eigen::Index>(cols.size());
    if (k == 0) {
        out.sse = s.yty;
        return out;
    }
    const auto f = factor(s, cols);
    out.coef = solve(f, s, cols);
    double fitted = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) fitted += s.c(cols[static_cast<std::size_t>(i)]) * out.coef(i);
    out.sse = std::max(0.0, s.yty - fitted);

    // (ZᵀZ)⁻¹ = D⁻¹ (L Lᵀ)⁻¹ D⁻¹
    Eigen::MatrixXd Linv = f.L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd scaled_inv = Linv.transpose() * Linv;
    const Eigen::VectorXd dinv = f.scale.cwiseInverse();
    out.gram_inv = dinv.asDiagonal() * scaled_inv * dinv.asDiagonal();
    out.gram_inv = 0.5 * (out.gram_inv + out.gram_inv.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(out.gram_inv);
    if (llt.info() != Eigen::Success) throw SingularModel("inverse Gram matrix is not positive definite");
    out.gram_inv_chol = llt.matrixL();
    return out;
}

double q_ratio(ModelId m, const SuffStats& s) {
    if (!(s.sse0 > 0.0)) throw DataError("degenerate response: the null model fits the data exactly");
    if (m.size() == 0) return 1.0;
    return std::min(1.0, model_sse(m, s) / s.sse0);
}

}  // namespace bvs
