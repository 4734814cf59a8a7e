#include "bvselect/bma.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bvselect/design.hpp"
#include "bvselect/error.hpp"

namespace bvs {

std::size_t BmaSamples::column(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UsageError("no column named '" + name + "' in the samples");
    return static_cast<std::size_t>(it - names.begin());
}

namespace {

struct MixtureComponent {
    ModelFit fit;
    std::vector<Eigen::Index> columns;  // positions in the (p0 + p) output row
};

struct Mixture {
    std::vector<MixtureComponent> components;
    std::vector<double> cumulative;  // normalized cumulative weights
};

Mixture build_mixture(const ExploreResult& r, BmaProvenance& prov) {
    if (!r.stats) throw UsageError("result carries no design context; reload it with its data");
    std::vector<std::pair<ModelId, double>> weighted;
    if (r.method == Method::Exact) {
        double acc = 0.0;
        for (const auto& e : r.top) {
            const double w = r.posterior(e);
            weighted.emplace_back(e.model, w);
            acc += w;
        }
        prov.accumulated_probability = acc;
        prov.weighting = "retained";
    } else {
        for (const auto& v : r.visits) weighted.emplace_back(v.model, static_cast<double>(v.count));
        prov.accumulated_probability = 1.0;
        prov.weighting = "visit-frequency";
    }

    Mixture mix;
    double total = 0.0;
    std::vector<double> weights;
    for (const auto& [m, w] : weighted) {
        ModelFit f;
        try {
            f = fit(m, *r.stats);
        } catch (const Error& e) {
            prov.warnings.push_back("model " + m.to_bitstring(r.p()) + " excluded: " + e.what());
            continue;
        }
        if (f.df < 1) {
            prov.warnings.push_back("model " + m.to_bitstring(r.p()) + " excluded: no residual degrees of freedom");
            continue;
        }
        MixtureComponent c{std::move(f), {}};
        for (std::size_t i = 0; i < r.p0(); ++i) c.columns.push_back(static_cast<Eigen::Index>(i));
        for (auto i : m.indices()) c.columns.push_back(static_cast<Eigen::Index>(r.p0() + i));
        mix.components.push_back(std::move(c));
        weights.push_back(w);
        total += w;
    }
    if (mix.components.empty() || !(total > 0.0)) throw Error("no usable model to average over");
    double run = 0.0;
    for (double w : weights) mix.cumulative.push_back(run += w / total);
    mix.cumulative.back() = 1.0;
    prov.models_used = mix.components.size();
    return mix;
}

template <class Rng>
std::size_t pick(const Mixture& mix, Rng& rng) {
    const double u = uniform01(rng);
    auto it = std::upper_bound(mix.cumulative.begin(), mix.cumulative.end(), u);
    return std::min(static_cast<std::size_t>(it - mix.cumulative.begin()), mix.cumulative.size() - 1);
}

}  // namespace

BmaSamples sample_coeffs(const ExploreResult& r, std::size_t n_sim, std::uint64_t seed) {
    BmaSamples s;
    s.names = r.names0;
    s.names.insert(s.names.end(), r.names.begin(), r.names.end());
    s.provenance.n_sim = n_sim;
    s.provenance.seed = seed;
    const Mixture mix = build_mixture(r, s.provenance);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    s.draws = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_sim), static_cast<Eigen::Index>(s.names.size()));
    for (std::size_t d = 0; d < n_sim; ++d) {
        const auto& c = mix.components[pick(mix, rng)];
        const auto k = static_cast<Eigen::Index>(c.columns.size());
        if (k == 0) continue;
        const double df = c.fit.df;
        Eigen::VectorXd z(k);
        for (Eigen::Index i = 0; i < k; ++i) z(i) = normal(rng);
        std::chi_squared_distribution<double> chi(df);
        const double t_scale = std::sqrt(c.fit.sse / df) * std::sqrt(df / chi(rng));
        const Eigen::VectorXd beta = c.fit.coef + t_scale * (c.fit.gram_inv_chol * z);
        for (Eigen::Index i = 0; i < k; ++i) s.draws(static_cast<Eigen::Index>(d), c.columns[static_cast<std::size_t>(i)]) = beta(i);
    }
    return s;
}

std::vector<PredictionPoint> prediction_points(const Dataset& newdata, const Formula& full, const ExploreResult& r) {
    std::vector<std::string> all = r.names0;
    all.insert(all.end(), r.names.begin(), r.names.end());
    std::vector<Eigen::VectorXd> cols;
    const auto rows = static_cast<Eigen::Index>(newdata.rows());
    for (const auto& name : all) {
        if (name == kInterceptName) {
            cols.push_back(Eigen::VectorXd::Ones(rows));
            continue;
        }
        const Term* term = nullptr;
        for (const auto& t : full.terms)
            if (t.name() == name) term = &t;
        if (!term) throw DataError("formula has no term '" + name + "'");
        cols.push_back(term_column(newdata, *term));
    }
    std::vector<PredictionPoint> points(newdata.rows());
    for (Eigen::Index i = 0; i < rows; ++i) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(all.size()));
        for (std::size_t j = 0; j < all.size(); ++j) x(static_cast<Eigen::Index>(j)) = cols[j](i);
        if (!x.allFinite()) throw DataError("prediction point " + std::to_string(i + 1) + " has non-finite values");
        points[static_cast<std::size_t>(i)].x = std::move(x);
    }
    return points;
}

double predictive_leverage(const Eigen::VectorXd& x, const Eigen::MatrixXd& gram_inv) {
    return x.dot(gram_inv * x);
}

Eigen::MatrixXd sample_predictive(const ExploreResult& r, const std::vector<PredictionPoint>& points,
                                  std::size_t n_sim, std::uint64_t seed, BmaProvenance* provenance) {
    BmaProvenance prov;
    prov.n_sim = n_sim;
    prov.seed = seed;
    const Mixture mix = build_mixture(r, prov);
    const auto width = static_cast<Eigen::Index>(r.p0() + r.p());
    for (const auto& pt : points)
        if (pt.x.size() != width)
            throw UsageError("prediction point has " + std::to_string(pt.x.size()) + " values, expected " +
                             std::to_string(width));

    // Per component and point: location and Student scale.
    struct Pred {
        double location, scale;
    };
    std::vector<std::vector<Pred>> table(mix.components.size());
    for (std::size_t c = 0; c < mix.components.size(); ++c) {
        const auto& comp = mix.components[c];
        for (const auto& pt : points) {
            Eigen::VectorXd xg(static_cast<Eigen::Index>(comp.columns.size()));
            for (std::size_t i = 0; i < comp.columns.size(); ++i) xg(static_cast<Eigen::Index>(i)) = pt.x(comp.columns[i]);
            const double s2 = comp.fit.sse / comp.fit.df;
            if (xg.size() == 0) {
                table[c].push_back({0.0, std::sqrt(s2)});
                continue;
            }
            const double q = predictive_leverage(xg, comp.fit.gram_inv);
            table[c].push_back({xg.dot(comp.fit.coef), std::sqrt(s2 * (1.0 + q))});
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n_sim), static_cast<Eigen::Index>(points.size()));
    for (std::size_t d = 0; d < n_sim; ++d) {
        const std::size_t c = pick(mix, rng);
        const double df = mix.components[c].fit.df;
        std::chi_squared_distribution<double> chi(df);
        for (std::size_t j = 0; j < points.size(); ++j) {
            const double t = normal(rng) * std::sqrt(df / chi(rng));
            out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j)) = table[c][j].location + table[c][j].scale * t;
        }
    }
    if (provenance) *provenance = std::move(prov);
    return out;
}

HistData hist_data(const BmaSamples& s, const std::string& covariate, std::size_t n_breaks) {
    if (n_breaks < 1) throw UsageError("the number of breaks must be positive");
    const auto col = s.draws.col(static_cast<Eigen::Index>(s.column(covariate)));
    HistData h;
    h.counts.assign(n_breaks, 0);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        if (col(i) == 0.0) {
            ++h.zero_count;
            continue;
        }
        lo = std::min(lo, col(i));
        hi = std::max(hi, col(i));
    }
    if (h.zero_count == static_cast<std::size_t>(col.size())) {
        h.edges.assign(n_breaks + 1, 0.0);
        return h;
    }
    if (lo == hi) lo -= 0.5, hi += 0.5;
    const double width = (hi - lo) / static_cast<double>(n_breaks);
    for (std::size_t k = 0; k <= n_breaks; ++k) h.edges.push_back(lo + width * static_cast<double>(k));
    h.edges.back() = hi;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        if (col(i) == 0.0) continue;
        auto k = static_cast<std::size_t>((col(i) - lo) / width);
        ++h.counts[std::min(k, n_breaks - 1)];
    }
    return h;
}

double tail_probability(const BmaSamples& s, const std::string& covariate, double threshold) {
    const auto col = s.draws.col(static_cast<Eigen::Index>(s.column(covariate)));
    if (col.size() == 0) throw UsageError("no draws");
    return static_cast<double>((col.array() > threshold).count()) / static_cast<double>(col.size());
}

}  // namespace bvs
