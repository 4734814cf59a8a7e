#include "bvselect/btest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bvselect/design.hpp"
#include "bvselect/error.hpp"
#include "bvselect/linmodel.hpp"

namespace bvs {

namespace {

struct Fitted {
    std::string name;
    Formula formula;
    std::set<std::string> terms;  // canonical names
    std::size_t dim = 0;          // parameters including the intercept
    double sse = 0.0;
};

std::vector<Fitted> fit_all(const HypothesisSet& hs, const Dataset& ds) {
    if (hs.models.size() < 2) throw UsageError("at least two hypotheses are required");
    std::vector<Fitted> out;
    std::set<std::string> seen;
    for (const auto& [name, f] : hs.models) {
        if (!seen.insert(name).second) throw UsageError("hypothesis name '" + name + "' used twice");
        Fitted h;
        h.name = name;
        try {
            h.formula = bind(f, ds);
            if (h.formula.response != hs.models.front().second.response)
                throw UsageError("all hypotheses must share the response '" + hs.models.front().second.response + "'");
            for (const auto& t : h.formula.terms) h.terms.insert(t.canonical());
            std::vector<std::string> fixed{kInterceptName};
            for (const auto& t : h.formula.terms) fixed.push_back(t.name());
            DesignSplit d = build_design(ds, h.formula, fixed);
            SuffStats s = precompute(d);
            h.dim = d.p0();
            h.sse = model_sse(ModelId{}, s);
        } catch (const Error& e) {
            throw Error("hypothesis '" + name + "': " + e.what());
        }
        out.push_back(std::move(h));
    }
    return out;
}

std::size_t null_index(const std::vector<Fitted>& hs, bool relax) {
    if (!relax) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            bool nested = true;
            for (std::size_t j = 0; j < hs.size() && nested; ++j)
                if (i != j)
                    nested = std::includes(hs[j].terms.begin(), hs[j].terms.end(), hs[i].terms.begin(), hs[i].terms.end());
            if (nested) candidates.push_back(i);
        }
        if (candidates.empty())
            throw Error("no hypothesis is nested in all the others by variable names; "
                        "if a null model exists through linear restrictions, enable relax-nest");
        if (candidates.size() > 1)
            throw Error("hypotheses '" + hs[candidates[0]].name + "' and '" + hs[candidates[1]].name +
                        "' use the same variables");
        return candidates.front();
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < hs.size(); ++i)
        if (hs[i].sse > hs[best].sse) best = i;
    for (std::size_t j = 0; j < hs.size(); ++j)
        if (j != best && hs[j].dim <= hs[best].dim)
            throw Error("the hypothesis with the largest SSE ('" + hs[best].name +
                        "') is not of smaller dimension than all the others, so no null model exists");
    return best;
}

}  // namespace

std::string detect_null(const HypothesisSet& hs, const Dataset& ds) {
    const auto fitted = fit_all(hs, ds);
    return fitted[null_index(fitted, hs.relax_nest)].name;
}

BtestResult btest(const HypothesisSet& hs, const Dataset& ds, GPrior variant) {
    const auto fitted = fit_all(hs, ds);
    const std::size_t null = null_index(fitted, hs.relax_nest);
    const Fitted& h0 = fitted[null];
    const std::size_t n = ds.rows();
    if (!(h0.sse > 0.0)) throw DataError("degenerate response: the null hypothesis fits the data exactly");

    std::size_t max_extra = 0;
    for (const auto& h : fitted) max_extra = std::max(max_extra, h.dim - std::min(h.dim, h0.dim));
    const GPriorSpec spec = make_gprior(variant, n, max_extra);

    BtestResult r;
    r.null_name = h0.name;
    std::vector<double> log_bf_values;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const Fitted& h = fitted[i];
        r.names.push_back(h.name);
        if (i == null) {
            log_bf_values.push_back(0.0);
            continue;
        }
        BFInput in{n, h0.dim, h.dim - h0.dim, h.sse / h0.sse};
        try {
            log_bf_values.push_back(log_bf(spec, in));
        } catch (const Error& e) {
            throw Error("hypothesis '" + h.name + "': " + e.what());
        }
    }
    for (double l : log_bf_values) r.bayes_factors.push_back(std::exp(l));

    double prior_total = 0.0;
    for (const auto& h : fitted) {
        double w = 1.0;
        if (!hs.prior.empty()) {
            auto it = hs.prior.find(h.name);
            if (it == hs.prior.end()) throw UsageError("no prior probability given for hypothesis '" + h.name + "'");
            if (!(it->second > 0.0)) throw UsageError("prior probability of '" + h.name + "' must be positive");
            w = it->second;
        }
        r.prior.push_back(w);
        prior_total += w;
    }
    for (const auto& [name, w] : hs.prior)
        if (std::none_of(fitted.begin(), fitted.end(), [&](const Fitted& h) { return h.name == name; }))
            throw UsageError("prior given for unknown hypothesis '" + name + "'");
    for (double& w : r.prior) w /= prior_total;

    // posterior ∝ BF·prior, in log space
    std::vector<double> lp(fitted.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fitted.size(); ++i) mx = std::max(mx, lp[i] = log_bf_values[i] + std::log(r.prior[i]));
    double total = 0.0;
    for (double& v : lp) total += (v = std::exp(v - mx));
    for (double v : lp) r.posterior.push_back(v / total);
    return r;
}

}  // namespace bvs
