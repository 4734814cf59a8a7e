#include "bvselect/explore.hpp"

#include <algorithm>
#include <random>
#include <thread>
#include <unordered_map>

#include "bvselect/error.hpp"

namespace bvs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Accumulated values may grow to exp(kRescaleSlack) times the scale before rescaling.
constexpr double kRescaleSlack = 40.0;
}  // namespace

Problem Problem::from_design(const DesignSplit& d, GPrior variant, ModelPriorSpec mp) {
    Problem prob;
    prob.stats = std::make_shared<const SuffStats>(precompute(d));
    prob.names0 = d.names0;
    prob.names = d.names;
    prob.bfspec = make_gprior(variant, d.n(), d.p());
    prob.mpspec = std::move(mp);
    return prob;
}

double Problem::log_mass(ModelId m) const {
    const double lp = log_prior_weight(mpspec, m.size(), p());
    if (lp == kNegInf) return kNegInf;
    BFInput in{stats->n, stats->p0, m.size(), q_ratio(m, *stats)};
    return log_bf(bfspec, in) + lp;
}

// ---- TopSet ----

namespace {
// Heap comparator placing the worst-ranked entry at the front.
bool heap_less(const ModelEntry& a, const ModelEntry& b) { return ranks_before(a, b); }
}  // namespace

void TopSet::offer(const ModelEntry& e) {
    if (capacity_ == 0) return;
    if (heap_.size() < capacity_) {
        heap_.push_back(e);
        std::push_heap(heap_.begin(), heap_.end(), heap_less);
        return;
    }
    if (!ranks_before(e, heap_.front())) return;
    std::pop_heap(heap_.begin(), heap_.end(), heap_less);
    heap_.back() = e;
    std::push_heap(heap_.begin(), heap_.end(), heap_less);
}

void TopSet::merge(const TopSet& other) {
    for (const auto& e : other.heap_) offer(e);
}

std::vector<ModelEntry> TopSet::sorted() const {
    std::vector<ModelEntry> out = heap_;
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

// ---- Accumulators ----

Accumulators::Accumulators(std::size_t p, bool with_joint) : incl(p, 0.0), dim(p + 1, 0.0) {
    if (with_joint) joint = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
}

void Accumulators::rescale(double new_log_scale) {
    if (log_scale != kNegInf) {
        const double f = std::exp(log_scale - new_log_scale);
        total *= f;
        for (double& v : incl) v *= f;
        for (double& v : dim) v *= f;
        joint *= f;
    }
    log_scale = new_log_scale;
}

void Accumulators::add(ModelId m, double log_mass) {
    if (log_mass == kNegInf) return;
    if (log_scale == kNegInf || log_mass > log_scale + kRescaleSlack) rescale(log_mass);
    const double w = std::exp(log_mass - log_scale);
    total += w;
    dim[m.size()] += w;
    const auto idx = m.indices();
    for (std::size_t a = 0; a < idx.size(); ++a) {
        incl[idx[a]] += w;
        if (!has_joint()) continue;
        const auto i = static_cast<Eigen::Index>(idx[a]);
        joint(i, i) += w;
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const auto j = static_cast<Eigen::Index>(idx[b]);
            joint(i, j) += w;
            joint(j, i) += w;
        }
    }
}

void Accumulators::merge(const Accumulators& o) {
    if (o.log_scale == kNegInf) return;
    if (log_scale == kNegInf) {
        const bool keep_joint = has_joint() && o.has_joint();
        *this = o;
        if (!keep_joint) joint.resize(0, 0);
        return;
    }
    const double target = std::max(log_scale, o.log_scale);
    rescale(target);
    const double f = std::exp(o.log_scale - target);
    total += f * o.total;
    for (std::size_t i = 0; i < incl.size(); ++i) incl[i] += f * o.incl[i];
    for (std::size_t i = 0; i < dim.size(); ++i) dim[i] += f * o.dim[i];
    if (has_joint() && o.has_joint())
        joint += f * o.joint;
    else
        joint.resize(0, 0);
}

std::vector<double> Accumulators::inclusion() const {
    std::vector<double> out(incl.size());
    for (std::size_t i = 0; i < incl.size(); ++i) out[i] = incl[i] / total;
    return out;
}

Eigen::MatrixXd Accumulators::joint_probabilities() const { return joint / total; }

std::vector<double> Accumulators::dimension() const {
    std::vector<double> out(dim.size());
    for (std::size_t i = 0; i < dim.size(); ++i) out[i] = dim[i] / total;
    return out;
}

// ---- enumeration ----

namespace {

struct Partial {
    Accumulators acc;
    TopSet top;
    std::uint64_t skipped = 0;
};

Partial enumerate_range(const Problem& prob, const EnumerateOptions& opts, std::uint64_t lo, std::uint64_t hi) {
    Partial part{Accumulators(prob.p(), opts.joint), TopSet(opts.n_keep), 0};
    for (std::uint64_t bits = lo; bits < hi; ++bits) {
        const ModelId m(bits);
        double lm;
        try {
            lm = prob.log_mass(m);
        } catch (const SingularModel&) {
            ++part.skipped;
            continue;
        } catch (const InsufficientData&) {
            ++part.skipped;
            continue;
        }
        if (lm == kNegInf) continue;
        part.acc.add(m, lm);
        part.top.offer({m, lm});
    }
    return part;
}

void check_exact_size(const Problem& prob, const EnumerateOptions& opts) {
    if (prob.p() > 63) throw UsageError("exact enumeration supports at most 63 candidate covariates");
    if (prob.p() > opts.max_p && !opts.force)
        throw UsageError("exact enumeration of 2^" + std::to_string(prob.p()) + " models exceeds the limit p <= " +
                         std::to_string(opts.max_p) + "; use --force or the Gibbs sampler");
    if (opts.n_keep < 1) throw UsageError("n.keep must be at least 1");
}

ExploreResult assemble(const Problem& prob, const EnumerateOptions& opts, Partial part) {
    ExploreResult r;
    r.method = Method::Exact;
    r.n = prob.n();
    r.names0 = prob.names0;
    r.names = prob.names;
    r.bfspec = prob.bfspec;
    r.mpspec = prob.mpspec;
    r.n_keep = opts.n_keep;
    r.acc = std::move(part.acc);
    r.top = part.top.sorted();
    r.skipped_models = part.skipped;
    r.stats = prob.stats;
    if (!(r.acc.total > 0.0)) throw Error("every model in the space has zero posterior mass");
    return r;
}

}  // namespace

ExploreResult enumerate(const Problem& prob, const EnumerateOptions& opts) {
    check_exact_size(prob, opts);
    return assemble(prob, opts, enumerate_range(prob, opts, 0, std::uint64_t{1} << prob.p()));
}

ExploreResult enumerate_parallel(const Problem& prob, const EnumerateOptions& opts, std::size_t workers) {
    check_exact_size(prob, opts);
    if (workers < 1) throw UsageError("at least one worker is required");
    std::size_t split_bits = 0;
    while ((std::size_t{1} << split_bits) < workers) ++split_bits;
    split_bits = std::min(split_bits, prob.p());
    const std::size_t strata = std::size_t{1} << split_bits;
    const std::size_t low_bits = prob.p() - split_bits;

    std::vector<std::optional<Partial>> parts(strata);
    std::vector<std::exception_ptr> errors(strata);
    auto run_stratum = [&](std::size_t s) {
        try {
            const std::uint64_t lo = std::uint64_t{s} << low_bits;
            parts[s] = enumerate_range(prob, opts, lo, lo + (std::uint64_t{1} << low_bits));
        } catch (...) {
            errors[s] = std::current_exception();
        }
    };
    if (strata == 1) {
        run_stratum(0);
    } else {
        std::vector<std::thread> pool;
        const std::size_t n_threads = std::min(workers, strata);
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t s = t; s < strata; s += n_threads) run_stratum(s);
            });
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    Partial merged = std::move(*parts[0]);
    for (std::size_t s = 1; s < strata; ++s) {
        merged.acc.merge(parts[s]->acc);
        merged.top.merge(parts[s]->top);
        merged.skipped += parts[s]->skipped;
    }
    return assemble(prob, opts, std::move(merged));
}

// ---- Gibbs ----

ExploreResult gibbs(const Problem& prob, const GibbsOptions& opts) {
    const std::size_t p = prob.p();
    if (p < 1) throw UsageError("the Gibbs sampler needs at least one candidate covariate");
    if (p > ModelId::kMaxCandidates)
        throw UsageError("at most " + std::to_string(ModelId::kMaxCandidates) + " candidate covariates are supported");
    if (opts.iterations < 1) throw UsageError("n.iter must be at least 1");
    if (opts.thin < 1) throw UsageError("n.thin must be a positive integer");

    std::mt19937_64 rng(opts.seed);
    ModelId state;
    switch (opts.init) {
        case GibbsOptions::Init::Null: break;
        case GibbsOptions::Init::Full: state = ModelId::full(p); break;
        case GibbsOptions::Init::Explicit:
            if (!opts.explicit_model.fits(p))
                throw UsageError("initial model has bits beyond the number of candidates");
            state = opts.explicit_model;
            break;
        case GibbsOptions::Init::Random:
            for (std::size_t i = 0; i < p; ++i) state = state.with(i, uniform01(rng) < 0.5);
            break;
    }

    std::unordered_map<ModelId, double> cache;
    std::uint64_t skipped = 0;
    auto mass = [&](ModelId m) {
        if (auto it = cache.find(m); it != cache.end()) return it->second;
        double lm;
        try {
            lm = prob.log_mass(m);
        } catch (const SingularModel&) {
            lm = kNegInf, ++skipped;
        } catch (const InsufficientData&) {
            lm = kNegInf, ++skipped;
        }
        if (cache.size() < (std::size_t{1} << 22)) cache.emplace(m, lm);
        return lm;
    };

    Accumulators acc(p, opts.joint);
    std::unordered_map<ModelId, std::uint64_t> visits;
    std::uint64_t retained = 0;
    double current = mass(state);
    const std::size_t total_iters = opts.burnin + opts.iterations;
    for (std::size_t it = 0; it < total_iters; ++it) {
        for (std::size_t i = 0; i < p; ++i) {
            const ModelId with = state.with(i, true), without = state.with(i, false);
            const double l1 = state.test(i) ? current : mass(with);
            const double l0 = state.test(i) ? mass(without) : current;
            double prob_in;
            if (l1 == kNegInf && l0 == kNegInf)
                prob_in = 0.0;
            else
                prob_in = 1.0 / (1.0 + std::exp(l0 - l1));
            const bool on = uniform01(rng) < prob_in;
            state = state.with(i, on);
            current = on ? l1 : l0;
        }
        if (it >= opts.burnin && (it - opts.burnin + 1) % opts.thin == 0) {
            acc.add(state, 0.0);
            ++visits[state];
            ++retained;
        }
    }

    ExploreResult r;
    r.method = Method::Gibbs;
    r.n = prob.n();
    r.names0 = prob.names0;
    r.names = prob.names;
    r.bfspec = prob.bfspec;
    r.mpspec = prob.mpspec;
    r.acc = std::move(acc);
    r.n_keep = opts.n_keep;
    r.skipped_models = skipped;
    r.retained = retained;
    r.seed = opts.seed;
    r.burnin = opts.burnin;
    r.iterations = opts.iterations;
    r.thin = opts.thin;
    switch (opts.init) {
        case GibbsOptions::Init::Null: r.init = "null"; break;
        case GibbsOptions::Init::Full: r.init = "full"; break;
        case GibbsOptions::Init::Random: r.init = "random"; break;
        case GibbsOptions::Init::Explicit: r.init = opts.explicit_model.to_bitstring(p); break;
    }
    r.visits.reserve(visits.size());
    for (const auto& [m, c] : visits) r.visits.push_back({m, c});
    std::sort(r.visits.begin(), r.visits.end(), [](const VisitCount& a, const VisitCount& b) {
        return a.count != b.count ? a.count > b.count : a.model < b.model;
    });
    for (std::size_t k = 0; k < r.visits.size() && k < opts.n_keep; ++k)
        r.top.push_back({r.visits[k].model, std::log(static_cast<double>(r.visits[k].count))});
    r.stats = prob.stats;
    return r;
}

}  // namespace bvs
