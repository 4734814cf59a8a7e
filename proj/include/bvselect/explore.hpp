#pragma once
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bvselect/design.hpp"
#include "bvselect/gprior.hpp"
#include "bvselect/linmodel.hpp"
#include "bvselect/model_id.hpp"
#include "bvselect/model_prior.hpp"

namespace bvs {

/// A variable-selection problem: sufficient statistics plus both priors.
struct Problem {
    std::shared_ptr<const SuffStats> stats;
    std::vector<std::string> names0;
    std::vector<std::string> names;
    GPriorSpec bfspec;
    ModelPriorSpec mpspec;

    static Problem from_design(const DesignSplit& d, GPrior variant, ModelPriorSpec mp);

    std::size_t p() const { return names.size(); }
    std::size_t p0() const { return names0.size(); }
    std::size_t n() const { return stats->n; }

    /// log(B_γ0 · Pr(M_γ)), unnormalized. Throws SingularModel / InsufficientData.
    double log_mass(ModelId m) const;
};

struct ModelEntry {
    ModelId model;
    double log_mass;
};

/// True when `a` ranks ahead of `b`: larger mass first, then smaller ModelId.
inline bool ranks_before(const ModelEntry& a, const ModelEntry& b) {
    if (a.log_mass != b.log_mass) return a.log_mass > b.log_mass;
    return a.model < b.model;
}

/// Keeps the `capacity` best-ranked entries offered to it.
class TopSet {
  public:
    explicit TopSet(std::size_t capacity) : capacity_(capacity) {}
    void offer(const ModelEntry& e);
    void merge(const TopSet& other);
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return heap_.size(); }
    /// Entries in ranking order.
    std::vector<ModelEntry> sorted() const;

  private:
    std::size_t capacity_;
    std::vector<ModelEntry> heap_;  // worst-ranked entry at the front
};

/** Posterior-mass sums kept relative to exp(log_scale).
 *
 * joint is p×p with joint(i,i) equal to incl[i]; it is left empty when joint accumulation is
 * disabled.
 */
struct Accumulators {
    double log_scale = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    std::vector<double> incl;
    std::vector<double> dim;  ///< indexed by pγ
    Eigen::MatrixXd joint;

    Accumulators() = default;
    Accumulators(std::size_t p, bool with_joint);

    void add(ModelId m, double log_mass);
    void merge(const Accumulators& other);
    bool has_joint() const { return joint.size() > 0; }
    double log_total() const { return total > 0.0 ? log_scale + std::log(total) : -std::numeric_limits<double>::infinity(); }

    std::vector<double> inclusion() const;
    Eigen::MatrixXd joint_probabilities() const;
    std::vector<double> dimension() const;

  private:
    void rescale(double new_log_scale);
};

struct VisitCount {
    ModelId model;
    std::uint64_t count;
};

enum class Method { Exact, Gibbs };

struct ExploreResult {
    Method method = Method::Exact;
    std::size_t n = 0;
    std::vector<std::string> names0, names;
    GPriorSpec bfspec;
    ModelPriorSpec mpspec;

    Accumulators acc;
    std::size_t n_keep = 10;
    std::vector<ModelEntry> top;  ///< ranking order; gibbs masses are visit counts

    std::uint64_t skipped_models = 0;  ///< singular or too large for n, given mass 0

    // gibbs only
    std::vector<VisitCount> visits;  ///< descending count, ties by ModelId
    std::uint64_t retained = 0;
    std::uint64_t seed = 0;
    std::size_t burnin = 0, iterations = 0, thin = 1;
    std::string init;

    std::shared_ptr<const SuffStats> stats;  ///< context for model averaging; may be null

    std::size_t p() const { return names.size(); }
    std::size_t p0() const { return names0.size(); }
    double posterior(const ModelEntry& e) const { return std::exp(e.log_mass - acc.log_total()); }
};

struct EnumerateOptions {
    std::size_t n_keep = 10;
    bool joint = true;
    std::size_t max_p = 25;
    bool force = false;
};

ExploreResult enumerate(const Problem& prob, const EnumerateOptions& opts = {});

/// Splits the space on the top ceil(log2(workers)) bits of γ and merges the strata in order.
ExploreResult enumerate_parallel(const Problem& prob, const EnumerateOptions& opts, std::size_t workers);

struct GibbsOptions {
    enum class Init { Null, Full, Random, Explicit };
    Init init = Init::Full;
    ModelId explicit_model;
    std::size_t burnin = 50;
    std::size_t iterations = 10000;
    std::size_t thin = 1;
    std::uint64_t seed = 0;
    std::size_t n_keep = 10;
    bool joint = true;
};

/// Systematic-scan Gibbs sampler over γ; summaries are visit frequencies of retained draws.
ExploreResult gibbs(const Problem& prob, const GibbsOptions& opts);

/// Uniform double in [0, 1) built from the top 53 bits of a 64-bit draw.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace bvs
