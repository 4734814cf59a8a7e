#pragma once
#include <functional>
#include <span>

namespace bvs {

struct LogIntegral {
    double log_value;       ///< log ∫ f
    double relative_error;  ///< estimated |error| / ∫ f
    int intervals;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

/** Adaptive Gauss–Kronrod (7/15) integration of exp(log_f) over [a, b].
 *
 * The integrand is rescaled by its maximum before exponentiation, so integrals whose magnitude
 * is far outside double range are still represented. The interval is pre-split at the located
 * maximum and at any extra `breaks`. Throws QuadratureError when the tolerance is not met.
 */
LogIntegral integrate_log(const std::function<double(double)>& log_f, double a, double b,
                          const QuadratureOptions& opts = {}, std::span<const double> breaks = {});

}  // namespace bvs
