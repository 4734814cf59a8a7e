#include "bvselect/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "bvselect/error.hpp"

namespace bvs {

namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are shared with Gauss-7.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double k = 0.0, g = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
        double fx = f(mid + half * kNodes[i]);
        if (i + 1 < kNodes.size()) fx += f(mid - half * kNodes[i]);
        k += kKronrod[i] * fx;
        if (i % 2 == 1) g += kGauss[i / 2] * fx;
    }
    k *= half;
    g *= half;
    return {a, b, k, std::abs(k - g)};
}

double safe_log(const std::function<double(double)>& log_f, double x) {
    double v = log_f(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

// Coarse search for the location of the integrand's maximum, refined by golden section.
double locate_peak(const std::function<double(double)>& log_f, double a, double b, double& peak_value) {
    std::vector<double> xs;
    const int uniform = 64;
    for (int i = 0; i <= uniform; ++i) xs.push_back(a + (b - a) * (i + 0.5) / (uniform + 1));
    for (int k = 1; k <= 60; ++k) {
        double w = (b - a) * std::ldexp(1.0, -k);
        xs.push_back(a + w);
        xs.push_back(b - w);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        vals[i] = safe_log(log_f, xs[i]);
        if (vals[i] > best_v) best_v = vals[i], best = i;
    }
    double lo = best > 0 ? xs[best - 1] : a;
    double hi = best + 1 < xs.size() ? xs[best + 1] : b;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = safe_log(log_f, x1), f2 = safe_log(log_f, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * (std::abs(lo) + std::abs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2, f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = safe_log(log_f, x2);
        } else {
            hi = x2;
            x2 = x1, f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = safe_log(log_f, x1);
        }
    }
    double x = f1 > f2 ? x1 : x2;
    double v = std::max(f1, f2);
    if (v < best_v) x = xs[best], v = best_v;
    peak_value = v;
    return x;
}

}  // namespace

LogIntegral integrate_log(const std::function<double(double)>& log_f, double a, double b,
                          const QuadratureOptions& opts, std::span<const double> breaks) {
    if (!(b > a)) return {-std::numeric_limits<double>::infinity(), 0.0, 0};
    double shift = 0.0;
    const double peak = locate_peak(log_f, a, b, shift);
    if (!std::isfinite(shift)) {
        if (shift > 0) throw QuadratureError("integrand is infinite", std::numeric_limits<double>::infinity());
        return {-std::numeric_limits<double>::infinity(), 0.0, 0};
    }
    auto f = [&](double x) {
        double v = log_f(x) - shift;
        return std::isnan(v) ? 0.0 : std::exp(v);
    };

    std::vector<double> cuts = {a, b};
    if (peak > a && peak < b) cuts.push_back(peak);
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Segment> queue;
    double total = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = gk15(f, cuts[i], cuts[i + 1]);
        total += s.value;
        error += s.error;
        queue.push(s);
    }
    int intervals = static_cast<int>(queue.size());
    while (error > opts.rel_tol * std::abs(total)) {
        if (intervals >= opts.max_intervals)
            throw QuadratureError("adaptive quadrature did not converge", error / std::abs(total));
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval can no longer be split in floating point; accept its estimate.
            worst.error = 0.0;
            queue.push(worst);
            error = 0.0;
            total = 0.0;
            std::priority_queue<Segment> copy = queue;
            while (!copy.empty()) {
                total += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
            continue;
        }
        Segment left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }
    if (!(total > 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0, intervals};
    return {shift + std::log(total), error / total, intervals};
}

}  // namespace bvs
