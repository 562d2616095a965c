#pragma once

// Statistical checks on exit-time samples.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "woms/errors.hpp"
#include "woms/ou.hpp"
#include "woms/quadrature.hpp"
#include "woms/walk.hpp"

namespace woms {

/// Empirical distribution function, right-continuous.
class Ecdf {
  public:
    explicit Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
        if (sorted_.empty()) {
            throw DomainError("ecdf: empty sample");
        }
        std::sort(sorted_.begin(), sorted_.end());
    }

    /// Fraction of samples <= t.
    double operator()(double t) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    /// Fraction of samples < t.
    double left_limit(double t) const {
        const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), t);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return sorted_; }
    [[nodiscard]] double min() const noexcept { return sorted_.front(); }
    [[nodiscard]] double max() const noexcept { return sorted_.back(); }

  private:
    std::vector<double> sorted_;
};

inline Ecdf ecdf(std::vector<double> samples) { return Ecdf(std::move(samples)); }

inline std::vector<double> exit_times(std::span<const ExitOutcome> outcomes) {
    std::vector<double> out;
    out.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        out.push_back(o.t_eps);
    }
    return out;
}

/// Sup-distance between a distribution function and an ECDF, checked on both
/// sides of every jump of `g`.
template <class Cdf>
    requires std::invocable<const Cdf&, double>
double ks_distance(const Cdf& f, const Ecdf& g) {
    const auto values = g.values();
    const double n = static_cast<double>(values.size());
    double sup = 0.0;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) {
            ++j;
        }
        const double fx = f(values[i]);
        sup = std::max({sup, std::abs(fx - static_cast<double>(i) / n),
                        std::abs(fx - static_cast<double>(j) / n)});
        i = j;
    }
    return sup;
}

/// Exact two-sample KS statistic over the merged jump set.
inline double ks_distance(const Ecdf& f, const Ecdf& g) {
    const auto x = f.values();
    const auto y = g.values();
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < x.size() || j < y.size()) {
        const double z = (j == y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] == z) {
            ++i;
        }
        while (j < y.size() && y[j] == z) {
            ++j;
        }
        sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return sup;
}

/// c_alpha · sqrt((n + m) / (n m)); c_alpha = 1.36 (5%), 1.63 (1%), 1.95 (0.1%).
inline double ks_two_sample_critical(double c_alpha, std::size_t n, std::size_t m) {
    const auto dn = static_cast<double>(n);
    const auto dm = static_cast<double>(m);
    return c_alpha * std::sqrt((dn + dm) / (dn * dm));
}

/*!
 * Error bound of the WOMS exit-time distribution:
 *
 *   Xi = sqrt(theta) (eps + max(|a|,|b|)(e^{theta delta} - 1))
 *        / (sigma sqrt((e^{2 theta delta} - 1) pi)),   delta = eps^gamma_exp.
 *
 * Interval bounds are taken as given (mu-centered problems).
 */
inline double xi_bound(double eps, double gamma_exp, const OUParams& params, double a, double b) {
    if (!(eps > 0.0)) {
        throw DomainError("xi_bound: eps must be positive");
    }
    if (!(gamma_exp > 0.0 && gamma_exp < 2.0)) {
        throw DomainError("xi_bound: gamma_exp must lie in (0, 2)");
    }
    if (!(params.theta > 0.0) || !(params.sigma > 0.0)) {
        throw DomainError("xi_bound: theta and sigma must be positive");
    }
    if (!(a < b)) {
        throw DomainError("xi_bound: a < b required");
    }
    const double theta = params.theta;
    const double delta = std::pow(eps, gamma_exp);
    const double reach = std::max(std::abs(a), std::abs(b));
    return std::sqrt(theta) * (eps + reach * std::expm1(theta * delta)) /
           (params.sigma * std::sqrt(std::expm1(2.0 * theta * delta) * std::numbers::pi));
}

struct SandwichReport {
    std::vector<double> grid;
    std::size_t lower_violations = 0;  ///< (1 − ρΞ)·F_eps(t − δ) > F_ref(t) + tol
    std::size_t upper_violations = 0;  ///< F_ref(t) > F_eps(t) + tol
    double max_violation_magnitude = 0.0;
    double xi = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    double tol = 0.0;

    [[nodiscard]] bool passed() const noexcept {
        return lower_violations == 0 && upper_violations == 0;
    }
};

/// Audits (1 − ρΞ)·F_eps(t − δ) ≤ F_ref(t) ≤ F_eps(t) on `grid`, each side with slack `tol`.
inline SandwichReport sandwich_check(const Ecdf& f_ref, const Ecdf& f_eps, double xi,
                                     double delta, double rho, std::vector<double> grid,
                                     double tol) {
    SandwichReport report;
    report.xi = xi;
    report.rho = rho;
    report.delta = delta;
    report.tol = tol;
    const double factor = 1.0 - rho * xi;
    for (const double t : grid) {
        const double ref = f_ref(t);
        const double lower_gap = factor * f_eps(t - delta) - (ref + tol);
        const double upper_gap = ref - (f_eps(t) + tol);
        if (lower_gap > 0.0) {
            ++report.lower_violations;
            report.max_violation_magnitude = std::max(report.max_violation_magnitude, lower_gap);
        }
        if (upper_gap > 0.0) {
            ++report.upper_violations;
            report.max_violation_magnitude = std::max(report.max_violation_magnitude, upper_gap);
        }
    }
    report.grid = std::move(grid);
    return report;
}

struct SandwichSettings {
    double eps = 1e-3;
    double gamma_exp = 1.0;
    double rho = 1.1;
    double tol = 0.0;
};

/// Sandwich audit with Xi and delta = eps^gamma_exp derived from the problem.
inline SandwichReport sandwich_check(const Ecdf& f_ref, const Ecdf& f_eps,
                                     const SandwichSettings& s, const OUParams& params, double a,
                                     double b, std::vector<double> grid) {
    if (!(s.rho > 1.0)) {
        throw DomainError("sandwich_check: rho must exceed 1");
    }
    const double xi = xi_bound(s.eps, s.gamma_exp, params, a, b);
    return sandwich_check(f_ref, f_eps, xi, std::pow(s.eps, s.gamma_exp), s.rho,
                          std::move(grid), s.tol);
}

/// Evenly spaced grid over the overlap of both sample ranges.
inline std::vector<double> common_support_grid(const Ecdf& f, const Ecdf& g, std::size_t points) {
    const double lo = std::max(f.min(), g.min());
    const double hi = std::min(f.max(), g.max());
    std::vector<double> grid;
    if (points == 0 || !(lo <= hi)) {
        return grid;
    }
    grid.reserve(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double w = points == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(points - 1);
        grid.push_back(lo + w * (hi - lo));
    }
    return grid;
}

/*!
 * P_y(T_a < T_b) from the OU scale function:
 *
 *   ∫_y^b e^{θ(u−μ)²/σ²} du / ∫_a^b e^{θ(u−μ)²/σ²} du.
 *
 * The integrand is rescaled by its maximum on [a, b] so that steep
 * configurations do not overflow.
 */
inline double hit_prob_a_before_b(double y, const OUParams& params, double a, double b) {
    if (!(a < b)) {
        throw DomainError("hit_prob_a_before_b: a < b required");
    }
    if (!(y >= a && y <= b)) {
        throw DomainError("hit_prob_a_before_b: y=" + std::to_string(y) + " outside [a, b]");
    }
    if (!(params.theta > 0.0) || !(params.sigma > 0.0)) {
        throw DomainError("hit_prob_a_before_b: theta and sigma must be positive");
    }
    const double k = params.theta / (params.sigma * params.sigma);
    const double mu = params.mu;
    const double peak = std::max((a - mu) * (a - mu), (b - mu) * (b - mu));
    auto density = [k, mu, peak](double u) { return std::exp(k * ((u - mu) * (u - mu) - peak)); };
    constexpr double kRelTol = 1e-12;
    const double below = integrate(density, a, y, kRelTol).value;
    const double above = integrate(density, y, b, kRelTol).value;
    return above / (below + above);
}

struct SampleSummary {
    double mean = 0.0;
    double std_error = 0.0;
};

inline SampleSummary summarize(std::span<const double> xs) {
    if (xs.empty()) {
        throw DomainError("summarize: empty sample");
    }
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (const double x : xs) {
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (const double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

struct StepScalingRow {
    double eps = 0.0;
    double mean_steps = 0.0;
    double std_error = 0.0;
    double ratio = 0.0;  ///< mean_steps / |log eps|
};

/// Mean step count per tolerance and its ratio to |log eps|, ordered by eps.
inline std::vector<StepScalingRow> step_scaling_summary(
    const std::map<double, std::vector<ExitOutcome>>& runs) {
    std::vector<StepScalingRow> rows;
    rows.reserve(runs.size());
    for (const auto& [eps, outcomes] : runs) {
        if (outcomes.empty()) {
            throw DomainError("step_scaling_summary: no runs for eps=" + std::to_string(eps));
        }
        if (!(eps > 0.0 && eps < 1.0)) {
            throw DomainError("step_scaling_summary: eps must lie in (0, 1)");
        }
        std::vector<double> steps;
        steps.reserve(outcomes.size());
        for (const auto& o : outcomes) {
            steps.push_back(static_cast<double>(o.n_steps));
        }
        const SampleSummary s = summarize(steps);
        rows.push_back({eps, s.mean, s.std_error, s.mean / std::abs(std::log(eps))});
    }
    return rows;
}

}  // namespace woms
