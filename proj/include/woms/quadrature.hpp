#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <queue>
#include <vector>

namespace woms {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1] (nodes >= 0).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) quadrature with bisection of the worst panel.
template <class F>
    requires std::invocable<F&, double>
QuadratureResult integrate(F&& f, double lo, double hi, double rel_tol = 1e-10,
                           double abs_tol = 0.0, std::size_t max_panels = 10'000) {
    if (lo == hi) {
        return {};
    }
    const double sign = hi > lo ? 1.0 : -1.0;
    if (sign < 0.0) {
        std::swap(lo, hi);
    }
    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod15(f, lo, hi));
    double total = panels.top().value;
    double error = panels.top().error;
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && panels.size() < max_panels) {
        const detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const detail::Panel left = detail::gauss_kronrod15(f, worst.lo, mid);
        const detail::Panel right = detail::gauss_kronrod15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to drop the drift of the incremental updates.
    total = 0.0;
    error = 0.0;
    const std::size_t count = panels.size();
    while (!panels.empty()) {
        total += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    return {sign * total, error, count};
}

}  // namespace woms
