#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "woms/batch.hpp"
#include "woms/errors.hpp"
#include "woms/ou.hpp"
#include "woms/random.hpp"
#include "woms/spheroid.hpp"

namespace woms {

enum class Boundary { Lower, Upper };

/// One point of the walk skeleton: cumulative OU time and position after n steps.
struct WalkStep {
    std::uint64_t n = 0;
    double t = 0.0;
    double x = 0.0;
};

struct ExitOutcome {
    double t_eps = 0.0;     ///< approximated exit time
    double x_final = 0.0;   ///< raw stopped position (not snapped to the boundary)
    Boundary side = Boundary::Lower;
    std::uint64_t n_steps = 0;
    std::vector<WalkStep> trace;  ///< filled only when requested
};

inline constexpr std::uint64_t kDefaultMaxSteps = 10'000'000;

/*!
 * Walk on moving spheres for the OU exit time from [a, b].
 *
 * While the position is strictly inside (a + eps, b - eps): inscribe the
 * largest admissible generalized spheroid, sample its Brownian exit, map it
 * to OU time and position, and accumulate the time. The outcome side is the
 * stopping band that ended the walk.
 *
 * Problems with mu != 0 are solved on the centered problem; positions in the
 * outcome and trace are reported in the original coordinates.
 */
template <VariateStream Rng>
ExitOutcome run_walk(const ExitProblem& problem, Rng& rng,
                     std::uint64_t max_steps = kDefaultMaxSteps, bool keep_trace = false) {
    const ExitProblem centered = reduce_mu(problem);
    const double mu = problem.params.mu;
    const double lower_stop = centered.a + centered.eps;
    const double upper_stop = centered.b - centered.eps;

    ExitOutcome out;
    double x = centered.x0;
    double t = 0.0;
    std::uint64_t n = 0;
    if (keep_trace) {
        out.trace.push_back({0, 0.0, x + mu});
    }
    while (lower_stop < x && x < upper_stop) {
        if (n >= max_steps) {
            throw StepLimitExceeded(max_steps, x + mu);
        }
        const SpheroidGeometry geom = compute_d(x, centered);
        const SpheroidExit exit = sample_spheroid_exit(geom.d, rng);
        const StepResult step = next_state(x, exit, geom, centered.params);
        t += step.tau_ou;
        x = step.x_next;
        ++n;
        if (keep_trace) {
            out.trace.push_back({n, t, x + mu});
        }
    }
    out.t_eps = t;
    out.x_final = x + mu;
    out.side = x >= upper_stop ? Boundary::Upper : Boundary::Lower;
    out.n_steps = n;
    return out;
}

/// `n_samples` independent walks; replicate i uses Stream::for_replicate(master_seed, i).
inline std::vector<ExitOutcome> run_batch(const ExitProblem& problem, std::size_t n_samples,
                                          std::uint64_t master_seed, unsigned parallelism = 1,
                                          std::uint64_t max_steps = kDefaultMaxSteps) {
    validate(problem);
    if (n_samples == 0) {
        throw DomainError("run_batch: n_samples must be at least 1");
    }
    return run_replicates(n_samples, master_seed, parallelism,
                          [&](Stream& rng) { return run_walk(problem, rng, max_steps); });
}

}  // namespace woms
