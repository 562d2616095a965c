// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// usage: woms_acceptance <path to woms cli> <scratch dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "woms/woms.hpp"

using namespace woms;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ExitProblem make_problem(double theta, double sigma, double mu, double a, double b, double x0,
                         double eps) {
    ExitProblem p;
    p.params = {theta, sigma, mu};
    p.a = a;
    p.b = b;
    p.x0 = x0;
    p.eps = eps;
    p.gamma_shrink = 1e-6;
    return p;
}

ExitProblem base_problem(double eps) { return make_problem(0.1, 1.0, 0.0, 2.0, 7.0, 5.0, eps); }

double lower_fraction(const std::vector<ExitOutcome>& out) {
    double lower = 0.0;
    for (const auto& o : out) {
        lower += o.side == Boundary::Lower ? 1.0 : 0.0;
    }
    return lower / static_cast<double>(out.size());
}

Verdict sampler_goodness_of_fit() {
    const std::size_t n = 100'000;
    Stream rng(20240601);
    std::vector<double> taus(n);
    for (auto& t : taus) {
        t = sample_spheroid_exit(1.0, rng).tau;
    }
    const auto s = summarize(taus);
    const double ks = ks_distance([](double t) { return spheroid_cdf(1.0, t); }, Ecdf(taus));
    const double critical = 1.95 / std::sqrt(static_cast<double>(n));
    const double expected = 1.0 / (3.0 * std::sqrt(3.0));
    const bool pass = ks <= critical && std::abs(s.mean - expected) <= 3.0 * s.std_error;
    return {pass, fmt("ks=%.5f (<= %.5f) mean=%.6f expected=%.6f se=%.6f", ks, critical, s.mean,
                      expected, s.std_error)};
}

Verdict containment() {
    std::mt19937_64 gen(424242);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const ExitProblem p = fixtures::random_problem(gen);
        const SpheroidGeometry g = compute_d(p.x0, p);
        for (int k = 0; k < 1000; ++k) {
            const double t = g.t_max_ou * k / 999.0;
            const double over = psi_ou(t, p.x0, g, Side::Plus, p.params) - g.b_gx;
            const double under = g.a_gx - psi_ou(t, p.x0, g, Side::Minus, p.params);
            worst = std::max({worst, over, under});
            violations += (over > 1e-9 ? 1 : 0) + (under > 1e-9 ? 1 : 0);
        }
    }
    return {violations == 0,
            fmt("configs=10000 grid=1000 violations=%zu worst_excursion=%.3g", violations, worst)};
}

Verdict step_scaling() {
    std::map<double, std::vector<ExitOutcome>> runs;
    for (const double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        runs[eps] = run_batch(base_problem(eps), 10'000, 31337);
    }
    const auto rows = step_scaling_summary(runs);
    double lo = rows.front().ratio, hi = rows.front().ratio;
    std::string table;
    for (const auto& r : rows) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
        table += fmt(" N(%g)=%.2f", r.eps, r.mean_steps);
    }
    const double growth = rows.front().mean_steps / rows.back().mean_steps;
    const bool pass = hi / lo <= 3.0 && growth <= 25.0;
    return {pass, fmt("ratio max/min=%.3f (<= 3) N(1e-5)/N(1e-1)=%.2f (<= 25);", hi / lo, growth) +
                      table};
}

Verdict cdf_sandwich() {
    const std::size_t n = 100'000;
    const ExitProblem p = base_problem(1e-3);
    const Ecdf f_eps(exit_times(run_batch(p, n, 1001)));
    const Ecdf f_ref(exit_times(euler_batch(p, 1e-4, true, n, 2002)));
    SandwichSettings s;
    s.eps = 1e-3;
    s.gamma_exp = 1.0;
    s.rho = 1.1;
    s.tol = 2.0 * 1.36 * std::sqrt(2.0 / static_cast<double>(n));
    const auto report =
        sandwich_check(f_ref, f_eps, s, p.params, p.a, p.b, common_support_grid(f_ref, f_eps, 1000));
    const double ks = ks_distance(f_ref, f_eps);
    const bool pass = report.passed() && ks <= 0.02;
    return {pass, fmt("xi=%.5f tol=%.5f lower_violations=%zu upper_violations=%zu "
                      "max_violation=%.4g ks=%.5f (<= 0.02)",
                      report.xi, report.tol, report.lower_violations, report.upper_violations,
                      report.max_violation_magnitude, ks)};
}

Verdict exit_side_oracle() {
    const std::size_t n = 100'000;
    const ExitProblem cases[] = {
        make_problem(1.0, 1.0, 0.0, -1.0, 1.0, 0.0, 1e-4),
        make_problem(1.0, 1.0, 0.0, 0.0, 1.0, 0.5, 1e-4),
        make_problem(0.5, 1.0, 0.0, -1.0, 2.0, 0.4, 1e-4),
    };
    bool pass = true;
    std::string detail;
    std::uint64_t seed = 555;
    for (const auto& p : cases) {
        const double expected = hit_prob_a_before_b(p.x0, p.params, p.a, p.b);
        const double got = lower_fraction(run_batch(p, n, seed++));
        const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
        const bool ok = std::abs(got - expected) <= 3.0 * se;
        pass = pass && ok;
        detail += fmt(" [x0=%g on (%g,%g): lower=%.5f oracle=%.5f z=%.2f]", p.x0, p.a, p.b, got,
                      expected, (got - expected) / se);
    }
    return {pass, detail.substr(1)};
}

Verdict far_boundary() {
    const std::size_t n = 100'000;
    const ExitProblem p = make_problem(1.0, 1.0, 0.0, -10.0, -1.0, -3.0, 1e-3);
    const double oracle = hit_prob_a_before_b(p.x0, p.params, p.a, p.b);
    const double lower = lower_fraction(run_batch(p, n, 777));
    const double upper = 1.0 - lower;
    // Binomial consistency of the lower-exit count, with one count of slack.
    const double dn = static_cast<double>(n);
    const bool consistent =
        std::abs(lower * dn - oracle * dn) <= 3.0 * std::sqrt(dn * oracle * (1.0 - oracle)) + 1.0;
    const bool pass = upper >= 1.0 - 1e-3 && consistent;
    return {pass, fmt("upper fraction=%.6f (>= 0.999) oracle lower=%.3g observed lower=%.3g",
                      upper, oracle, lower)};
}

Verdict performance() {
    const std::size_t n = 100'000;
    const ExitProblem p = make_problem(5.0, 7.0, 0.0, 3.0, 5.0, 4.0, 1e-2);
    auto start = std::chrono::steady_clock::now();
    const auto walks = run_batch(p, n, 11);
    const double woms_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    start = std::chrono::steady_clock::now();
    const auto eulers = euler_batch(p, 1e-4, true, n, 12);
    const double euler_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double speedup = euler_s / woms_s;
    double woms_steps = 0.0, euler_steps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        woms_steps += static_cast<double>(walks[i].n_steps);
        euler_steps += static_cast<double>(eulers[i].n_steps);
    }
    return {speedup >= 5.0,
            fmt("woms=%.3fs euler=%.3fs speedup=%.2f (>= 5) mean steps woms=%.1f euler=%.1f",
                woms_s, euler_s, speedup, woms_steps / n, euler_steps / n)};
}

Verdict mu_reduction() {
    const std::size_t n = 10'000;
    const ExitProblem shifted = make_problem(1.0, 1.0, 3.0, 2.0, 4.5, 3.4, 1e-4);
    const ExitProblem centered = reduce_mu(shifted);
    // The walk on the shifted problem against Euler on the same problem with the
    // native mean-reverting drift: the reduction is checked against a scheme that
    // never applies it.
    const Ecdf walk_shifted(exit_times(run_batch(shifted, n, 8080)));
    const Ecdf euler_native(exit_times(euler_batch(shifted, 1e-4, true, n, 9090)));
    const double ks = ks_distance(walk_shifted, euler_native);
    // Same streams on the centered problem give the same law sample for sample.
    const auto a = run_batch(shifted, 1000, 4242);
    const auto b = run_batch(centered, 1000, 4242);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i].t_eps - b[i].t_eps));
    }
    const bool pass = ks <= 0.02 && worst <= 1e-12;
    return {pass, fmt("ks(shifted walk, native-drift euler)=%.5f (<= 0.02) "
                      "max |T_shifted - T_centered| same streams=%.3g",
                      ks, worst)};
}

Verdict cli_determinism(const std::filesystem::path& cli, const std::filesystem::path& work) {
    std::filesystem::create_directories(work);
    auto run = [&](unsigned par, const std::string& name) {
        const auto out = work / name;
        const std::string cmd = "\"" + cli.string() +
                                "\" sample --theta 0.1 --sigma 1 --a 2 --b 7 --x0 5 --eps 1e-3"
                                " --n-samples 5000 --seed 99 --parallelism " +
                                std::to_string(par) + " --out \"" + out.string() + "\"";
        const int rc = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return std::make_pair(rc, ss.str());
    };
    const auto [rc1, first] = run(1, "det_p1_a.csv");
    const auto [rc2, second] = run(1, "det_p1_b.csv");
    const auto [rc3, third] = run(8, "det_p8.csv");
    const bool ran = rc1 == 0 && rc2 == 0 && rc3 == 0 && !first.empty();
    const bool pass = ran && first == second && first == third;
    return {pass, fmt("exit codes %d/%d/%d, bytes=%zu, rerun identical=%s, parallelism 8 identical=%s",
                      rc1, rc2, rc3, first.size(), first == second ? "yes" : "no",
                      first == third ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <woms cli> <scratch dir>\n", argv[0]);
        return 2;
    }
    const std::filesystem::path cli = argv[1];
    const std::filesystem::path work = argv[2];

    const std::vector<Criterion> criteria = {
        {1, "spheroid sampler goodness-of-fit", 5.0, sampler_goodness_of_fit},
        {2, "generalized spheroid containment", 30.0, containment},
        {3, "step count scaling", 120.0, step_scaling},
        {4, "CDF sandwich against Euler reference", 600.0, cdf_sandwich},
        {5, "exit-side oracle", 60.0, exit_side_oracle},
        {6, "far-boundary regime", 60.0, far_boundary},
        {7, "performance against Euler", 600.0, performance},
        {8, "mean-reduction equivalence", 60.0, mu_reduction},
        {9, "CLI determinism", 10.0, [&] { return cli_determinism(cli, work); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs < c.budget_seconds;
        const bool pass = v.pass && in_budget;
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %d %s: %s; runtime %.2fs (< %.0fs%s)\n", pass ? "PASS" : "FAIL",
                    c.id, c.name, v.detail.c_str(), secs, c.budget_seconds,
                    in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
