// Command-line front end: each subcommand runs one experiment and writes one CSV.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "woms/analysis.hpp"
#include "woms/cli/config.hpp"
#include "woms/cli/csv.hpp"
#include "woms/euler.hpp"
#include "woms/spheroid.hpp"
#include "woms/walk.hpp"

namespace {

using nlohmann::json;
using woms::cli::format_double;

// Flags shared by the subcommands that read a RunConfig.
struct ProblemFlags {
    std::optional<std::filesystem::path> config;
    std::optional<double> theta, sigma, mu, a, b, x0, eps, gamma_shrink, h;
    std::optional<std::uint64_t> n_samples, seed, max_steps, parallelism;
    bool no_bridge = false;

    void attach(CLI::App& app) {
        app.add_option("--config", config, "flat JSON config file");
        app.add_option("--theta", theta, "mean-reversion rate (> 0)");
        app.add_option("--sigma", sigma, "noise amplitude (> 0)");
        app.add_option("--mu", mu, "mean level");
        app.add_option("--a", a, "lower interval bound");
        app.add_option("--b", b, "upper interval bound");
        app.add_option("--x0", x0, "starting position");
        app.add_option("--eps", eps, "stopping tolerance");
        app.add_option("--gamma-shrink", gamma_shrink, "interval shrink factor in [0,1)");
        app.add_option("--n-samples", n_samples, "number of replicates");
        app.add_option("--seed", seed, "master seed");
        app.add_option("--max-steps", max_steps, "per-replicate step limit");
        app.add_option("--parallelism", parallelism, "worker threads");
        app.add_option("--h", h, "Euler time step");
        app.add_flag("--no-bridge", no_bridge, "disable the Euler bridge correction");
    }

    json overrides() const {
        json j = json::object();
        auto put = [&j](const char* key, const auto& v) {
            if (v) {
                j[key] = *v;
            }
        };
        put("theta", theta);
        put("sigma", sigma);
        put("mu", mu);
        put("a", a);
        put("b", b);
        put("x0", x0);
        put("eps", eps);
        put("gamma_shrink", gamma_shrink);
        put("n_samples", n_samples);
        put("seed", seed);
        put("max_steps", max_steps);
        put("parallelism", parallelism);
        put("h", h);
        if (no_bridge) {
            j["bridge"] = false;
        }
        return j;
    }

    woms::cli::RunConfig load() const { return woms::cli::parse_config(config, overrides()); }
};

// Writes to --out when given, stdout otherwise.
class Output {
  public:
    explicit Output(const std::optional<std::filesystem::path>& path) {
        if (path) {
            file_.open(*path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw woms::IoError("cannot open " + path->string() + " for writing");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t require_seed(const woms::cli::RunConfig& cfg) {
    if (!cfg.seed) {
        throw woms::ValidationError("seed", "required (pass --seed or set seed in the config)");
    }
    return *cfg.seed;
}

void write_metrics(std::ostream& os, const std::vector<std::pair<std::string, double>>& rows) {
    os << "metric,value\n";
    for (const auto& [name, value] : rows) {
        os << name << ',' << format_double(value) << '\n';
    }
}

std::vector<double> default_eps_sweep() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}; }

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> out;
    for (int k = 0; k < points; ++k) {
        const double w = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
        out.push_back(std::pow(10.0, std::log10(lo) + w * (std::log10(hi) - std::log10(lo))));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walk on moving spheres: Ornstein-Uhlenbeck exit times"};
    // "-h" is left free: --h is the Euler step, like the config key.
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    app.fallthrough();
    std::optional<std::filesystem::path> out_path;
    app.add_option("-o,--out", out_path, "output CSV path (default: stdout)");

    ProblemFlags sample_flags;
    auto* sample = app.add_subcommand("sample", "WOMS batch -> samples CSV");
    sample_flags.attach(*sample);

    ProblemFlags euler_flags;
    auto* euler = app.add_subcommand("euler", "Euler-Maruyama batch -> samples CSV");
    euler_flags.attach(*euler);

    ProblemFlags steps_flags;
    std::vector<double> steps_eps = default_eps_sweep();
    auto* steps = app.add_subcommand("steps", "mean step count across an eps sweep");
    steps_flags.attach(*steps);
    steps->add_option("--eps-list", steps_eps, "tolerances to sweep")->delimiter(',');

    ProblemFlags compare_flags;
    double compare_rho = 1.1;
    double compare_gamma_exp = 1.0;
    std::optional<double> compare_tol;
    std::size_t compare_grid = 1000;
    auto* compare = app.add_subcommand("compare", "WOMS vs Euler: KS, CDF sandwich, timing");
    compare_flags.attach(*compare);
    compare->add_option("--rho", compare_rho, "sandwich factor (> 1)");
    compare->add_option("--gamma-exp", compare_gamma_exp, "delta = eps^gamma_exp, in (0,2)");
    compare->add_option("--tol", compare_tol, "statistical slack (default: two-sample KS 1%)");
    compare->add_option("--grid-points", compare_grid, "sandwich grid size");

    double bound_sigma = 1.0, bound_a = -1.0, bound_b = 1.0, bound_gamma_exp = 1.0;
    std::vector<double> bound_thetas = {0.1, 0.5, 1.0, 2.0, 5.0};
    std::vector<double> bound_eps = log_grid(1e-6, 1e-1, 26);
    auto* bound = app.add_subcommand("bound", "error bound Xi versus eps");
    bound->add_option("--sigma", bound_sigma);
    bound->add_option("--a", bound_a);
    bound->add_option("--b", bound_b);
    bound->add_option("--gamma-exp", bound_gamma_exp);
    bound->add_option("--thetas", bound_thetas)->delimiter(',');
    bound->add_option("--eps-list", bound_eps)->delimiter(',');

    double gof_d = 1.0;
    std::size_t gof_n = 100'000;
    std::uint64_t gof_seed = 1;
    auto* gof = app.add_subcommand("gof", "KS test of the spheroid exit sampler");
    gof->add_option("--d", gof_d, "spheroid size");
    gof->add_option("--n-samples", gof_n);
    gof->add_option("--seed", gof_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        Output out(out_path);
        std::ostream& os = out.stream();

        if (*sample) {
            const auto cfg = sample_flags.load();
            const auto seed = require_seed(cfg);
            const auto outcomes =
                woms::run_batch(cfg.problem, cfg.n_samples, seed, cfg.parallelism, cfg.max_steps);
            woms::cli::write_samples_csv(os, outcomes);
        } else if (*euler) {
            const auto cfg = euler_flags.load();
            const auto seed = require_seed(cfg);
            const auto outcomes = woms::euler_batch(cfg.problem, cfg.h, cfg.bridge, cfg.n_samples,
                                                    seed, cfg.parallelism);
            woms::cli::write_samples_csv(os, outcomes);
        } else if (*steps) {
            if (steps_eps.empty()) {
                throw woms::ValidationError("eps_list", "at least one tolerance");
            }
            auto flags = steps_flags.overrides();
            if (!flags.contains("eps")) {
                flags["eps"] = steps_eps.front();
            }
            auto cfg = woms::cli::parse_config(steps_flags.config, flags);
            const auto seed = cfg.seed.value_or(1);
            std::map<double, std::vector<woms::ExitOutcome>> runs;
            for (const double e : steps_eps) {
                woms::ExitProblem p = cfg.problem;
                p.eps = e;
                try {
                    woms::validate(p);
                } catch (const woms::ValidationError&) {
                    throw woms::ValidationError("eps_list", "every eps in (0, (b - a) / 2)");
                }
                runs[e] = woms::run_batch(p, cfg.n_samples, seed, cfg.parallelism, cfg.max_steps);
            }
            os << "eps,mean_steps,std_error,ratio\n";
            const auto rows = woms::step_scaling_summary(runs);
            for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
                os << format_double(it->eps) << ',' << format_double(it->mean_steps) << ','
                   << format_double(it->std_error) << ',' << format_double(it->ratio) << '\n';
            }
        } else if (*compare) {
            const auto cfg = compare_flags.load();
            const auto seed = cfg.seed.value_or(1);
            if (!(compare_rho > 1.0)) {
                throw woms::ValidationError("rho", "rho > 1");
            }
            if (!(compare_gamma_exp > 0.0 && compare_gamma_exp < 2.0)) {
                throw woms::ValidationError("gamma_exp", "0 < gamma_exp < 2");
            }
            auto start = std::chrono::steady_clock::now();
            const auto walks =
                woms::run_batch(cfg.problem, cfg.n_samples, seed, cfg.parallelism, cfg.max_steps);
            const double woms_seconds = seconds_since(start);
            start = std::chrono::steady_clock::now();
            const auto eulers = woms::euler_batch(cfg.problem, cfg.h, cfg.bridge, cfg.n_samples,
                                                  woms::splitmix64(seed), cfg.parallelism);
            const double euler_seconds = seconds_since(start);

            const woms::Ecdf f_eps(woms::exit_times(walks));
            const woms::Ecdf f_ref(woms::exit_times(eulers));
            const double tol = compare_tol.value_or(
                woms::ks_two_sample_critical(1.63, f_ref.size(), f_eps.size()));
            const auto centered = woms::reduce_mu(cfg.problem);
            const auto report = woms::sandwich_check(
                f_ref, f_eps, {cfg.problem.eps, compare_gamma_exp, compare_rho, tol},
                centered.params, centered.a, centered.b,
                woms::common_support_grid(f_ref, f_eps, compare_grid));
            write_metrics(os, {{"n_samples", static_cast<double>(cfg.n_samples)},
                               {"ks_distance", woms::ks_distance(f_ref, f_eps)},
                               {"xi", report.xi},
                               {"rho", report.rho},
                               {"delta", report.delta},
                               {"tol", report.tol},
                               {"lower_violations", static_cast<double>(report.lower_violations)},
                               {"upper_violations", static_cast<double>(report.upper_violations)},
                               {"max_violation", report.max_violation_magnitude},
                               {"woms_seconds", woms_seconds},
                               {"euler_seconds", euler_seconds},
                               {"speedup", euler_seconds / woms_seconds}});
        } else if (*bound) {
            const woms::OUParams params{1.0, bound_sigma, 0.0};
            os << "theta,eps,delta,xi\n";
            for (const double theta : bound_thetas) {
                if (!(theta > 0.0)) {
                    throw woms::ValidationError("theta", "theta > 0");
                }
                auto p = params;
                p.theta = theta;
                for (const double e : bound_eps) {
                    os << format_double(theta) << ',' << format_double(e) << ','
                       << format_double(std::pow(e, bound_gamma_exp)) << ','
                       << format_double(woms::xi_bound(e, bound_gamma_exp, p, bound_a, bound_b))
                       << '\n';
                }
            }
        } else if (*gof) {
            if (!(gof_d > 0.0)) {
                throw woms::ValidationError("d", "d > 0");
            }
            if (gof_n < 2) {
                throw woms::ValidationError("n_samples", "n_samples >= 2");
            }
            woms::Stream rng(gof_seed);
            std::vector<double> taus(gof_n);
            for (auto& t : taus) {
                t = woms::sample_spheroid_exit(gof_d, rng).tau;
            }
            const auto summary = woms::summarize(taus);
            const woms::Ecdf f(std::move(taus));
            const double ks = woms::ks_distance(
                [d = gof_d](double t) { return woms::spheroid_cdf(d, t); }, f);
            const double critical = 1.95 / std::sqrt(static_cast<double>(gof_n));
            write_metrics(os, {{"n_samples", static_cast<double>(gof_n)},
                               {"d", gof_d},
                               {"ks_distance", ks},
                               {"ks_critical", critical},
                               {"mean", summary.mean},
                               {"expected_mean", gof_d * gof_d / (3.0 * std::sqrt(3.0))},
                               {"std_error", summary.std_error}});
        }
    } catch (const woms::ValidationError& e) {
        std::cerr << "error: " << e.field() << ": " << e.constraint() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
