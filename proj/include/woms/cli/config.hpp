#pragma once

// Run configuration: a flat JSON object whose keys double as --flags.
// Flags override file values; every field is validated before use.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>

#include <json.hpp>

#include "woms/errors.hpp"
#include "woms/euler.hpp"
#include "woms/ou.hpp"
#include "woms/walk.hpp"

namespace woms::cli {

struct RunConfig {
    ExitProblem problem;
    std::size_t n_samples = 1000;
    std::optional<std::uint64_t> seed;
    std::uint64_t max_steps = kDefaultMaxSteps;
    unsigned parallelism = 1;
    double h = 1e-4;     ///< Euler step
    bool bridge = true;  ///< Euler bridge correction
};

namespace detail {

inline double number_field(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw ValidationError(key, "must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ValidationError(key, "must be finite");
    }
    return x;
}

inline std::uint64_t count_field(const nlohmann::json& j, const std::string& key,
                                 std::uint64_t min_value) {
    const auto& v = j.at(key);
    std::uint64_t n = 0;
    if (v.is_number_unsigned()) {
        n = v.get<std::uint64_t>();
    } else if (v.is_number()) {
        // Accept integral floats such as 1e5.
        const double x = v.get<double>();
        if (!(x >= 0.0) || x != std::floor(x) || x >= 0x1.0p64) {
            throw ValidationError(key, "must be a non-negative integer");
        }
        n = static_cast<std::uint64_t>(x);
    } else {
        throw ValidationError(key, "must be a non-negative integer");
    }
    if (n < min_value) {
        throw ValidationError(key, key + " >= " + std::to_string(min_value));
    }
    return n;
}

}  // namespace detail

/// Builds a RunConfig from a flat JSON object. Problem fields are required.
inline RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("config", "must be a flat JSON object");
    }
    static const char* const kKnown[] = {"theta", "sigma", "mu", "a", "b", "x0", "eps",
                                         "gamma_shrink", "n_samples", "seed", "max_steps",
                                         "parallelism", "h", "bridge"};
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* k : kKnown) {
            known = known || key == k;
        }
        if (!known) {
            throw ValidationError(key, "unknown field");
        }
    }
    for (const char* key : {"theta", "sigma", "a", "b", "x0", "eps"}) {
        if (!j.contains(key)) {
            throw ValidationError(key, "required");
        }
    }

    RunConfig cfg;
    ExitProblem& p = cfg.problem;
    p.params.theta = detail::number_field(j, "theta");
    p.params.sigma = detail::number_field(j, "sigma");
    if (j.contains("mu")) {
        p.params.mu = detail::number_field(j, "mu");
    }
    p.a = detail::number_field(j, "a");
    p.b = detail::number_field(j, "b");
    p.x0 = detail::number_field(j, "x0");
    p.eps = detail::number_field(j, "eps");
    if (j.contains("gamma_shrink")) {
        p.gamma_shrink = detail::number_field(j, "gamma_shrink");
    }
    validate(p);

    if (j.contains("n_samples")) {
        cfg.n_samples = detail::count_field(j, "n_samples", 1);
    }
    if (j.contains("seed")) {
        cfg.seed = detail::count_field(j, "seed", 0);
    }
    if (j.contains("max_steps")) {
        cfg.max_steps = detail::count_field(j, "max_steps", 1);
    }
    if (j.contains("parallelism")) {
        const auto n = detail::count_field(j, "parallelism", 1);
        if (n > 1024) {
            throw ValidationError("parallelism", "parallelism <= 1024");
        }
        cfg.parallelism = static_cast<unsigned>(n);
    }
    if (j.contains("h")) {
        cfg.h = detail::number_field(j, "h");
        if (!(cfg.h > 0.0)) {
            throw ValidationError("h", "h > 0");
        }
    }
    if (j.contains("bridge")) {
        if (!j.at("bridge").is_boolean()) {
            throw ValidationError("bridge", "must be true or false");
        }
        cfg.bridge = j.at("bridge").get<bool>();
    }
    return cfg;
}

/// Reads the optional config file, applies flag overrides on top, then validates.
inline RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const nlohmann::json& flags) {
    nlohmann::json merged = nlohmann::json::object();
    if (path) {
        std::ifstream in(*path);
        if (!in) {
            throw ValidationError("config", "cannot open " + path->string());
        }
        try {
            merged = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("config", std::string("invalid JSON: ") + e.what());
        }
        if (!merged.is_object()) {
            throw ValidationError("config", "must be a flat JSON object");
        }
    }
    if (!flags.is_null()) {
        merged.update(flags);
    }
    return parse_config(merged);
}

}  // namespace woms::cli
