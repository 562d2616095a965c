#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include "woms/errors.hpp"
#include "woms/walk.hpp"

namespace woms::cli {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw IoError("cannot format double");
    }
    return {buf.data(), end};
}

inline const char* side_name(Boundary side) {
    return side == Boundary::Upper ? "upper" : "lower";
}

inline constexpr const char* kSamplesHeader = "replicate,exit_time,exit_side,n_steps,x_final";

inline void write_samples_csv(std::ostream& os, std::span<const ExitOutcome> outcomes) {
    os << kSamplesHeader << '\n';
    std::size_t replicate = 0;
    for (const auto& o : outcomes) {
        os << replicate++ << ',' << format_double(o.t_eps) << ',' << side_name(o.side) << ','
           << o.n_steps << ',' << format_double(o.x_final) << '\n';
    }
}

inline void emit_samples_csv(std::span<const ExitOutcome> outcomes,
                             const std::filesystem::path& path) {
    if (outcomes.empty()) {
        throw DomainError("emit_samples_csv: no outcomes to write");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_samples_csv(out, outcomes);
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace woms::cli
