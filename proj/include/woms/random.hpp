#pragma once

#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>

namespace woms {

/// One round of the splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of replicate `index` under `master_seed`.
///
/// Both inputs go through the splitmix64 finalizer before being combined, so
/// neighbouring masters and neighbouring indices land on unrelated states.
constexpr std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Anything that yields independent uniforms on (0,1), standard normals and fair bits.
template <class R>
concept VariateStream = requires(R& r) {
    { r.uniform() } -> std::convertible_to<double>;
    { r.gaussian() } -> std::convertible_to<double>;
    { r.bernoulli() } -> std::convertible_to<bool>;
};

/*!
 * Reproducible random stream: xoshiro256++ core plus fixed transforms.
 *
 * The uniform and normal transforms are written out here rather than taken
 * from <random> so that a given seed produces the same doubles on every
 * standard library. Normals use the Marsaglia polar method and cache the
 * second variate of each accepted pair.
 *
 * Also models UniformRandomBitGenerator, so it can drive std distributions.
 */
class Stream {
  public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            s = splitmix64(x);
        }
    }

    static Stream for_replicate(std::uint64_t master_seed, std::uint64_t index) noexcept {
        return Stream(replicate_seed(master_seed, index));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1): midpoints of the 2^53 grid.
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    bool bernoulli() noexcept { return ((*this)() >> 63) != 0; }

  private:
    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

static_assert(VariateStream<Stream>);

}  // namespace woms
