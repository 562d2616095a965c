#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "woms/errors.hpp"
#include "woms/random.hpp"

namespace woms {

/*!
 * Runs `n` independent replicates and returns their results in index order.
 *
 * Replicate i gets `Stream::for_replicate(master_seed, i)` and nothing else,
 * so the output does not depend on `parallelism` or on thread scheduling.
 * The first failing replicate (lowest index) is rethrown as a BatchError.
 */
template <class Fn>
auto run_replicates(std::size_t n, std::uint64_t master_seed, unsigned parallelism, Fn&& fn)
    -> std::vector<decltype(fn(std::declval<Stream&>()))> {
    using Result = decltype(fn(std::declval<Stream&>()));
    std::vector<Result> out(n);

    std::mutex error_mutex;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::string error_what;

    auto run_one = [&](std::size_t i) {
        try {
            Stream rng = Stream::for_replicate(master_seed, i);
            out[i] = fn(rng);
        } catch (const std::exception& e) {
            std::lock_guard lock(error_mutex);
            if (i < error_index) {
                error_index = i;
                error_what = e.what();
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n && error_index == std::numeric_limits<std::size_t>::max(); ++i) {
            run_one(i);
        }
    } else {
        constexpr std::size_t kChunk = 64;
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
                    if (begin >= n) {
                        return;
                    }
                    const std::size_t end = std::min(n, begin + kChunk);
                    for (std::size_t i = begin; i < end; ++i) {
                        run_one(i);
                    }
                }
            });
        }
    }

    if (error_index != std::numeric_limits<std::size_t>::max()) {
        throw BatchError(error_index, error_what);
    }
    return out;
}

}  // namespace woms
