#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <type_traits>
#include <vector>

namespace powsec {

/// Calls fn(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). Work is handed out by index, so results written to slot i
/// do not depend on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Monte Carlo driver: replication r draws from its own generator seeded with
/// seed + r, so the output vector is identical for any worker count.
template <class Fn>
auto replicate(std::size_t reps, std::uint64_t seed, Fn&& fn, unsigned workers = 0) {
    using Result = decltype(fn(std::declval<std::mt19937_64&>(), std::size_t{}));
    // vector<bool> packs bits and cannot take concurrent writes.
    using Stored = std::conditional_t<std::is_same_v<Result, bool>, char, Result>;
    std::vector<Stored> out(reps);
    parallel_for(
        reps,
        [&](std::size_t r) {
            std::mt19937_64 rng(seed + r);
            out[r] = fn(rng, r);
        },
        workers);
    return out;
}

}  // namespace powsec
