#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lfq {

/// Worker count for block-parallel loops. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Fixed block width for reductions. Results depend on this, never on threads.
inline constexpr std::uint64_t kReduceBlock = 4096;

/// Runs fn(begin, end) on consecutive blocks of [0, n) and returns the per-block
/// results in block order.
template <class T, class Fn>
std::vector<T> map_blocks(std::uint64_t n, std::uint64_t block, Fn fn) {
    const std::uint64_t nb = (n + block - 1) / block;
    std::vector<T> out(nb);
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), nb));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < nb; ++b) out[b] = fn(b * block, std::min(n, (b + 1) * block));
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= nb) return;
                try {
                    out[b] = fn(b * block, std::min(n, (b + 1) * block));
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                    next = nb;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

/// Pairwise sum with a fixed tree shape.
template <class T>
T tree_sum(std::vector<T> v) {
    if (v.empty()) return T{};
    while (v.size() > 1) {
        std::vector<T> next((v.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) next[i / 2] = v[i] + v[i + 1];
        if (v.size() & 1) next.back() = v.back();
        v.swap(next);
    }
    return v[0];
}

/// Sequential sum inside fixed blocks, then the pairwise tree over block sums.
template <class T, class Fn>
T deterministic_sum(std::uint64_t n, Fn term) {
    auto blocks = map_blocks<T>(n, kReduceBlock, [&](std::uint64_t b, std::uint64_t e) {
        T s{};
        for (std::uint64_t i = b; i < e; ++i) s += term(i);
        return s;
    });
    return tree_sum(std::move(blocks));
}

}  // namespace lfq
