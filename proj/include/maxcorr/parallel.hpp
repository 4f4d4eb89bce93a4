#pragma once

// Deterministic block-parallel execution. Work is split into fixed blocks;
// per-block results land in slots indexed by block, and reductions walk the
// slots in block order. Thread count therefore never changes a result.

#include <cstddef>
#include <cstdint>
#include <atomic>
#include <span>
#include <thread>
#include <vector>

namespace maxcorr {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(block_index, first_item, last_item) for every block of
// [0, total) split into chunks of block_size. Blocks are claimed from an
// atomic counter; the callee must only write state owned by its block.
template <typename Fn>
void for_each_block(std::uint64_t total, std::uint64_t block_size, int threads, Fn&& fn) {
    if (total == 0) return;
    const std::uint64_t n_blocks = (total + block_size - 1) / block_size;
    threads = resolve_threads(threads);
    if (threads <= 1 || n_blocks == 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) {
            const std::uint64_t lo = b * block_size;
            const std::uint64_t hi = std::min(total, lo + block_size);
            fn(b, lo, hi);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            const std::uint64_t lo = b * block_size;
            const std::uint64_t hi = std::min(total, lo + block_size);
            fn(b, lo, hi);
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<std::uint64_t>(threads, n_blocks));
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Pairwise (tree) summation; the result depends only on element order.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

} // namespace maxcorr
