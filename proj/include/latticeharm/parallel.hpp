#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace latticeharm {

/// Number of worker threads used by block reductions (default: hardware).
int max_threads();

/// Set the worker-thread count; n < 1 resets to the hardware default.
void set_max_threads(int n);

/// Splits [0, n) into fixed-size blocks, evaluates `eval(begin, end)` per
/// block (possibly concurrently) and combines the block results with
/// `operator+` in ascending block order. Block boundaries and the combine
/// order depend only on n and block_size, so results are bit-identical
/// for every thread count.
template <class R, class Fn>
R block_reduce(std::size_t n, std::size_t block_size, Fn&& eval) {
    if (n == 0) return R{};
    if (block_size == 0) block_size = 1;
    const std::size_t nblocks = (n + block_size - 1) / block_size;
    std::vector<R> parts(nblocks);

    const int nthreads =
        static_cast<int>(std::min<std::size_t>(nblocks, static_cast<std::size_t>(max_threads())));
    if (nthreads <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) {
            parts[b] = eval(b * block_size, std::min(n, (b + 1) * block_size));
        }
    } else {
        std::atomic<std::size_t> counter{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t b = counter.fetch_add(1);
                if (b >= nblocks) return;
                parts[b] = eval(b * block_size, std::min(n, (b + 1) * block_size));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    R acc{};
    for (std::size_t b = 0; b < nblocks; ++b) acc = acc + parts[b];
    return acc;
}

}  // namespace latticeharm
