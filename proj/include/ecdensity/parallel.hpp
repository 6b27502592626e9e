// Deterministic tile-parallel helper: work is split into fixed tiles pulled
// from an atomic counter; callers keep per-tile results and merge them in
// ascending tile order, so output never depends on the thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ecdensity::parallel {

template <typename Fn>
void tiles(size_t n_items, size_t tile_size, int threads, Fn fn) {
    if (n_items == 0) return;
    size_t n_tiles = (n_items + tile_size - 1) / tile_size;
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t t = next.fetch_add(1);
            if (t >= n_tiles) return;
            size_t lo = t * tile_size;
            fn(t, lo, std::min(lo + tile_size, n_items));
        }
    };
    int nt = std::max(1, threads);
    if (nt == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace ecdensity::parallel
