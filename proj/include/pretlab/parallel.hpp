#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace pretlab {

// Process-wide worker count. 0 means hardware concurrency.
void set_parallelism(unsigned n);
unsigned parallelism();

/// Run body(b) for b in [0, nblocks) on the worker pool and return the
/// per-block results in block order. Callers fold the vector left to right,
/// so the answer does not depend on how many threads ran.
template <class R, class F>
std::vector<R> map_blocks(std::size_t nblocks, F&& body) {
    std::vector<R> out(nblocks);
    unsigned nt = std::min<std::size_t>(parallelism(), nblocks);
    if (nt <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) out[b] = body(b);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (unsigned i = 0; i < nt; ++i) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= nblocks || failed.load()) return;
                try {
                    out[b] = body(b);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace pretlab
