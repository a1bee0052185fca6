#include "pretlab/parallel.hpp"

namespace pretlab {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_parallelism(unsigned n) { g_threads.store(n); }

unsigned parallelism() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

}  // namespace pretlab
