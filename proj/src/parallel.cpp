#include "latticeharm/parallel.hpp"

namespace latticeharm {

namespace {

std::atomic<int>& thread_limit() {
    static std::atomic<int> limit{0};  // 0 = hardware default
    return limit;
}

}  // namespace

int max_threads() {
    const int limit = thread_limit().load();
    if (limit > 0) return limit;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_max_threads(int n) { thread_limit().store(n < 1 ? 0 : n); }

}  // namespace latticeharm
