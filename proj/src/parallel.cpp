#include "seglab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace seglab {

int thread_count() {
    if (const char* env = std::getenv("SEG_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int k = 0; k < n; ++k) body(k);
        return;
    }
    std::exception_ptr first;
    std::mutex mu;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
            const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
            pool.emplace_back([lo, hi, &body, &first, &mu] {
                try {
                    for (int k = lo; k < hi; ++k) body(k);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!first) first = std::current_exception();
                }
            });
        }
    }
    if (first) std::rethrow_exception(first);
}

} // namespace seglab
