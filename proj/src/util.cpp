#include "hierrank/util.hpp"

#include <algorithm>
#include <mutex>
#include <thread>
#include <vector>

namespace hierrank {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n < 2048) {
        body(0, n);
        return;
    }
    std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (std::size_t w = 0; w < t; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            try {
                body(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hierrank
