#include <atomic>

#include "hierrank/simd/kernels.hpp"
#include "hierrank/util.hpp"

namespace hierrank::simd {

namespace {

Backend detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Backend::avx2;
#endif
    return Backend::scalar;
}

std::atomic<int> forced{-1};  // -1 = auto

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return detect() == Backend::avx2;
}

Backend active_backend() {
    int f = forced.load(std::memory_order_relaxed);
    if (f >= 0) return static_cast<Backend>(f);
    static const Backend auto_detected = detect();
    return auto_detected;
}

void force_backend(Backend b) {
    if (!backend_available(b))
        fail("simd_backend_unavailable",
             std::string("backend not supported on this CPU: ") + backend_name(b));
    forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void reset_backend() { forced.store(-1, std::memory_order_relaxed); }

void gaussian_kernel_sums(std::span<const double> queries,
                          std::span<const double> samples,
                          double inv_h, std::span<double> out) {
    if (out.size() != queries.size())
        fail("kernel_size_mismatch", "output size must match query count");
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        detail::gaussian_kernel_sums_avx2(queries, samples, inv_h, out);
        return;
    }
#endif
    detail::gaussian_kernel_sums_scalar(queries, samples, inv_h, out);
}

}  // namespace hierrank::simd
