#pragma once

#include <span>

namespace hierrank::simd {

// The kernel-density inner loop dominates fitting/estimation runtime, so it
// ships in two equivalence-tested variants: a plain scalar reference and an
// AVX2+FMA version with a polynomial exp. The active variant is picked at
// runtime from CPU capabilities; force_backend exists for tests and debugging.
enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);
Backend active_backend();
void force_backend(Backend b);  // Error if unavailable on this CPU
void reset_backend();           // back to auto-detection

// out[q] = Σ_i exp(-0.5 * ((queries[q] - samples[i]) * inv_h)^2)
// Plain Gaussian kernel sums; callers apply the 1/(N·h·sqrt(2π)) scaling.
// samples may be empty (out is zeroed). out.size() must equal queries.size().
void gaussian_kernel_sums(std::span<const double> queries,
                          std::span<const double> samples,
                          double inv_h,
                          std::span<double> out);

namespace detail {
void gaussian_kernel_sums_scalar(std::span<const double> queries,
                                 std::span<const double> samples,
                                 double inv_h, std::span<double> out);
#if defined(__x86_64__) || defined(_M_X64)
void gaussian_kernel_sums_avx2(std::span<const double> queries,
                               std::span<const double> samples,
                               double inv_h, std::span<double> out);
#endif
}  // namespace detail

}  // namespace hierrank::simd
