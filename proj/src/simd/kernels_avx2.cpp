// AVX2+FMA variant of the KDE inner loop. Compiled with -mavx2 -mfma; only
// reached through runtime dispatch on CPUs that report both features.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

#include "hierrank/simd/kernels.hpp"

namespace hierrank::simd::detail {

namespace {

// exp(x) for x in [-745, 709]: Cody-Waite range reduction, degree-12 Taylor
// on |r| <= ln2/2 (truncation < 7e-15 relative), two-step 2^n scaling so the
// gradual-underflow region still comes out right. Arguments below -745 are
// flushed to exactly 0 via the caller's mask.
inline __m256d exp_pd(__m256d x) {
    const __m256d min_arg = _mm256_set1_pd(-745.0);
    const __m256d zero_mask = _mm256_cmp_pd(x, min_arg, _CMP_LT_OQ);
    x = _mm256_max_pd(x, min_arg);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    __m256d p = _mm256_set1_pd(2.08767569878680989792e-09);  // 1/12!
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.50521083854417187751e-08));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.75573192239858906526e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.75573192239858906526e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873015873e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.98412698412698412698e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.38888888888888888889e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.33333333333333333333e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.16666666666666666667e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.66666666666666666667e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    __m128i ni = _mm256_cvtpd_epi32(n);
    __m128i n1 = _mm_srai_epi32(ni, 1);
    __m128i n2 = _mm_sub_epi32(ni, n1);
    const __m256i bias = _mm256_set1_epi64x(1023);
    __m256d s1 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52));
    __m256d s2 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52));

    __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);
    return _mm256_andnot_pd(zero_mask, res);
}

inline double hsum(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

void gaussian_kernel_sums_avx2(std::span<const double> queries,
                               std::span<const double> samples,
                               double inv_h, std::span<double> out) {
    const std::size_t n = samples.size();
    const __m256d vih = _mm256_set1_pd(inv_h);
    const __m256d vnh = _mm256_set1_pd(-0.5);

    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        const __m256d q = _mm256_set1_pd(queries[qi]);
        __m256d a0 = _mm256_setzero_pd();
        __m256d a1 = _mm256_setzero_pd();
        __m256d a2 = _mm256_setzero_pd();
        __m256d a3 = _mm256_setzero_pd();

        std::size_t i = 0;
        for (; i + 16 <= n; i += 16) {
            __m256d u0 = _mm256_mul_pd(_mm256_sub_pd(q, _mm256_loadu_pd(&samples[i])), vih);
            __m256d u1 = _mm256_mul_pd(_mm256_sub_pd(q, _mm256_loadu_pd(&samples[i + 4])), vih);
            __m256d u2 = _mm256_mul_pd(_mm256_sub_pd(q, _mm256_loadu_pd(&samples[i + 8])), vih);
            __m256d u3 = _mm256_mul_pd(_mm256_sub_pd(q, _mm256_loadu_pd(&samples[i + 12])), vih);
            a0 = _mm256_add_pd(a0, exp_pd(_mm256_mul_pd(vnh, _mm256_mul_pd(u0, u0))));
            a1 = _mm256_add_pd(a1, exp_pd(_mm256_mul_pd(vnh, _mm256_mul_pd(u1, u1))));
            a2 = _mm256_add_pd(a2, exp_pd(_mm256_mul_pd(vnh, _mm256_mul_pd(u2, u2))));
            a3 = _mm256_add_pd(a3, exp_pd(_mm256_mul_pd(vnh, _mm256_mul_pd(u3, u3))));
        }
        for (; i + 4 <= n; i += 4) {
            __m256d u = _mm256_mul_pd(_mm256_sub_pd(q, _mm256_loadu_pd(&samples[i])), vih);
            a0 = _mm256_add_pd(a0, exp_pd(_mm256_mul_pd(vnh, _mm256_mul_pd(u, u))));
        }
        if (i < n) {
            // Pad the last vector with far-away pseudo-samples whose kernel
            // value flushes to exactly 0, keeping the sum untouched.
            alignas(32) double tail[4];
            for (int j = 0; j < 4; ++j)
                tail[j] = (i + j < n) ? samples[i + j] : queries[qi] + 1.0e160;
            __m256d u = _mm256_mul_pd(_mm256_sub_pd(q, _mm256_load_pd(tail)), vih);
            a0 = _mm256_add_pd(a0, exp_pd(_mm256_mul_pd(vnh, _mm256_mul_pd(u, u))));
        }

        out[qi] = (hsum(a0) + hsum(a1)) + (hsum(a2) + hsum(a3));
    }
}

}  // namespace hierrank::simd::detail

#endif  // x86_64
