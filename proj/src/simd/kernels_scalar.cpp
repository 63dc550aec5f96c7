#include <cmath>

#include "hierrank/simd/kernels.hpp"

namespace hierrank::simd::detail {

// Reference implementation: straight loop over libm exp. The vector variants
// are tested against this at 1e-12 relative tolerance.
void gaussian_kernel_sums_scalar(std::span<const double> queries,
                                 std::span<const double> samples,
                                 double inv_h, std::span<double> out) {
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const double x = queries[q];
        double acc = 0.0;
        for (double s : samples) {
            double u = (x - s) * inv_h;
            acc += std::exp(-0.5 * u * u);
        }
        out[q] = acc;
    }
}

}  // namespace hierrank::simd::detail
