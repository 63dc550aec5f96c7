#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hierrank/rng.hpp"
#include "hierrank/simd/kernels.hpp"
#include "hierrank/util.hpp"

using namespace hierrank;

namespace {

// Independent straight-line oracle, kept dumb on purpose.
std::vector<double> oracle(const std::vector<double>& q, const std::vector<double>& x,
                           double inv_h) {
    std::vector<double> out(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (double s : x) {
            const double z = (q[i] - s) * inv_h;
            out[i] += std::exp(-0.5 * z * z);
        }
    return out;
}

struct BackendGuard {
    ~BackendGuard() { simd::reset_backend(); }
};

}  // namespace

TEST_CASE("backend plumbing") {
    CHECK(std::string(simd::backend_name(simd::Backend::scalar)) == "scalar");
    CHECK(std::string(simd::backend_name(simd::Backend::avx2)) == "avx2");
    CHECK(simd::backend_available(simd::Backend::scalar));

    BackendGuard guard;
    simd::force_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    simd::reset_backend();
    if (!simd::backend_available(simd::Backend::avx2)) {
        CHECK_THROWS_AS(simd::force_backend(simd::Backend::avx2), Error);
    } else {
        simd::force_backend(simd::Backend::avx2);
        CHECK(simd::active_backend() == simd::Backend::avx2);
    }
}

TEST_CASE("empty samples zero the output") {
    std::vector<double> q = {0.1, 0.5, 0.9};
    std::vector<double> out(q.size(), 42.0);
    simd::gaussian_kernel_sums(q, {}, 10.0, out);
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("scalar variant matches the oracle") {
    Rng rng(314);
    for (int n : {1, 2, 3, 5, 50}) {
        std::vector<double> q(17), x(n);
        for (auto& v : q) v = rng.uniform();
        for (auto& v : x) v = rng.uniform();
        std::vector<double> got(q.size());
        simd::detail::gaussian_kernel_sums_scalar(q, x, 7.0, got);
        auto want = oracle(q, x, 7.0);
        for (std::size_t i = 0; i < q.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13));
    }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("variants agree across shapes") {
    if (!simd::backend_available(simd::Backend::avx2)) return;
    Rng rng(2718);
    // edge sizes around the vector width plus a realistic block
    for (int nq : {0, 1, 3, 4, 5, 8, 137}) {
        for (int ns : {0, 1, 2, 4, 7, 64, 211}) {
            std::vector<double> q(nq), x(ns);
            for (auto& v : q) v = rng.uniform();
            for (auto& v : x) v = rng.uniform();
            const double inv_h = 1.0 / 0.07;
            std::vector<double> a(nq), b(nq);
            simd::detail::gaussian_kernel_sums_scalar(q, x, inv_h, a);
            simd::detail::gaussian_kernel_sums_avx2(q, x, inv_h, b);
            for (int i = 0; i < nq; ++i) {
                const double scale = std::max(1.0, std::abs(a[i]));
                CHECK(std::abs(a[i] - b[i]) / scale <= 1e-12);
            }
        }
    }
}
#endif

TEST_CASE("dispatch respects the forced backend") {
    BackendGuard guard;
    std::vector<double> q = {0.25, 0.75};
    std::vector<double> x = {0.3, 0.5, 0.8};
    std::vector<double> scalar_out(2), forced_out(2);

    simd::force_backend(simd::Backend::scalar);
    simd::gaussian_kernel_sums(q, x, 5.0, scalar_out);
    auto want = oracle(q, x, 5.0);
    for (int i = 0; i < 2; ++i) CHECK(scalar_out[i] == doctest::Approx(want[i]));

    if (simd::backend_available(simd::Backend::avx2)) {
        simd::force_backend(simd::Backend::avx2);
        simd::gaussian_kernel_sums(q, x, 5.0, forced_out);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(forced_out[i] - scalar_out[i]) <= 1e-12);
    }
}
