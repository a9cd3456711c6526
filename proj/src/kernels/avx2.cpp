#include "lrcvar/kernels.hpp"

#include <immintrin.h>

// Compiled with per-function target attributes so the rest of the library
// keeps the baseline ISA; the dispatcher only routes here after a CPUID check.

namespace lrcvar::kernels::detail {
namespace {

__attribute__((target("avx2"))) void axpy_avx2(double a, const double* x, double* y,
                                                std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (std::size_t i = n4; i < n; ++i) {
        y[i] = y[i] + a * x[i];
    }
}

__attribute__((target("avx2"))) double reduce_lanes(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

__attribute__((target("avx2"))) double dot_avx2(const double* x, const double* y,
                                                std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    double sum = reduce_lanes(acc);
    for (std::size_t i = n4; i < n; ++i) {
        sum = sum + x[i] * y[i];
    }
    return sum;
}

__attribute__((target("avx2"))) double hinge_dot_avx2(const double* w, const double* r,
                                                      double level, std::size_t n) {
    const __m256d vlevel = _mm256_set1_pd(level);
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d excess = _mm256_max_pd(_mm256_sub_pd(_mm256_loadu_pd(r + i), vlevel), zero);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), excess));
    }
    double sum = reduce_lanes(acc);
    for (std::size_t i = n4; i < n; ++i) {
        const double d = r[i] - level;
        sum = sum + w[i] * (d > 0.0 ? d : 0.0);
    }
    return sum;
}

} // namespace

const KernelTable avx2_table{&axpy_avx2, &dot_avx2, &hinge_dot_avx2};

bool avx2_runtime_supported() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
}

} // namespace lrcvar::kernels::detail
