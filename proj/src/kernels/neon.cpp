#include "lrcvar/kernels.hpp"

#include <arm_neon.h>

// Two float64x2 registers give the same four-lane accumulation layout as the
// scalar reference and the AVX2 variant.

namespace lrcvar::kernels::detail {
namespace {

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
    }
    for (std::size_t i = n2; i < n; ++i) {
        y[i] = y[i] + a * x[i];
    }
}

double combine(float64x2_t lo, float64x2_t hi) {
    // lo holds lanes 0,1 and hi holds lanes 2,3
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
           (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    double sum = combine(lo, hi);
    for (std::size_t i = n4; i < n; ++i) {
        sum = sum + x[i] * y[i];
    }
    return sum;
}

double hinge_dot_neon(const double* w, const double* r, double level, std::size_t n) {
    const float64x2_t vlevel = vdupq_n_f64(level);
    const float64x2_t zero = vdupq_n_f64(0.0);
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const float64x2_t e0 = vmaxq_f64(vsubq_f64(vld1q_f64(r + i), vlevel), zero);
        const float64x2_t e1 = vmaxq_f64(vsubq_f64(vld1q_f64(r + i + 2), vlevel), zero);
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(w + i), e0));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(w + i + 2), e1));
    }
    double sum = combine(lo, hi);
    for (std::size_t i = n4; i < n; ++i) {
        const double d = r[i] - level;
        sum = sum + w[i] * (d > 0.0 ? d : 0.0);
    }
    return sum;
}

} // namespace

const KernelTable neon_table{&axpy_neon, &dot_neon, &hinge_dot_neon};

} // namespace lrcvar::kernels::detail
