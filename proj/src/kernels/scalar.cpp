#include "lrcvar/kernels.hpp"

namespace lrcvar::kernels::detail {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = y[i] + a * x[i];
    }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            lane[l] = lane[l] + x[i + l] * y[i + l];
        }
    }
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t i = n4; i < n; ++i) {
        sum = sum + x[i] * y[i];
    }
    return sum;
}

inline double positive_part(double d) { return d > 0.0 ? d : 0.0; }

double hinge_dot_scalar(const double* w, const double* r, double level, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            lane[l] = lane[l] + w[i + l] * positive_part(r[i + l] - level);
        }
    }
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t i = n4; i < n; ++i) {
        sum = sum + w[i] * positive_part(r[i] - level);
    }
    return sum;
}

} // namespace

const KernelTable scalar_table{&axpy_scalar, &dot_scalar, &hinge_dot_scalar};

} // namespace lrcvar::kernels::detail
