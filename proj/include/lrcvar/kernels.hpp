#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops used by the simplex pivots, the forward evolution
// of state distributions and the saddle-function evaluation.
//
// Every kernel has a scalar reference implementation and optional vector
// variants (AVX2 on x86-64, NEON on AArch64). The active variant is chosen at
// runtime from the CPU features; LRCVAR_ISA=scalar|avx2|neon in the
// environment overrides the choice.
//
// All variants produce bit-identical results: elementwise kernels perform the
// same IEEE operations, and reductions accumulate in four interleaved lanes
// (lane l sums the elements with index = l mod 4) that are combined as
// (l0 + l1) + (l2 + l3) before the tail is added in index order.

namespace lrcvar::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i w[i] * max(r[i] - level, 0)
    double (*hinge_dot)(const double* w, const double* r, double level, std::size_t n);
};

/// Whether the variant was compiled in and the running CPU supports it.
bool supported(Isa isa) noexcept;

/// Kernel table for a specific variant. Throws InputError if unsupported.
const KernelTable& table(Isa isa);

/// Variant currently used by the wrappers below.
Isa active_isa() noexcept;

/// Force a variant (tests, benchmarking). Throws InputError if unsupported.
void select_isa(Isa isa);

std::string_view isa_name(Isa isa) noexcept;

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    table(active_isa()).axpy(a, x.data(), y.data(), x.size());
}

inline double dot(std::span<const double> x, std::span<const double> y) {
    return table(active_isa()).dot(x.data(), y.data(), x.size());
}

inline double hinge_dot(std::span<const double> w, std::span<const double> r, double level) {
    return table(active_isa()).hinge_dot(w.data(), r.data(), level, w.size());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(LRCVAR_HAVE_AVX2)
extern const KernelTable avx2_table;
bool avx2_runtime_supported() noexcept;
#endif
#if defined(LRCVAR_HAVE_NEON)
extern const KernelTable neon_table;
#endif
} // namespace detail

} // namespace lrcvar::kernels
