#include "lrcvar/kernels.hpp"

#include "lrcvar/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace lrcvar::kernels {
namespace {

Isa detect_best() noexcept {
#if defined(LRCVAR_HAVE_AVX2)
    if (detail::avx2_runtime_supported()) return Isa::avx2;
#endif
#if defined(LRCVAR_HAVE_NEON)
    return Isa::neon;
#endif
    return Isa::scalar;
}

Isa initial_isa() {
    const char* env = std::getenv("LRCVAR_ISA");
    if (env != nullptr) {
        const std::string requested(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (requested == isa_name(isa) && supported(isa)) return isa;
        }
    }
    return detect_best();
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

} // namespace

bool supported(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(LRCVAR_HAVE_AVX2)
        return detail::avx2_runtime_supported();
#else
        return false;
#endif
    case Isa::neon:
#if defined(LRCVAR_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return detail::scalar_table;
    case Isa::avx2:
#if defined(LRCVAR_HAVE_AVX2)
        if (detail::avx2_runtime_supported()) return detail::avx2_table;
#endif
        break;
    case Isa::neon:
#if defined(LRCVAR_HAVE_NEON)
        return detail::neon_table;
#endif
        break;
    }
    throw InputError("kernel variant '" + std::string(isa_name(isa)) +
                     "' is not available on this machine");
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void select_isa(Isa isa) {
    if (!supported(isa)) {
        throw InputError("kernel variant '" + std::string(isa_name(isa)) +
                         "' is not available on this machine");
    }
    current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    case Isa::neon:
        return "neon";
    }
    return "unknown";
}

} // namespace lrcvar::kernels
