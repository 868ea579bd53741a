#include <cstdlib>
#include <string_view>

#include "csi/simd/bitset_kernels.hpp"

namespace csi::simd {

std::string_view level_name(SimdLevel level) noexcept {
    switch (level) {
        case SimdLevel::Scalar: return "scalar";
        case SimdLevel::Avx2: return "avx2";
        case SimdLevel::Neon: return "neon";
    }
    return "scalar";
}

bool level_available(SimdLevel level) noexcept {
    switch (level) {
        case SimdLevel::Scalar:
            return true;
        case SimdLevel::Avx2:
#if defined(CSI_HAVE_AVX2_KERNEL)
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case SimdLevel::Neon:
#if defined(CSI_HAVE_NEON_KERNEL)
            return true;
#else
            return false;
#endif
    }
    return false;
}

SimdLevel detect_level() noexcept {
    if (level_available(SimdLevel::Avx2)) return SimdLevel::Avx2;
    if (level_available(SimdLevel::Neon)) return SimdLevel::Neon;
    return SimdLevel::Scalar;
}

OverlapFn kernel_for(SimdLevel level) noexcept {
    if (!level_available(level)) return &scalar::overlap;
    switch (level) {
#if defined(CSI_HAVE_AVX2_KERNEL)
        case SimdLevel::Avx2: return &avx2::overlap;
#endif
#if defined(CSI_HAVE_NEON_KERNEL)
        case SimdLevel::Neon: return &neon::overlap;
#endif
        default: return &scalar::overlap;
    }
}

SimdLevel active_level() noexcept {
    static const SimdLevel level = [] {
        const SimdLevel best = detect_level();
        const char* env = std::getenv("CSI_SIMD");
        if (env == nullptr) return best;
        const std::string_view want(env);
        for (SimdLevel l : {SimdLevel::Scalar, SimdLevel::Avx2, SimdLevel::Neon}) {
            if (level_name(l) == want && level_available(l)) return l;
        }
        return best;
    }();
    return level;
}

OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept {
    static const OverlapFn fn = kernel_for(active_level());
    return fn(a, b);
}

}  // namespace csi::simd
