#pragma once

// Popcount kernels over packed indicator bitsets. These are the inner loop of
// pairwise intrusion similarity: for two bitsets of equal word count they
// return |a & b| and |a | b|.
//
// The scalar kernel is the reference. Vector kernels must return identical
// counts for every input; tests/test_bitset_kernels.cpp checks this.

#include <cstdint>
#include <span>
#include <string_view>

namespace csi::simd {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

struct OverlapCounts {
    std::uint64_t intersection = 0;
    std::uint64_t union_ = 0;

    friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

enum class SimdLevel : std::uint8_t { Scalar, Avx2, Neon };

std::string_view level_name(SimdLevel level) noexcept;

using OverlapFn = OverlapCounts (*)(std::span<const Word>, std::span<const Word>) noexcept;

namespace scalar {
OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept;
}

#if defined(CSI_HAVE_AVX2_KERNEL)
namespace avx2 {
OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept;
}
#endif

#if defined(CSI_HAVE_NEON_KERNEL)
namespace neon {
OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept;
}
#endif

/// Best level the running CPU supports and this build contains.
SimdLevel detect_level() noexcept;

/// Level used by overlap(): detect_level(), unless the CSI_SIMD environment
/// variable ("scalar", "avx2", "neon") asks for a lower available one.
SimdLevel active_level() noexcept;

/// Kernel for an explicit level; falls back to scalar if unavailable.
OverlapFn kernel_for(SimdLevel level) noexcept;

bool level_available(SimdLevel level) noexcept;

/// Dispatches to the kernel for active_level(). Spans must have equal size.
OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept;

}  // namespace csi::simd
