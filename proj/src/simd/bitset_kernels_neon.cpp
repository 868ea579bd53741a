// AArch64 only. NEON is baseline there, so no runtime check is needed.

#include <arm_neon.h>

#include <bit>

#include "csi/simd/bitset_kernels.hpp"

namespace csi::simd::neon {

OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept {
    uint64x2_t acc_and = vdupq_n_u64(0);
    uint64x2_t acc_or = vdupq_n_u64(0);

    constexpr std::size_t kStride = 2;
    const std::size_t n = a.size();
    std::size_t i = 0;
    for (; i + kStride <= n; i += kStride) {
        const uint8x16_t va = vreinterpretq_u8_u64(vld1q_u64(a.data() + i));
        const uint8x16_t vb = vreinterpretq_u8_u64(vld1q_u64(b.data() + i));
        // byte popcounts widened pairwise up to 64-bit lanes
        const uint8x16_t cnt_and = vcntq_u8(vandq_u8(va, vb));
        const uint8x16_t cnt_or = vcntq_u8(vorrq_u8(va, vb));
        acc_and = vaddq_u64(acc_and, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(cnt_and))));
        acc_or = vaddq_u64(acc_or, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(cnt_or))));
    }

    OverlapCounts c{vgetq_lane_u64(acc_and, 0) + vgetq_lane_u64(acc_and, 1),
                    vgetq_lane_u64(acc_or, 0) + vgetq_lane_u64(acc_or, 1)};
    for (; i < n; ++i) {
        c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
        c.union_ += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
    }
    return c;
}

}  // namespace csi::simd::neon
