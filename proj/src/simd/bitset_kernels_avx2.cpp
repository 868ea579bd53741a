// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "csi/simd/bitset_kernels.hpp"

namespace csi::simd::avx2 {

namespace {

// Per-byte popcount via a 16-entry nibble table, then horizontal byte sums
// into four 64-bit lanes with SAD against zero.
inline __m256i popcount_lanes(__m256i v, __m256i lut, __m256i low_mask) {
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t hsum(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i acc_and = _mm256_setzero_si256();
    __m256i acc_or = _mm256_setzero_si256();

    constexpr std::size_t kStride = 4;  // 4 x 64-bit words per register
    const std::size_t n = a.size();
    std::size_t i = 0;
    for (; i + kStride <= n; i += kStride) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        acc_and = _mm256_add_epi64(acc_and, popcount_lanes(_mm256_and_si256(va, vb), lut, low_mask));
        acc_or = _mm256_add_epi64(acc_or, popcount_lanes(_mm256_or_si256(va, vb), lut, low_mask));
    }

    OverlapCounts c{hsum(acc_and), hsum(acc_or)};
    for (; i < n; ++i) {
        c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
        c.union_ += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
    }
    return c;
}

}  // namespace csi::simd::avx2
