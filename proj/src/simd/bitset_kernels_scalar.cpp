#include <bit>

#include "csi/simd/bitset_kernels.hpp"

namespace csi::simd::scalar {

OverlapCounts overlap(std::span<const Word> a, std::span<const Word> b) noexcept {
    OverlapCounts c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
        c.union_ += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
    }
    return c;
}

}  // namespace csi::simd::scalar
