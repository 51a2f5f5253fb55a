#include "shiftscan/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include <cmath>

namespace shiftscan::kernels {

namespace detail {
bool avx2_compiled() noexcept {
#if defined(__AVX2__)
    return true;
#else
    return false;
#endif
}
}  // namespace detail

#if defined(__AVX2__)

BridgeMax bridge_max_avx2(std::span<const double> partial, double base, double total,
                          std::size_t first) {
    const std::size_t len = partial.size();
    const double n = static_cast<double>(len);
    std::size_t j = first;
    BridgeMax best{-1.0, first};

    if (len - first >= 4) {
        const __m256d nv = _mm256_set1_pd(n);
        const __m256d basev = _mm256_set1_pd(base);
        const __m256d totalv = _mm256_set1_pd(total);
        const __m256d sign = _mm256_set1_pd(-0.0);
        const __m256d four = _mm256_set1_pd(4.0);
        // lane k holds position j+k; the weight numerator is position+1
        __m256d pos = _mm256_setr_pd(double(j), double(j + 1), double(j + 2), double(j + 3));
        __m256d num = _mm256_add_pd(pos, _mm256_set1_pd(1.0));
        __m256d maxv = _mm256_set1_pd(-1.0);
        __m256d argv = pos;

        for (; j + 4 <= len; j += 4) {
            const __m256d p = _mm256_loadu_pd(partial.data() + j);
            const __m256d w = _mm256_div_pd(num, nv);
            const __m256d d = _mm256_andnot_pd(
                sign, _mm256_sub_pd(_mm256_sub_pd(p, basev), _mm256_mul_pd(w, totalv)));
            const __m256d gt = _mm256_cmp_pd(d, maxv, _CMP_GT_OQ);
            maxv = _mm256_blendv_pd(maxv, d, gt);
            argv = _mm256_blendv_pd(argv, pos, gt);
            pos = _mm256_add_pd(pos, four);
            num = _mm256_add_pd(num, four);
        }

        alignas(32) double lane_max[4];
        alignas(32) double lane_arg[4];
        _mm256_store_pd(lane_max, maxv);
        _mm256_store_pd(lane_arg, argv);
        for (int k = 0; k < 4; ++k) {
            const auto idx = static_cast<std::size_t>(lane_arg[k]);
            if (lane_max[k] > best.value || (lane_max[k] == best.value && idx < best.index)) {
                best = {lane_max[k], idx};
            }
        }
    }

    for (; j < len; ++j) {
        const double w = static_cast<double>(j + 1) / n;
        const double d = std::fabs((partial[j] - base) - w * total);
        if (d > best.value) {
            best = {d, j};
        }
    }
    return best;
}

#else

BridgeMax bridge_max_avx2(std::span<const double> partial, double base, double total,
                          std::size_t first) {
    return bridge_max_scalar(partial, base, total, first);
}

#endif

}  // namespace shiftscan::kernels
