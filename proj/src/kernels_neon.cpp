#include "shiftscan/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

#include <cmath>

namespace shiftscan::kernels {

namespace detail {
bool neon_compiled() noexcept {
#if defined(__aarch64__)
    return true;
#else
    return false;
#endif
}
}  // namespace detail

#if defined(__aarch64__)

BridgeMax bridge_max_neon(std::span<const double> partial, double base, double total,
                          std::size_t first) {
    const std::size_t len = partial.size();
    const double n = static_cast<double>(len);
    std::size_t j = first;
    BridgeMax best{-1.0, first};

    if (len - first >= 2) {
        const float64x2_t nv = vdupq_n_f64(n);
        const float64x2_t basev = vdupq_n_f64(base);
        const float64x2_t totalv = vdupq_n_f64(total);
        const float64x2_t two = vdupq_n_f64(2.0);
        const double init[2] = {double(j), double(j + 1)};
        float64x2_t pos = vld1q_f64(init);
        float64x2_t num = vaddq_f64(pos, vdupq_n_f64(1.0));
        float64x2_t maxv = vdupq_n_f64(-1.0);
        float64x2_t argv = pos;

        for (; j + 2 <= len; j += 2) {
            const float64x2_t p = vld1q_f64(partial.data() + j);
            const float64x2_t w = vdivq_f64(num, nv);
            // separate mul and sub: a fused multiply-subtract would round differently
            const float64x2_t prod = vmulq_f64(w, totalv);
            const float64x2_t d = vabsq_f64(vsubq_f64(vsubq_f64(p, basev), prod));
            const uint64x2_t gt = vcgtq_f64(d, maxv);
            maxv = vbslq_f64(gt, d, maxv);
            argv = vbslq_f64(gt, pos, argv);
            pos = vaddq_f64(pos, two);
            num = vaddq_f64(num, two);
        }

        double lane_max[2];
        double lane_arg[2];
        vst1q_f64(lane_max, maxv);
        vst1q_f64(lane_arg, argv);
        for (int k = 0; k < 2; ++k) {
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

BridgeMax bridge_max_neon(std::span<const double> partial, double base, double total,
                          std::size_t first) {
    return bridge_max_scalar(partial, base, total, first);
}

#endif

}  // namespace shiftscan::kernels
