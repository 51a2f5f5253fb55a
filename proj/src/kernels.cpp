#include "shiftscan/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string_view>

namespace shiftscan::kernels {

namespace detail {
bool avx2_compiled() noexcept;
bool neon_compiled() noexcept;
}  // namespace detail

const char* to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "scalar";
}

BridgeMax bridge_max_scalar(std::span<const double> partial, double base, double total,
                            std::size_t first) {
    const double n = static_cast<double>(partial.size());
    BridgeMax best{-1.0, first};
    for (std::size_t j = first; j < partial.size(); ++j) {
        const double w = static_cast<double>(j + 1) / n;
        const double d = std::fabs((partial[j] - base) - w * total);
        if (d > best.value) {
            best = {d, j};
        }
    }
    return best;
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
            return detail::avx2_compiled() && __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
            return detail::neon_compiled();
    }
    return false;
}

namespace {

constexpr int kAuto = -1;
std::atomic<int> forced{kAuto};

Isa detect() noexcept {
    if (const char* env = std::getenv("SHIFTSCAN_SIMD"); env != nullptr) {
        const std::string_view want(env);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (want == to_string(isa) && isa_available(isa)) {
                return isa;
            }
        }
    }
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

}  // namespace

Isa active_isa() noexcept {
    const int f = forced.load(std::memory_order_relaxed);
    if (f != kAuto) {
        return static_cast<Isa>(f);
    }
    static const Isa detected = detect();
    return detected;
}

void force_isa(std::optional<Isa> isa) noexcept {
    if (!isa) {
        forced.store(kAuto);
    } else if (isa_available(*isa)) {
        forced.store(static_cast<int>(*isa));
    }
}

BridgeMax bridge_max(std::span<const double> partial, double base, double total,
                     std::size_t first) {
    switch (active_isa()) {
        case Isa::Avx2: return bridge_max_avx2(partial, base, total, first);
        case Isa::Neon: return bridge_max_neon(partial, base, total, first);
        case Isa::Scalar: break;
    }
    return bridge_max_scalar(partial, base, total, first);
}

}  // namespace shiftscan::kernels
