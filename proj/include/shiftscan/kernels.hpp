#pragma once

#include <cstddef>
#include <optional>
#include <span>

// Data-parallel inner loops. Each kernel has a scalar reference and SIMD
// variants that must agree with it bit for bit; bridge_max() dispatches on
// the CPU at run time.

namespace shiftscan::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* to_string(Isa isa) noexcept;

struct BridgeMax {
    double value;       // max |(partial[j] - base) - ((j+1)/n) * total|
    std::size_t index;  // first j attaining it
};

// partial[j] holds a running sum through element j+1 of a window of length
// n = partial.size(); base is subtracted from every entry (so a window can be
// read straight out of global prefix sums) and total is the window sum.
// Scans j in [first, n); requires first < n.
BridgeMax bridge_max_scalar(std::span<const double> partial, double base, double total,
                            std::size_t first);
BridgeMax bridge_max_avx2(std::span<const double> partial, double base, double total,
                          std::size_t first);
BridgeMax bridge_max_neon(std::span<const double> partial, double base, double total,
                          std::size_t first);

BridgeMax bridge_max(std::span<const double> partial, double base, double total,
                     std::size_t first);

/// Compiled in and supported by this CPU.
bool isa_available(Isa isa) noexcept;

/// ISA used by the dispatching entry points: the forced one if set, else
/// SHIFTSCAN_SIMD=scalar|avx2|neon if available, else the best available.
Isa active_isa() noexcept;

/// Pins dispatch (tests); std::nullopt restores auto-detection. Ignored for
/// unavailable ISAs.
void force_isa(std::optional<Isa> isa) noexcept;

}  // namespace shiftscan::kernels
