#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shiftscan/core.hpp"

namespace shiftscan {

struct CusumProfile {
    std::vector<double> stats;  // stats[k-1] = CUSUM(k), k = 1..N; stats[N-1] == 0
    double sigma2_null = 0.0;
    std::size_t tau_hat = 0;    // argmax of |CUSUM(k)| over k in 2..N, smallest k on ties
    double max_abs = 0.0;
};

/// Asymptotic CUSUM critical values by confidence level.
struct CriticalValue {
    double level;
    double value;
};

inline constexpr std::array<CriticalValue, 4> kCusumCriticalValues{{
    {0.90, 1.224},
    {0.95, 1.358},
    {0.975, 1.480},
    {0.99, 1.628},
}};

/// Throws UnsupportedLevel for levels outside the table.
double cusum_critical_value(double level);

struct AmocDecision {
    bool reject = false;
    double level = 0.0;
    double critical_value = 0.0;
    std::size_t tau_hat = 0;
    double max_abs = 0.0;
};

/// Throws DegenerateSeries for a (numerically) constant series.
CusumProfile cusum_profile(const Series& series);
CusumProfile cusum_profile(std::span<const double> values);

AmocDecision amoc_test(const Series& series, double level);
/// Same test against an explicit threshold (e.g. a simulated critical value).
AmocDecision amoc_test(std::span<const double> values, double level, double critical_value);

/// Maximum |CUSUM| over one window of a series, read from global prefix
/// sums. This is the building block shared by the AMOC test, binary
/// segmentation, WBS and the Monte Carlo.
struct WindowCusum {
    bool degenerate = false;
    double max_abs = 0.0;
    std::size_t tau_hat = 0;  // global 1-based index, last point of the left part
    double sigma2 = 0.0;
};

/// prefix = prefix_sums(values); the window is start..end (1-based, inclusive).
WindowCusum window_cusum(std::span<const double> values, std::span<const double> prefix,
                         std::size_t start, std::size_t end);

/// Empirical quantiles of max |CUSUM| over `reps` series of `n` i.i.d.
/// standard normals. Replicate r draws from stream_seed(seed, r), so the
/// table does not depend on the worker count.
std::vector<CriticalValue> simulate_critical_values(std::size_t n, std::size_t reps,
                                                    std::span<const double> levels,
                                                    std::uint64_t seed);

/// Sorted max |CUSUM| sample behind simulate_critical_values.
std::vector<double> simulate_cusum_maxima(std::size_t n, std::size_t reps, std::uint64_t seed);

/// Linear-interpolation (type 7) quantile of sorted data.
double empirical_quantile(std::span<const double> sorted, double p);

}  // namespace shiftscan
