#include "shiftscan/cusum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shiftscan/kernels.hpp"
#include "shiftscan/parallel.hpp"

namespace shiftscan {

double cusum_critical_value(double level) {
    for (const auto& cv : kCusumCriticalValues) {
        if (std::fabs(cv.level - level) < 1e-9) {
            return cv.value;
        }
    }
    throw Error(ErrorCode::UnsupportedLevel,
                "no tabulated CUSUM critical value for level " + std::to_string(level) +
                    " (use 0.90, 0.95, 0.975 or 0.99, or simulate one)");
}

namespace {

// Variance below (1e-12 * scale)^2 is rounding noise, not signal.
constexpr double kRelativeSpreadFloor = 1e-12;

}  // namespace

WindowCusum window_cusum(std::span<const double> values, std::span<const double> prefix,
                         std::size_t start, std::size_t end) {
    WindowCusum out;
    const std::size_t len = end - start + 1;
    const auto window = values.subspan(start - 1, len);

    const double base = prefix[start - 1];
    const double total = prefix[end] - base;
    const double centre = total / static_cast<double>(len);
    CompensatedSum ss;
    double scale = 0.0;
    for (double x : window) {
        const double d = x - centre;
        ss.add(d * d);
        scale = std::max(scale, std::fabs(x));
    }
    out.sigma2 = ss.value() / static_cast<double>(len - 1);
    const double sigma = std::sqrt(out.sigma2);
    if (!(sigma > kRelativeSpreadFloor * scale) || out.sigma2 == 0.0) {
        out.degenerate = true;
        return out;
    }

    // k ranges over 2..len, i.e. partial index j = k-1 over 1..len-1
    const auto partial = prefix.subspan(start, len);
    const auto best = kernels::bridge_max(partial, base, total, 1);
    out.max_abs = best.value / (sigma * std::sqrt(static_cast<double>(len)));
    out.tau_hat = start + best.index;
    return out;
}

CusumProfile cusum_profile(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorCode::InvalidSeries, "CUSUM needs at least 2 observations");
    }
    const auto prefix = prefix_sums(values);
    const std::size_t n = values.size();
    const auto w = window_cusum(values, prefix, 1, n);
    if (w.degenerate) {
        throw Error(ErrorCode::DegenerateSeries, "series has zero sample variance");
    }

    CusumProfile profile;
    profile.sigma2_null = w.sigma2;
    profile.tau_hat = w.tau_hat;
    profile.max_abs = w.max_abs;
    profile.stats.resize(n);
    const double total = prefix[n];
    const double denom = std::sqrt(w.sigma2) * std::sqrt(static_cast<double>(n));
    for (std::size_t k = 1; k <= n; ++k) {
        const double wk = static_cast<double>(k) / static_cast<double>(n);
        profile.stats[k - 1] = (prefix[k] - wk * total) / denom;
    }
    profile.stats[n - 1] = 0.0;
    return profile;
}

CusumProfile cusum_profile(const Series& series) {
    return cusum_profile(series.values());
}

AmocDecision amoc_test(std::span<const double> values, double level, double critical_value) {
    const auto prefix = prefix_sums(values);
    const auto w = window_cusum(values, prefix, 1, values.size());
    if (w.degenerate) {
        throw Error(ErrorCode::DegenerateSeries, "series has zero sample variance");
    }
    AmocDecision d;
    d.level = level;
    d.critical_value = critical_value;
    d.tau_hat = w.tau_hat;
    d.max_abs = w.max_abs;
    d.reject = w.max_abs > critical_value;
    return d;
}

AmocDecision amoc_test(const Series& series, double level) {
    return amoc_test(series.values(), level, cusum_critical_value(level));
}

std::vector<double> simulate_cusum_maxima(std::size_t n, std::size_t reps, std::uint64_t seed) {
    if (n < 100) {
        throw Error(ErrorCode::InvalidArgument, "critical-value simulation needs n >= 100");
    }
    if (reps < 1000) {
        throw Error(ErrorCode::InvalidArgument, "critical-value simulation needs reps >= 1000");
    }

    std::vector<double> maxima(reps, 0.0);
    // Fixed block size, so work units (and results) don't depend on the thread count.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (reps + kBlock - 1) / kBlock;
    parallel_for(blocks, [&](std::size_t b) {
        std::vector<double> x(n);
        std::vector<double> prefix(n + 1);
        const std::size_t end = std::min(reps, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
            std::mt19937_64 rng(stream_seed(seed, r));
            std::normal_distribution<double> normal(0.0, 1.0);
            CompensatedSum acc;
            prefix[0] = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                x[t] = normal(rng);
                acc.add(x[t]);
                prefix[t + 1] = acc.value();
            }
            const auto w = window_cusum(x, prefix, 1, n);
            maxima[r] = w.degenerate ? 0.0 : w.max_abs;
        }
    });
    std::sort(maxima.begin(), maxima.end());
    return maxima;
}

double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
    }
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<CriticalValue> simulate_critical_values(std::size_t n, std::size_t reps,
                                                    std::span<const double> levels,
                                                    std::uint64_t seed) {
    for (double level : levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "levels must lie in (0, 1)");
        }
    }
    const auto maxima = simulate_cusum_maxima(n, reps, seed);
    std::vector<CriticalValue> table;
    table.reserve(levels.size());
    for (double level : levels) {
        table.push_back({level, empirical_quantile(maxima, level)});
    }
    return table;
}

}  // namespace shiftscan
