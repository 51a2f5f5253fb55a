#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "shiftscan/cusum.hpp"
#include "shiftscan/kernels.hpp"

using namespace shiftscan;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed, double shift_at = 0, double shift = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = normal(rng) + (t + 1 > shift_at && shift_at > 0 ? shift : 0.0);
    }
    return x;
}

// CUSUM(k) as a scaled difference of the left and right segment means,
// evaluated with plain loops (no prefix sums).
std::vector<double> mean_difference_form(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double left = 0.0, right = 0.0;
        for (std::size_t t = 0; t < k; ++t) left += x[t];
        for (std::size_t t = k; t < n; ++t) right += x[t];
        left /= static_cast<double>(k);
        right /= static_cast<double>(n - k);
        const double kk = static_cast<double>(k), nn = static_cast<double>(n);
        out[k - 1] = kk * (nn - kk) / nn * (left - right) / (sigma * std::sqrt(nn));
    }
    return out;
}

}  // namespace

TEST_CASE("hand-evaluated CUSUM profile") {
    const auto p = cusum_profile(std::vector<double>{1, 1, 1, 5, 5, 5});
    CHECK(p.sigma2_null == doctest::Approx(4.8).epsilon(1e-14));
    CHECK(p.tau_hat == 3);
    CHECK(std::fabs(p.max_abs - 6.0 / std::sqrt(28.8)) < 1e-12);
    REQUIRE(p.stats.size() == 6);
    CHECK(p.stats[5] == 0.0);
    // numerators -2,-4,-6,-4,-2 over sqrt(28.8)
    const double d = std::sqrt(28.8);
    const std::vector<double> want{-2 / d, -4 / d, -6 / d, -4 / d, -2 / d, 0.0};
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(std::fabs(p.stats[k] - want[k]) < 1e-12);
    }
}

TEST_CASE("constant series are degenerate") {
    for (double c : {0.0, 1.0, -3.25, 0.1}) {
        try {
            cusum_profile(std::vector<double>(10, c));
            FAIL("expected degenerate-series error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateSeries);
        }
    }
}

TEST_CASE("prefix-sum and mean-difference forms agree") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = normals(50 + seed * 7, seed, 20, seed % 2 ? 1.5 : -0.5);
        const auto p = cusum_profile(x);
        const auto oracle = mean_difference_form(x);
        for (std::size_t k = 0; k < x.size(); ++k) {
            REQUIRE(std::fabs(p.stats[k] - oracle[k]) < 1e-10);
        }
    }
}

TEST_CASE("argmax is the first maximiser over k >= 2") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto x = normals(80, seed, 40, 1.0);
        const auto p = cusum_profile(x);
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t k = 2; k <= x.size(); ++k) {
            if (std::fabs(p.stats[k - 1]) > best) {
                best = std::fabs(p.stats[k - 1]);
                arg = k;
            }
        }
        CHECK(p.tau_hat == arg);
        CHECK(p.max_abs == doctest::Approx(best).epsilon(1e-13));
    }
}

TEST_CASE("reversal mirrors the changepoint estimate") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto x = normals(60, seed, 25, 2.0);
        const auto fwd = cusum_profile(x);
        std::reverse(x.begin(), x.end());
        const auto rev = cusum_profile(x);
        CHECK(rev.tau_hat == x.size() - fwd.tau_hat);
        CHECK(std::fabs(rev.max_abs - fwd.max_abs) < 1e-12);
    }
}

TEST_CASE("profile is invariant under affine maps") {
    const auto x = normals(120, 7, 60, 1.2);
    const auto base = cusum_profile(x);
    for (auto [a, b] : {std::pair{3.0, -11.0}, std::pair{0.01, 500.0}, std::pair{-2.0, 4.0}}) {
        std::vector<double> y(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) y[t] = a * x[t] + b;
        const auto p = cusum_profile(y);
        const double sign = a > 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            REQUIRE(std::fabs(p.stats[k] - sign * base.stats[k]) < 1e-9);
        }
        CHECK(p.tau_hat == base.tau_hat);
        CHECK(std::fabs(p.max_abs - base.max_abs) < 1e-9);
    }
}

TEST_CASE("AMOC decision against the tabulated critical values") {
    const Series s({1, 1, 1, 5, 5, 5});
    const auto d = amoc_test(s, 0.95);
    CHECK_FALSE(d.reject);
    CHECK(d.critical_value == 1.358);
    CHECK(d.tau_hat == 3);

    CHECK(cusum_critical_value(0.90) == 1.224);
    CHECK(cusum_critical_value(0.975) == 1.480);
    CHECK(cusum_critical_value(0.99) == 1.628);
    try {
        amoc_test(s, 0.8);
        FAIL("expected unsupported-level error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedLevel);
    }

    const Series shifted(normals(100, 3, 50, 3.0));
    const auto r = amoc_test(shifted, 0.99);
    CHECK(r.reject);
    CHECK(r.tau_hat >= 48);
    CHECK(r.tau_hat <= 52);
}

TEST_CASE("profile does not depend on the kernel ISA") {
    const auto x = normals(333, 11, 100, 0.7);
    kernels::force_isa(kernels::Isa::Scalar);
    const auto a = cusum_profile(x);
    kernels::force_isa(std::nullopt);
    const auto b = cusum_profile(x);
    CHECK(a.tau_hat == b.tau_hat);
    CHECK(a.max_abs == b.max_abs);
}

TEST_CASE("empirical quantiles interpolate linearly") {
    const std::vector<double> s{1, 2, 3, 4};
    CHECK(empirical_quantile(s, 0.5) == 2.5);
    CHECK(empirical_quantile(s, 0.0) == 1.0);
    CHECK(empirical_quantile(s, 1.0) == 4.0);
}

TEST_CASE("simulated critical values are seed-deterministic and thread-independent") {
    const std::vector<double> levels{0.90, 0.95};
    const auto a = simulate_critical_values(100, 2000, levels, 9);
    const auto b = simulate_critical_values(100, 2000, levels, 9);
    ::setenv("SHIFTSCAN_THREADS", "3", 1);
    const auto c = simulate_critical_values(100, 2000, levels, 9);
    ::unsetenv("SHIFTSCAN_THREADS");
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].value == b[i].value);
        CHECK(a[i].value == c[i].value);
    }
    // finite-n maxima sit a little under the asymptotic values
    CHECK(a[1].value > 1.2);
    CHECK(a[1].value < 1.45);
    CHECK(a[0].value < a[1].value);

    CHECK_THROWS_AS(simulate_critical_values(99, 2000, levels, 1), Error);
    CHECK_THROWS_AS(simulate_critical_values(100, 999, levels, 1), Error);
}

TEST_CASE("null rejection rate is near the nominal level") {
    int rejections = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
        const Series s(normals(200, 1000 + r));
        rejections += amoc_test(s, 0.95).reject ? 1 : 0;
    }
    const double rate = static_cast<double>(rejections) / reps;
    CHECK(rate > 0.025);
    CHECK(rate < 0.075);
}
