#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftscan/error.hpp"

namespace shiftscan {

// Changepoint convention used everywhere in the library: a changepoint at
// index tau (1-based) is the LAST observation of its regime, so the mean
// shifts strictly after tau. Admissible taus are 1..N-1; every regime holds
// at least one observation and a series of length N has 2^(N-1) distinct
// configurations.

enum class SeriesKind { Continuous, Count };

const char* to_string(SeriesKind kind) noexcept;

/// Ordered observations with their time labels. Immutable once built.
class Series {
public:
    /// Times default to 1..N.
    explicit Series(std::vector<double> values, SeriesKind kind = SeriesKind::Continuous);
    Series(std::vector<double> values, std::vector<std::int64_t> times,
           SeriesKind kind = SeriesKind::Continuous);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const std::int64_t> times() const noexcept { return times_; }
    SeriesKind kind() const noexcept { return kind_; }

    double value(std::size_t index) const { return values_.at(index - 1); }
    std::int64_t time(std::size_t index) const { return times_.at(index - 1); }

private:
    std::vector<double> values_;
    std::vector<std::int64_t> times_;
    SeriesKind kind_;
};

class ChangepointConfiguration {
public:
    ChangepointConfiguration() = default;
    /// Throws ConfigurationInvalid unless taus are strictly increasing and >= 1.
    explicit ChangepointConfiguration(std::vector<std::size_t> taus);

    std::span<const std::size_t> taus() const noexcept { return taus_; }
    std::size_t count() const noexcept { return taus_.size(); }
    bool empty() const noexcept { return taus_.empty(); }

    /// True when every tau lies in 1..n-1.
    bool valid_for(std::size_t n) const noexcept;
    /// Throws ConfigurationInvalid when !valid_for(n).
    void require_valid_for(std::size_t n) const;

    std::string to_string() const;

    friend bool operator==(const ChangepointConfiguration&,
                           const ChangepointConfiguration&) = default;

private:
    std::vector<std::size_t> taus_;
};

/// Inclusive, 1-based.
struct Segment {
    std::size_t start;
    std::size_t end;

    std::size_t length() const noexcept { return end - start + 1; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

using RegimePartition = std::vector<Segment>;

RegimePartition partition(const ChangepointConfiguration& config, std::size_t n);
ChangepointConfiguration configuration_of(const RegimePartition& regimes);

/// Yields every subset of {1..n-1} once, in ascending bitmask order where
/// bit j stands for tau = j+1.
class ConfigurationEnumerator {
public:
    explicit ConfigurationEnumerator(std::size_t n);

    std::optional<ChangepointConfiguration> next();
    std::uint64_t total() const noexcept { return total_; }

    static ChangepointConfiguration decode(std::uint64_t mask);

private:
    std::uint64_t next_mask_ = 0;
    std::uint64_t total_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// out[k] = x[0] + ... + x[k-1], out[0] = 0; length x.size()+1.
std::vector<double> prefix_sums(std::span<const double> x);

double mean(std::span<const double> x);

}  // namespace shiftscan
