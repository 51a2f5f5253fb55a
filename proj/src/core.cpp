#include "shiftscan/core.hpp"

#include <numeric>
#include <sstream>

namespace shiftscan {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidSeries: return "invalid-series";
        case ErrorCode::ConfigurationInvalid: return "configuration-invalid";
        case ErrorCode::DegenerateSeries: return "degenerate-series";
        case ErrorCode::UnsupportedLevel: return "unsupported-level";
        case ErrorCode::InvalidCount: return "invalid-count";
        case ErrorCode::SingularFit: return "singular-fit";
        case ErrorCode::InsufficientOverlap: return "insufficient-overlap";
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::SearchTooLarge: return "search-too-large";
        case ErrorCode::Parse: return "parse-error";
    }
    return "unknown";
}

const char* to_string(SeriesKind kind) noexcept {
    return kind == SeriesKind::Count ? "count" : "continuous";
}

namespace {

std::vector<std::int64_t> default_times(std::size_t n) {
    std::vector<std::int64_t> times(n);
    std::iota(times.begin(), times.end(), std::int64_t{1});
    return times;
}

}  // namespace

Series::Series(std::vector<double> values, SeriesKind kind)
    : Series(values, default_times(values.size()), kind) {}

Series::Series(std::vector<double> values, std::vector<std::int64_t> times, SeriesKind kind)
    : values_(std::move(values)), times_(std::move(times)), kind_(kind) {
    if (values_.size() < 2) {
        throw Error(ErrorCode::InvalidSeries, "series needs at least 2 observations");
    }
    if (values_.size() != times_.size()) {
        throw Error(ErrorCode::InvalidSeries, "values and times differ in length");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (times_[i] <= times_[i - 1]) {
            throw Error(ErrorCode::InvalidSeries,
                        "times must be strictly increasing (position " + std::to_string(i + 1) + ")");
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidSeries,
                        "non-finite value at position " + std::to_string(i + 1));
        }
        if (kind_ == SeriesKind::Count && (v < 0.0 || v != std::floor(v))) {
            throw Error(ErrorCode::InvalidCount,
                        "count series needs nonnegative integers (position " + std::to_string(i + 1) + ")");
        }
    }
}

ChangepointConfiguration::ChangepointConfiguration(std::vector<std::size_t> taus)
    : taus_(std::move(taus)) {
    for (std::size_t i = 0; i < taus_.size(); ++i) {
        if (taus_[i] < 1) {
            throw Error(ErrorCode::ConfigurationInvalid, "changepoint indices start at 1");
        }
        if (i > 0 && taus_[i] <= taus_[i - 1]) {
            throw Error(ErrorCode::ConfigurationInvalid,
                        "changepoints must be strictly increasing: " + to_string());
        }
    }
}

bool ChangepointConfiguration::valid_for(std::size_t n) const noexcept {
    return taus_.empty() || taus_.back() < n;
}

void ChangepointConfiguration::require_valid_for(std::size_t n) const {
    if (!valid_for(n)) {
        throw Error(ErrorCode::ConfigurationInvalid,
                    "changepoint " + std::to_string(taus_.back()) + " out of range for length " +
                        std::to_string(n) + " (admissible 1.." + std::to_string(n - 1) + ")");
    }
}

std::string ChangepointConfiguration::to_string() const {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < taus_.size(); ++i) {
        out << (i ? "," : "") << taus_[i];
    }
    out << ']';
    return out.str();
}

RegimePartition partition(const ChangepointConfiguration& config, std::size_t n) {
    config.require_valid_for(n);
    RegimePartition regimes;
    regimes.reserve(config.count() + 1);
    std::size_t start = 1;
    for (std::size_t tau : config.taus()) {
        regimes.push_back({start, tau});
        start = tau + 1;
    }
    regimes.push_back({start, n});
    return regimes;
}

ChangepointConfiguration configuration_of(const RegimePartition& regimes) {
    std::vector<std::size_t> taus;
    if (!regimes.empty()) {
        for (std::size_t i = 0; i + 1 < regimes.size(); ++i) {
            taus.push_back(regimes[i].end);
        }
    }
    return ChangepointConfiguration(std::move(taus));
}

ConfigurationEnumerator::ConfigurationEnumerator(std::size_t n) {
    if (n < 2 || n > 64) {
        throw Error(ErrorCode::InvalidArgument, "enumeration needs 2 <= n <= 64");
    }
    total_ = std::uint64_t{1} << (n - 1);
}

std::optional<ChangepointConfiguration> ConfigurationEnumerator::next() {
    if (next_mask_ >= total_) {
        return std::nullopt;
    }
    return decode(next_mask_++);
}

ChangepointConfiguration ConfigurationEnumerator::decode(std::uint64_t mask) {
    std::vector<std::size_t> taus;
    for (std::size_t bit = 0; mask != 0; ++bit, mask >>= 1) {
        if (mask & 1u) {
            taus.push_back(bit + 1);
        }
    }
    return ChangepointConfiguration(std::move(taus));
}

std::vector<double> prefix_sums(std::span<const double> x) {
    std::vector<double> out(x.size() + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc.add(x[i]);
        out[i + 1] = acc.value();
    }
    return out;
}

double mean(std::span<const double> x) {
    CompensatedSum acc;
    for (double v : x) {
        acc.add(v);
    }
    return acc.value() / static_cast<double>(x.size());
}

}  // namespace shiftscan
