#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "shiftscan/core.hpp"
#include "shiftscan/cusum.hpp"

namespace shiftscan {

enum class IntervalSource { Full, Random };

struct IntervalDraw {
    std::size_t start;
    std::size_t end;
    IntervalSource source;
};

struct TraceEntry {
    Segment interval;         // interval whose CUSUM was the largest in this step
    Segment working;          // segment being split
    double statistic = 0.0;   // max |CUSUM| on `interval`
    bool degenerate = false;  // working segment constant
    bool flagged = false;
    std::optional<std::size_t> tau;
};

using SegmentationTrace = std::vector<TraceEntry>;

struct SegmentationResult {
    ChangepointConfiguration config;
    SegmentationTrace trace;
};

inline constexpr std::size_t kDefaultMinLength = 3;

/// Recursive AMOC splitting. Segments shorter than min_len, constant
/// segments and non-rejections end the recursion.
SegmentationResult binary_segmentation(const Series& series, double level,
                                       std::size_t min_len = kDefaultMinLength);
SegmentationResult binary_segmentation_threshold(const Series& series, double threshold,
                                                 std::size_t min_len = kDefaultMinLength);

struct WbsSettings {
    std::size_t num_intervals = 500;
    double threshold = 1.358;
    std::size_t min_len = kDefaultMinLength;
    std::uint64_t seed = 1;
};

/// Random admissible intervals (with replacement, uniform over (start, end)
/// pairs of length >= min_len) followed by the full interval.
std::vector<IntervalDraw> draw_intervals(std::size_t n, std::size_t count, std::size_t min_len,
                                         std::uint64_t seed);

/// Wild binary segmentation: each step maximises |CUSUM| over the working
/// segment and every drawn interval inside it.
SegmentationResult wild_binary_segmentation(const Series& series, const WbsSettings& settings);

}  // namespace shiftscan
