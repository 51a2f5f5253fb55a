#include "shiftscan/segmentation.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "shiftscan/parallel.hpp"

namespace shiftscan {

namespace {

// Candidates per step above which interval statistics are spread over workers.
constexpr std::size_t kParallelCandidates = 64;

struct Candidate {
    Segment interval;
    WindowCusum cusum;
};

SegmentationResult segment(const Series& series, double threshold, std::size_t min_len,
                           const std::vector<IntervalDraw>& draws) {
    if (!(threshold > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "segmentation threshold must be positive");
    }
    const auto values = series.values();
    const auto prefix = prefix_sums(values);
    const std::size_t floor_len = std::max<std::size_t>(min_len, 2);

    SegmentationResult result;
    std::vector<std::size_t> taus;
    std::vector<Segment> stack{{1, series.size()}};
    while (!stack.empty()) {
        const Segment work = stack.back();
        stack.pop_back();
        if (work.length() < floor_len) {
            continue;
        }

        std::vector<Segment> intervals{work};
        for (const auto& d : draws) {
            if (d.start >= work.start && d.end <= work.end &&
                !(d.start == work.start && d.end == work.end)) {
                intervals.push_back({d.start, d.end});
            }
        }
        std::vector<Candidate> cands(intervals.size());
        auto evaluate = [&](std::size_t i) {
            cands[i] = {intervals[i], window_cusum(values, prefix, intervals[i].start, intervals[i].end)};
        };
        if (intervals.size() >= kParallelCandidates) {
            parallel_for(intervals.size(), evaluate);
        } else {
            for (std::size_t i = 0; i < intervals.size(); ++i) evaluate(i);
        }

        TraceEntry entry;
        entry.working = work;
        entry.interval = work;
        entry.degenerate = cands.front().cusum.degenerate;
        const Candidate* best = nullptr;
        for (const auto& c : cands) {
            if (c.cusum.degenerate) continue;
            if (best == nullptr || c.cusum.max_abs > best->cusum.max_abs) {
                best = &c;
            }
        }
        if (best != nullptr) {
            entry.interval = best->interval;
            entry.statistic = best->cusum.max_abs;
            entry.flagged = best->cusum.max_abs > threshold;
        }
        if (entry.flagged) {
            const std::size_t tau = best->cusum.tau_hat;
            entry.tau = tau;
            taus.push_back(tau);
            // right pushed first so the left half is examined next
            stack.push_back({tau + 1, work.end});
            stack.push_back({work.start, tau});
        }
        result.trace.push_back(entry);
    }
    std::sort(taus.begin(), taus.end());
    result.config = ChangepointConfiguration(std::move(taus));
    return result;
}

}  // namespace

SegmentationResult binary_segmentation_threshold(const Series& series, double threshold,
                                                 std::size_t min_len) {
    return segment(series, threshold, min_len, {});
}

SegmentationResult binary_segmentation(const Series& series, double level, std::size_t min_len) {
    return binary_segmentation_threshold(series, cusum_critical_value(level), min_len);
}

std::vector<IntervalDraw> draw_intervals(std::size_t n, std::size_t count, std::size_t min_len,
                                         std::uint64_t seed) {
    const std::size_t len_min = std::max<std::size_t>(min_len, 2);
    std::vector<IntervalDraw> draws;
    if (n >= len_min && count > 0) {
        // pairs with length L: n - L + 1; total over L = len_min..n
        const std::size_t span = n - len_min + 1;
        const std::uint64_t pairs = static_cast<std::uint64_t>(span) * (span + 1) / 2;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, pairs - 1);
        draws.reserve(count + 1);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t r = pick(rng);
            // starts 1..span admit span, span-1, ..., 1 ends respectively
            std::size_t start = 1;
            std::uint64_t ends = span;
            while (r >= ends) {
                r -= ends;
                --ends;
                ++start;
            }
            const std::size_t end = start + len_min - 1 + static_cast<std::size_t>(r);
            draws.push_back({start, end, IntervalSource::Random});
        }
    }
    draws.push_back({1, n, IntervalSource::Full});
    return draws;
}

SegmentationResult wild_binary_segmentation(const Series& series, const WbsSettings& settings) {
    const auto draws = draw_intervals(series.size(), settings.num_intervals, settings.min_len,
                                      settings.seed);
    return segment(series, settings.threshold, settings.min_len, draws);
}

}  // namespace shiftscan
