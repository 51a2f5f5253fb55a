#include "shiftscan/homogenize.hpp"

#include <vector>

namespace shiftscan {

DifferenceSeries difference(const Series& target, const Series& reference, std::string target_id,
                            std::string reference_id) {
    const auto tt = target.times();
    const auto rt = reference.times();
    std::vector<double> values;
    std::vector<std::int64_t> times;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < tt.size() && j < rt.size()) {
        if (tt[i] < rt[j]) {
            ++i;
        } else if (rt[j] < tt[i]) {
            ++j;
        } else {
            times.push_back(tt[i]);
            values.push_back(target.values()[i] - reference.values()[j]);
            ++i;
            ++j;
        }
    }
    if (times.size() < 2) {
        throw Error(ErrorCode::InsufficientOverlap,
                    "target and reference share " + std::to_string(times.size()) +
                        " time labels; need at least 2");
    }
    return {Series(std::move(values), std::move(times), SeriesKind::Continuous),
            std::move(target_id), std::move(reference_id)};
}

const char* to_string(Anchor anchor) noexcept {
    return anchor == Anchor::FirstRegime ? "first-regime" : "last-regime";
}

Anchor parse_anchor(std::string_view name) {
    if (name == "last-regime" || name == "last") return Anchor::LastRegime;
    if (name == "first-regime" || name == "first") return Anchor::FirstRegime;
    throw Error(ErrorCode::InvalidArgument, "unknown anchor '" + std::string(name) + "'");
}

Series adjust(const Series& series, const SegmentFit& fit, const ChangepointConfiguration& config,
              Anchor anchor) {
    const auto regimes = partition(config, series.size());
    if (fit.deltas.size() != regimes.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "fit has " + std::to_string(fit.deltas.size()) + " regime levels for " +
                        std::to_string(regimes.size()) + " regimes");
    }
    const double level = anchor == Anchor::LastRegime ? fit.deltas.back() : fit.deltas.front();
    std::vector<double> values(series.values().begin(), series.values().end());
    for (std::size_t r = 0; r < regimes.size(); ++r) {
        const double shift = fit.deltas[r] - level;
        if (shift == 0.0) continue;
        for (std::size_t t = regimes[r].start; t <= regimes[r].end; ++t) {
            values[t - 1] -= shift;
        }
    }
    std::vector<std::int64_t> times(series.times().begin(), series.times().end());
    return Series(std::move(values), std::move(times), SeriesKind::Continuous);
}

}  // namespace shiftscan
