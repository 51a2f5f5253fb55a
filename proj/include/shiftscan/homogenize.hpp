#pragma once

#include <string>
#include <string_view>

#include "shiftscan/core.hpp"
#include "shiftscan/models.hpp"

namespace shiftscan {

struct DifferenceSeries {
    Series series;
    std::string target_id;
    std::string reference_id;
};

/// Target minus reference on the common time labels. Throws
/// InsufficientOverlap when fewer than 2 labels are shared.
DifferenceSeries difference(const Series& target, const Series& reference,
                            std::string target_id = "target",
                            std::string reference_id = "reference");

enum class Anchor { LastRegime, FirstRegime };

const char* to_string(Anchor anchor) noexcept;
Anchor parse_anchor(std::string_view name);

/// Removes the estimated level differences so every regime sits at the
/// anchor regime's level. Trend and noise are left alone.
Series adjust(const Series& series, const SegmentFit& fit, const ChangepointConfiguration& config,
              Anchor anchor = Anchor::LastRegime);

}  // namespace shiftscan
