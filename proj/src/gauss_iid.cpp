#include <algorithm>
#include <cmath>
#include <numbers>

#include "shiftscan/models.hpp"

namespace shiftscan {

GaussIidModel::GaussIidModel(const Series& series)
    : n_(series.size()),
      centre_(mean(series.values())),
      values_(series.values().begin(), series.values().end()) {
    const auto x = series.values();
    floor_ = shiftscan::variance_floor(x);
    sum_.assign(n_ + 1, 0.0);
    sum_sq_.assign(n_ + 1, 0.0);
    CompensatedSum s;
    CompensatedSum q;
    for (std::size_t t = 0; t < n_; ++t) {
        const double c = x[t] - centre_;
        s.add(c);
        q.add(c * c);
        sum_[t + 1] = s.value();
        sum_sq_[t + 1] = q.value();
    }
}

double GaussIidModel::rss(std::span<const std::size_t> taus) const {
    double total = 0.0;
    std::size_t start = 0;  // prefix offset of the regime start
    auto add_regime = [&](std::size_t end) {
        const double len = static_cast<double>(end - start);
        const double s = sum_[end] - sum_[start];
        const double q = sum_sq_[end] - sum_sq_[start];
        total += std::max(0.0, q - s * s / len);
        start = end;
    };
    for (std::size_t tau : taus) {
        add_regime(tau);
    }
    add_regime(n_);
    return total;
}

double GaussIidModel::neg2loglik(std::span<const std::size_t> taus) const {
    const double n = static_cast<double>(n_);
    const double sigma2 = std::max(rss(taus) / n, floor_);
    return n * std::log(2.0 * std::numbers::pi * sigma2) + n;
}

SegmentFit GaussIidModel::fit(const ChangepointConfiguration& config) const {
    config.require_valid_for(n_);
    SegmentFit out;
    out.model = ModelKind::GaussIid;
    // direct means, so exact-fit series give exact levels
    const std::span<const double> x(values_);
    for (const auto& seg : partition(config, n_)) {
        out.deltas.push_back(mean(x.subspan(seg.start - 1, seg.length())));
    }
    const double raw = rss(config.taus()) / static_cast<double>(n_);
    out.degenerate = raw <= floor_;
    out.sigma2 = std::max(raw, floor_);
    out.neg2loglik = neg2loglik(config.taus());
    return out;
}

SegmentFit fit_gauss_iid(const Series& series, const ChangepointConfiguration& config) {
    return GaussIidModel(series).fit(config);
}

}  // namespace shiftscan
