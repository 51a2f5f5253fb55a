#include <cmath>

#include "shiftscan/models.hpp"

namespace shiftscan {

PoissonModel::PoissonModel(const Series& series) : n_(series.size()) {
    if (series.kind() != SeriesKind::Count) {
        throw Error(ErrorCode::InvalidCount, "poisson model needs a count series");
    }
    sum_.assign(n_ + 1, 0.0);
    CompensatedSum lf;
    const auto x = series.values();
    for (std::size_t t = 0; t < n_; ++t) {
        sum_[t + 1] = sum_[t] + x[t];
        lf.add(std::lgamma(x[t] + 1.0));
    }
    log_factorials_ = lf.value();
}

double PoissonModel::neg2loglik(std::span<const std::size_t> taus) const {
    // Regime term: sum x ln r - L r at r = S/L, i.e. S ln(S/L) - S; 0 when S = 0.
    double loglik = 0.0;
    std::size_t start = 0;
    auto add_regime = [&](std::size_t end) {
        const double s = sum_[end] - sum_[start];
        if (s > 0.0) {
            loglik += s * std::log(s / static_cast<double>(end - start)) - s;
        }
        start = end;
    };
    for (std::size_t tau : taus) {
        add_regime(tau);
    }
    add_regime(n_);
    return -2.0 * (loglik - log_factorials_);
}

SegmentFit PoissonModel::fit(const ChangepointConfiguration& config) const {
    config.require_valid_for(n_);
    SegmentFit out;
    out.model = ModelKind::Poisson;
    for (const auto& seg : partition(config, n_)) {
        out.deltas.push_back((sum_[seg.end] - sum_[seg.start - 1]) /
                             static_cast<double>(seg.length()));
    }
    out.neg2loglik = neg2loglik(config.taus());
    return out;
}

SegmentFit fit_poisson(const Series& series, const ChangepointConfiguration& config) {
    return PoissonModel(series).fit(config);
}

}  // namespace shiftscan
