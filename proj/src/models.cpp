#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shiftscan/models.hpp"

namespace shiftscan {

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::GaussIid: return "gauss-iid";
        case ModelKind::GaussTrendAr1: return "gauss-trend-ar1";
        case ModelKind::Poisson: return "poisson";
    }
    return "gauss-iid";
}

const char* to_string(PenaltyKind kind) noexcept {
    return kind == PenaltyKind::Aic ? "aic" : "bic";
}

ModelKind parse_model_kind(std::string_view name) {
    for (auto kind : {ModelKind::GaussIid, ModelKind::GaussTrendAr1, ModelKind::Poisson}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

PenaltyKind parse_penalty_kind(std::string_view name) {
    if (name == "bic") return PenaltyKind::Bic;
    if (name == "aic") return PenaltyKind::Aic;
    throw Error(ErrorCode::InvalidArgument, "unknown penalty '" + std::string(name) + "'");
}

double penalty(PenaltyKind kind, std::size_t m, std::size_t n) {
    const double count = static_cast<double>(m);
    switch (kind) {
        case PenaltyKind::Bic: return count * std::log(static_cast<double>(n));
        case PenaltyKind::Aic: return 2.0 * count;
    }
    return 0.0;
}

double variance_floor(std::span<const double> values) noexcept {
    double scale = 0.0;
    for (double v : values) {
        scale = std::max(scale, std::fabs(v));
    }
    if (scale == 0.0) {
        scale = 1.0;
    }
    return 1e-12 * scale * scale;
}

bool gaussian_regimes_admissible(std::span<const std::size_t> taus, std::size_t n) noexcept {
    std::size_t start = 1;
    for (std::size_t tau : taus) {
        if (tau + 1 < start + kGaussianMinRegime) return false;
        start = tau + 1;
    }
    return n + 1 >= start + kGaussianMinRegime;
}

namespace {

std::variant<GaussIidModel, TrendAr1Model, PoissonModel> make_model(const Series& series,
                                                                    ModelKind model) {
    switch (model) {
        case ModelKind::GaussIid: return GaussIidModel(series);
        case ModelKind::GaussTrendAr1: return TrendAr1Model(series);
        case ModelKind::Poisson: return PoissonModel(series);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model");
}

}  // namespace

Objective::Objective(const Series& series, ModelKind model, PenaltyKind penalty_kind)
    : n_(series.size()), model_(model), penalty_(penalty_kind), impl_(make_model(series, model)) {}

PenalizedScore Objective::score(std::span<const std::size_t> taus) const {
    PenalizedScore s;
    s.penalty = penalty(penalty_, taus.size(), n_);
    if (model_ != ModelKind::Poisson && !gaussian_regimes_admissible(taus, n_)) {
        s.neg2loglik = std::numeric_limits<double>::infinity();
        s.total = s.neg2loglik;
        return s;
    }
    try {
        s.neg2loglik = std::visit([&](const auto& m) { return m.neg2loglik(taus); }, impl_);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularFit) {
            throw;
        }
        s.neg2loglik = std::numeric_limits<double>::infinity();
    }
    s.total = s.neg2loglik + s.penalty;
    return s;
}

SegmentFit Objective::fit(const ChangepointConfiguration& config) const {
    return std::visit([&](const auto& m) { return m.fit(config); }, impl_);
}

SegmentFit fit_model(const Series& series, const ChangepointConfiguration& config, ModelKind model) {
    switch (model) {
        case ModelKind::GaussIid: return fit_gauss_iid(series, config);
        case ModelKind::GaussTrendAr1: return fit_gauss_trend_ar1(series, config);
        case ModelKind::Poisson: return fit_poisson(series, config);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model");
}

PenalizedScore penalized_score(const Series& series, const ChangepointConfiguration& config,
                               ModelKind model, PenaltyKind penalty_kind) {
    config.require_valid_for(series.size());
    return Objective(series, model, penalty_kind).score(config);
}

}  // namespace shiftscan
