#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "shiftscan/core.hpp"

namespace shiftscan {

enum class ModelKind { GaussIid, GaussTrendAr1, Poisson };
enum class PenaltyKind { Bic, Aic };

const char* to_string(ModelKind kind) noexcept;
const char* to_string(PenaltyKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);
PenaltyKind parse_penalty_kind(std::string_view name);

struct SegmentFit {
    ModelKind model = ModelKind::GaussIid;
    /// Per-regime means (Gaussian) or rates (Poisson), m+1 entries.
    std::vector<double> deltas;
    std::optional<double> beta;    // trend per index step (gauss-trend-ar1)
    std::optional<double> phi;     // AR(1) coefficient (gauss-trend-ar1)
    std::optional<double> sigma2;  // noise / innovation variance (Gaussian models)
    double neg2loglik = 0.0;
    /// Residual variance hit the numerical floor (exact fit).
    bool degenerate = false;

    /// Fitted mean at 1-based index t of the given regime.
    double mean_at(std::size_t regime, std::size_t t) const noexcept {
        return deltas[regime] + (beta ? *beta * static_cast<double>(t) : 0.0);
    }
};

struct PenalizedScore {
    double neg2loglik = 0.0;
    double penalty = 0.0;
    double total = 0.0;
};

double penalty(PenaltyKind kind, std::size_t m, std::size_t n);

/// 1e-12 (max |x|)^2, or 1e-12 for an all-zero series: the smallest variance
/// a Gaussian fit reports before it is flagged degenerate.
double variance_floor(std::span<const double> values) noexcept;

/// A Gaussian regime of one observation is fitted exactly by its own mean,
/// which drives the pooled variance and -2 ln L towards -infinity as regimes
/// shrink; the search objective therefore needs two observations per regime.
inline constexpr std::size_t kGaussianMinRegime = 2;
bool gaussian_regimes_admissible(std::span<const std::size_t> taus, std::size_t n) noexcept;

/// Independent Gaussian noise around a piecewise-constant mean. Prefix sums
/// are built once, so each configuration costs O(m).
class GaussIidModel {
public:
    explicit GaussIidModel(const Series& series);

    double neg2loglik(std::span<const std::size_t> taus) const;
    SegmentFit fit(const ChangepointConfiguration& config) const;
    std::size_t size() const noexcept { return n_; }

private:
    double rss(std::span<const std::size_t> taus) const;
    double variance_floor() const noexcept { return floor_; }

    std::size_t n_;
    double centre_;
    std::vector<double> values_;
    double floor_;
    std::vector<double> sum_;     // prefix sums of centred values
    std::vector<double> sum_sq_;  // prefix sums of squared centred values
};

/// Independent Poisson counts with a piecewise-constant rate.
class PoissonModel {
public:
    explicit PoissonModel(const Series& series);

    double neg2loglik(std::span<const std::size_t> taus) const;
    SegmentFit fit(const ChangepointConfiguration& config) const;
    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<double> sum_;  // exact: counts are integers
    double log_factorials_;    // sum of ln(x_t!)
};

/// Regime intercepts, one shared linear trend and stationary AR(1) errors,
/// fitted by exact Gaussian likelihood. For fixed phi the GLS problem is
/// solved through the tridiagonal AR(1) precision matrix, which keeps each
/// profile evaluation O(m); phi is then found by a grid plus golden section.
class TrendAr1Model {
public:
    static constexpr double kPhiLimit = 0.999;
    static constexpr std::size_t kGridPoints = 41;

    explicit TrendAr1Model(const Series& series);

    SegmentFit fit(const ChangepointConfiguration& config) const;
    SegmentFit fit_fixed_phi(const ChangepointConfiguration& config, double phi) const;
    /// -2 ln L maximised over everything but phi.
    double profile_neg2loglik(const ChangepointConfiguration& config, double phi) const;
    double neg2loglik(std::span<const std::size_t> taus) const;
    std::size_t size() const noexcept { return n_; }

private:
    struct Gls {
        std::vector<double> intercepts;  // centred units
        double slope = 0.0;
        double quad = 0.0;  // whitened residual sum of squares
    };
    Gls solve(std::span<const std::size_t> taus, double phi) const;
    double neg2_from_quad(double quad, double phi) const noexcept;
    double profile(std::span<const std::size_t> taus, double phi) const;
    double best_phi(std::span<const std::size_t> taus) const;
    SegmentFit to_fit(std::span<const std::size_t> taus, double phi) const;
    void require_identifiable(std::span<const std::size_t> taus) const;

    std::size_t n_;
    double y_centre_;
    double t_centre_;
    double floor_;
    std::vector<double> y_sum_;  // prefix sums, centred
    std::vector<double> t_sum_;
    double y_first_, y_last_, t_first_, t_last_;
    double syy_, stt_, sty_;
    double lag_yy_, lag_tt_, lag_ty_, lag_yt_;
};

/// Penalised objective over configurations of one series. Thread-safe.
class Objective {
public:
    Objective(const Series& series, ModelKind model, PenaltyKind penalty);

    /// Configurations the model cannot fit (single-observation Gaussian
    /// regimes, too many regimes for the trend model, singular designs)
    /// score +infinity.
    PenalizedScore score(std::span<const std::size_t> taus) const;
    PenalizedScore score(const ChangepointConfiguration& config) const {
        return score(config.taus());
    }
    SegmentFit fit(const ChangepointConfiguration& config) const;

    std::size_t size() const noexcept { return n_; }
    ModelKind model() const noexcept { return model_; }
    PenaltyKind penalty_kind() const noexcept { return penalty_; }

private:
    std::size_t n_;
    ModelKind model_;
    PenaltyKind penalty_;
    std::variant<GaussIidModel, TrendAr1Model, PoissonModel> impl_;
};

SegmentFit fit_gauss_iid(const Series& series, const ChangepointConfiguration& config);
SegmentFit fit_poisson(const Series& series, const ChangepointConfiguration& config);
SegmentFit fit_gauss_trend_ar1(const Series& series, const ChangepointConfiguration& config);
SegmentFit fit_model(const Series& series, const ChangepointConfiguration& config, ModelKind model);

PenalizedScore penalized_score(const Series& series, const ChangepointConfiguration& config,
                               ModelKind model, PenaltyKind penalty_kind);

}  // namespace shiftscan
