#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shiftscan/models.hpp"

namespace shiftscan {

// Notation: Q is the AR(1) precision matrix scaled by the innovation
// variance. It is tridiagonal with Q_11 = Q_NN = 1, Q_tt = 1 + phi^2
// otherwise, and -phi off the diagonal; Q = W'W for the whitening W that
// scales row 1 by sqrt(1 - phi^2) and differences the rest. Every entry of
// the GLS normal equations X'QX b = X'Qy is a handful of prefix-sum lookups.

namespace {

struct Regime {
    std::size_t start;
    std::size_t end;
};

std::vector<Regime> regimes_of(std::span<const std::size_t> taus, std::size_t n) {
    std::vector<Regime> out;
    out.reserve(taus.size() + 1);
    std::size_t start = 1;
    for (std::size_t tau : taus) {
        out.push_back({start, tau});
        start = tau + 1;
    }
    out.push_back({start, n});
    return out;
}

// Sum of g over a..b (1-based, inclusive) from prefix sums; 0 if empty.
double range_sum(const std::vector<double>& prefix, std::size_t a, std::size_t b) {
    return a <= b ? prefix[b] - prefix[a - 1] : 0.0;
}

constexpr double kPivotTolerance = 1e-10;

}  // namespace

TrendAr1Model::TrendAr1Model(const Series& series) : n_(series.size()) {
    const auto x = series.values();
    y_centre_ = mean(x);
    t_centre_ = 0.5 * static_cast<double>(n_ + 1);

    y_sum_.assign(n_ + 1, 0.0);
    t_sum_.assign(n_ + 1, 0.0);
    CompensatedSum ys, ts, yy, tt, ty, lyy, ltt, lty, lyt;
    for (std::size_t i = 0; i < n_; ++i) {
        const double y = x[i] - y_centre_;
        const double t = static_cast<double>(i + 1) - t_centre_;
        ys.add(y);
        ts.add(t);
        y_sum_[i + 1] = ys.value();
        t_sum_[i + 1] = ts.value();
        yy.add(y * y);
        tt.add(t * t);
        ty.add(t * y);
        if (i + 1 < n_) {
            const double y_next = x[i + 1] - y_centre_;
            const double t_next = t + 1.0;
            lyy.add(y * y_next);
            ltt.add(t * t_next);
            lty.add(t * y_next);
            lyt.add(y * t_next);
        }
    }
    floor_ = variance_floor(x);
    y_first_ = x[0] - y_centre_;
    y_last_ = x[n_ - 1] - y_centre_;
    t_first_ = 1.0 - t_centre_;
    t_last_ = static_cast<double>(n_) - t_centre_;
    syy_ = yy.value();
    stt_ = tt.value();
    sty_ = ty.value();
    lag_yy_ = lyy.value();
    lag_tt_ = ltt.value();
    lag_ty_ = lty.value();
    lag_yt_ = lyt.value();
}

void TrendAr1Model::require_identifiable(std::span<const std::size_t> taus) const {
    if (n_ < taus.size() + 3) {
        throw Error(ErrorCode::SingularFit,
                    "trend+AR(1) fit with " + std::to_string(taus.size()) +
                        " changepoints needs at least " + std::to_string(taus.size() + 3) +
                        " observations, have " + std::to_string(n_));
    }
}

TrendAr1Model::Gls TrendAr1Model::solve(std::span<const std::size_t> taus, double phi) const {
    const auto regimes = regimes_of(taus, n_);
    const std::size_t k = regimes.size();
    const double phi2 = phi * phi;
    const double diag_w = 1.0 + phi2;
    const double off = -phi;

    // indicator_i' Q g for g with prefix sums `prefix` and end values g1, gN
    auto indicator_q = [&](const Regime& r, const std::vector<double>& prefix, double g1,
                           double gn) {
        double v = diag_w * range_sum(prefix, r.start, r.end);
        if (r.start == 1) v -= phi2 * g1;
        if (r.end == n_) v -= phi2 * gn;
        const double ahead = range_sum(prefix, r.start + 1, std::min(r.end + 1, n_));
        const double behind = range_sum(prefix, std::max<std::size_t>(r.start, 2) - 1, r.end - 1);
        return v - phi * (ahead + behind);
    };

    // Tridiagonal block T (indicators) via LDL' and the trend column through
    // its Schur complement.
    std::vector<double> pivot(k), u(k), v(k), rhs(k), cross(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& r = regimes[i];
        const double len = static_cast<double>(r.end - r.start + 1);
        double d = diag_w * len - 2.0 * phi * (len - 1.0);
        if (r.start == 1) d -= phi2;
        if (r.end == n_) d -= phi2;
        rhs[i] = indicator_q(r, y_sum_, y_first_, y_last_);
        cross[i] = indicator_q(r, t_sum_, t_first_, t_last_);
        u[i] = rhs[i];
        v[i] = cross[i];
        if (i > 0) {
            const double l = off / pivot[i - 1];
            d -= l * off;
            u[i] -= l * u[i - 1];
            v[i] -= l * v[i - 1];
        }
        if (!(d > kPivotTolerance * diag_w * len)) {
            throw Error(ErrorCode::SingularFit,
                        "singular trend+AR(1) design at regime " + std::to_string(i + 1) + " (" +
                            std::to_string(r.start) + ".." + std::to_string(r.end) + ")");
        }
        pivot[i] = d;
    }
    for (std::size_t i = k; i-- > 0;) {
        if (i + 1 < k) {
            u[i] -= off * u[i + 1];
            v[i] -= off * v[i + 1];
        }
        u[i] /= pivot[i];
        v[i] /= pivot[i];
    }

    const double tqt = diag_w * stt_ - phi2 * (t_first_ * t_first_ + t_last_ * t_last_) -
                       2.0 * phi * lag_tt_;
    const double tqy = diag_w * sty_ - phi2 * (t_first_ * y_first_ + t_last_ * y_last_) -
                       phi * (lag_ty_ + lag_yt_);
    const double yqy = diag_w * syy_ - phi2 * (y_first_ * y_first_ + y_last_ * y_last_) -
                       2.0 * phi * lag_yy_;

    double schur = tqt;
    double cu = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        schur -= cross[i] * v[i];
        cu += cross[i] * u[i];
    }
    if (!(schur > kPivotTolerance * tqt)) {
        std::size_t shortest = 0;
        for (std::size_t i = 1; i < k; ++i) {
            if (regimes[i].end - regimes[i].start < regimes[shortest].end - regimes[shortest].start) {
                shortest = i;
            }
        }
        throw Error(ErrorCode::SingularFit,
                    "trend is collinear with the regime intercepts (shortest regime " +
                        std::to_string(shortest + 1) + ")");
    }

    Gls out;
    out.slope = (tqy - cu) / schur;
    out.intercepts.resize(k);
    double explained = out.slope * tqy;
    for (std::size_t i = 0; i < k; ++i) {
        out.intercepts[i] = u[i] - out.slope * v[i];
        explained += out.intercepts[i] * rhs[i];
    }
    out.quad = yqy - explained;
    return out;
}

double TrendAr1Model::neg2_from_quad(double quad, double phi) const noexcept {
    const double n = static_cast<double>(n_);
    const double sigma2 = std::max(quad / n, floor_);
    return n * std::log(2.0 * std::numbers::pi * sigma2) + n - std::log(1.0 - phi * phi);
}

double TrendAr1Model::profile(std::span<const std::size_t> taus, double phi) const {
    return neg2_from_quad(solve(taus, phi).quad, phi);
}

double TrendAr1Model::best_phi(std::span<const std::size_t> taus) const {
    const double step = 2.0 * kPhiLimit / static_cast<double>(kGridPoints - 1);
    auto grid = [&](std::size_t i) { return -kPhiLimit + step * static_cast<double>(i); };

    std::size_t best_i = 0;
    double best = profile(taus, grid(0));
    for (std::size_t i = 1; i < kGridPoints; ++i) {
        const double v = profile(taus, grid(i));
        if (v < best) {
            best = v;
            best_i = i;
        }
    }

    double lo = grid(best_i == 0 ? 0 : best_i - 1);
    double hi = grid(std::min(best_i + 1, kGridPoints - 1));
    const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_golden * (hi - lo);
    double b = lo + inv_golden * (hi - lo);
    double fa = profile(taus, a);
    double fb = profile(taus, b);
    // 40 golden steps shrink the bracket by ~1e-8 relative
    for (int iter = 0; iter < 40; ++iter) {
        if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_golden * (hi - lo);
            fa = profile(taus, a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_golden * (hi - lo);
            fb = profile(taus, b);
        }
    }
    const double refined = fa <= fb ? a : b;
    const double f_refined = std::min(fa, fb);
    return f_refined < best ? refined : grid(best_i);
}

SegmentFit TrendAr1Model::to_fit(std::span<const std::size_t> taus, double phi) const {
    const auto gls = solve(taus, phi);
    SegmentFit out;
    out.model = ModelKind::GaussTrendAr1;
    out.beta = gls.slope;
    out.phi = phi;
    const double raw = gls.quad / static_cast<double>(n_);
    out.degenerate = raw <= floor_;
    out.sigma2 = std::max(raw, floor_);
    out.neg2loglik = neg2_from_quad(gls.quad, phi);
    out.deltas.reserve(gls.intercepts.size());
    for (double a : gls.intercepts) {
        out.deltas.push_back(y_centre_ + a - gls.slope * t_centre_);
    }
    return out;
}

SegmentFit TrendAr1Model::fit(const ChangepointConfiguration& config) const {
    config.require_valid_for(n_);
    require_identifiable(config.taus());
    return to_fit(config.taus(), best_phi(config.taus()));
}

SegmentFit TrendAr1Model::fit_fixed_phi(const ChangepointConfiguration& config, double phi) const {
    config.require_valid_for(n_);
    require_identifiable(config.taus());
    if (!(std::fabs(phi) < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "AR(1) coefficient must satisfy |phi| < 1");
    }
    return to_fit(config.taus(), phi);
}

double TrendAr1Model::profile_neg2loglik(const ChangepointConfiguration& config, double phi) const {
    config.require_valid_for(n_);
    require_identifiable(config.taus());
    return profile(config.taus(), phi);
}

double TrendAr1Model::neg2loglik(std::span<const std::size_t> taus) const {
    require_identifiable(taus);
    return profile(taus, best_phi(taus));
}

SegmentFit fit_gauss_trend_ar1(const Series& series, const ChangepointConfiguration& config) {
    return TrendAr1Model(series).fit(config);
}

}  // namespace shiftscan
