#include "shiftscan/simulate.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace shiftscan {

namespace {

std::vector<std::int64_t> time_labels(std::size_t n, std::int64_t first) {
    std::vector<std::int64_t> t(n);
    std::iota(t.begin(), t.end(), first);
    return t;
}

RegimePartition checked_regimes(std::size_t n, const std::vector<std::size_t>& taus,
                                std::size_t levels, const char* what) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "simulated series needs n >= 2");
    }
    const ChangepointConfiguration config(taus);
    config.require_valid_for(n);
    if (levels != taus.size() + 1) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("need ") + std::to_string(taus.size() + 1) + " " + what +
                        " for " + std::to_string(taus.size()) + " changepoints, got " +
                        std::to_string(levels));
    }
    return partition(config, n);
}

}  // namespace

Series simulate_gaussian(const GaussianSpec& spec, std::uint64_t seed) {
    const auto regimes = checked_regimes(spec.n, spec.taus, spec.deltas.size(), "deltas");
    if (!(std::fabs(spec.phi) <= 0.999)) {
        throw Error(ErrorCode::InvalidArgument, "AR(1) coefficient must satisfy |phi| <= 0.999");
    }
    if (!(spec.sigma >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values(spec.n);
    double noise = spec.sigma * normal(rng) / std::sqrt(1.0 - spec.phi * spec.phi);
    for (std::size_t r = 0; r < regimes.size(); ++r) {
        for (std::size_t t = regimes[r].start; t <= regimes[r].end; ++t) {
            if (t > 1) {
                noise = spec.phi * noise + spec.sigma * normal(rng);
            }
            values[t - 1] = spec.deltas[r] + spec.beta * static_cast<double>(t) + noise;
        }
    }
    return Series(std::move(values), time_labels(spec.n, spec.first_time), SeriesKind::Continuous);
}

Series simulate_poisson(const PoissonSpec& spec, std::uint64_t seed) {
    const auto regimes = checked_regimes(spec.n, spec.taus, spec.rates.size(), "rates");
    for (double r : spec.rates) {
        if (!(r >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "Poisson rates must be nonnegative");
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<double> values(spec.n);
    for (std::size_t r = 0; r < regimes.size(); ++r) {
        std::poisson_distribution<long> draw(spec.rates[r] > 0.0 ? spec.rates[r] : 1.0);
        for (std::size_t t = regimes[r].start; t <= regimes[r].end; ++t) {
            values[t - 1] = spec.rates[r] > 0.0 ? static_cast<double>(draw(rng)) : 0.0;
        }
    }
    return Series(std::move(values), time_labels(spec.n, spec.first_time), SeriesKind::Count);
}

}  // namespace shiftscan
