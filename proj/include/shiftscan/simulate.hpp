#pragma once

#include <cstdint>
#include <vector>

#include "shiftscan/core.hpp"

namespace shiftscan {

struct GaussianSpec {
    std::size_t n = 100;
    std::vector<std::size_t> taus;
    std::vector<double> deltas{0.0};  // regime levels, taus.size()+1 entries
    double beta = 0.0;                // trend per index step
    double phi = 0.0;                 // AR(1) coefficient, |phi| <= 0.999
    double sigma = 1.0;               // innovation standard deviation
    std::int64_t first_time = 1;
};

struct PoissonSpec {
    std::size_t n = 100;
    std::vector<std::size_t> taus;
    std::vector<double> rates{1.0};
    std::int64_t first_time = 1;
};

/// X_t = delta_i + beta t + e_t with stationary AR(1) errors (e_1 drawn from
/// the stationary law).
Series simulate_gaussian(const GaussianSpec& spec, std::uint64_t seed);
Series simulate_poisson(const PoissonSpec& spec, std::uint64_t seed);

}  // namespace shiftscan
