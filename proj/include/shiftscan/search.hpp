#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shiftscan/core.hpp"
#include "shiftscan/models.hpp"

namespace shiftscan {

struct SearchResult {
    ChangepointConfiguration best_config;
    PenalizedScore best_score;
    std::uint64_t evaluations = 0;
    std::vector<double> history;  // best total after each generation (GA only)
};

/// Strict total order used to pick winners: lower total, then fewer
/// changepoints, then lexicographically smaller taus.
bool better_candidate(double total_a, std::span<const std::size_t> taus_a, double total_b,
                      std::span<const std::size_t> taus_b) noexcept;

/// 24 for gauss-iid and poisson, 16 for gauss-trend-ar1 (inner phi search).
std::size_t default_exhaustive_limit(ModelKind model) noexcept;

/// Fits all 2^(N-1) configurations. Throws SearchTooLarge when N > max_n.
SearchResult exhaustive_search(const Series& series, ModelKind model, PenaltyKind penalty_kind,
                               std::optional<std::size_t> max_n = std::nullopt);
SearchResult exhaustive_search(const Objective& objective,
                               std::optional<std::size_t> max_n = std::nullopt);

struct GaSettings {
    std::size_t population_size = 100;
    std::size_t max_generations = 500;
    std::size_t stagnation_limit = 50;
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate;  // default 1/(N-1)
    std::size_t elitism_count = 2;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Inclusion bit for each admissible changepoint 1..N-1.
struct Chromosome {
    std::vector<std::uint8_t> bits;
    std::optional<double> fitness;

    static Chromosome encode(const ChangepointConfiguration& config, std::size_t n);
    ChangepointConfiguration decode() const;
    std::vector<std::size_t> taus() const;
};

SearchResult genetic_search(const Series& series, ModelKind model, PenaltyKind penalty_kind,
                            const GaSettings& settings = {});
SearchResult genetic_search(const Objective& objective, const GaSettings& settings = {});

}  // namespace shiftscan
