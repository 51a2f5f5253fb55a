#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "shiftscan/parallel.hpp"
#include "shiftscan/search.hpp"

namespace shiftscan {

bool better_candidate(double total_a, std::span<const std::size_t> taus_a, double total_b,
                      std::span<const std::size_t> taus_b) noexcept {
    if (std::isnan(total_b)) return !std::isnan(total_a);
    if (std::isnan(total_a)) return false;
    if (total_a != total_b) return total_a < total_b;
    if (taus_a.size() != taus_b.size()) return taus_a.size() < taus_b.size();
    return std::lexicographical_compare(taus_a.begin(), taus_a.end(), taus_b.begin(), taus_b.end());
}

std::size_t default_exhaustive_limit(ModelKind model) noexcept {
    return model == ModelKind::GaussTrendAr1 ? 16 : 24;
}

namespace {

void decode_mask(std::uint64_t mask, std::vector<std::size_t>& taus) {
    taus.clear();
    while (mask != 0) {
        taus.push_back(static_cast<std::size_t>(std::countr_zero(mask)) + 1);
        mask &= mask - 1;
    }
}

struct Best {
    double total = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> taus;
    PenalizedScore score;
};

}  // namespace

SearchResult exhaustive_search(const Objective& objective, std::optional<std::size_t> max_n) {
    const std::size_t n = objective.size();
    const std::size_t limit = max_n.value_or(default_exhaustive_limit(objective.model()));
    if (n > limit || n > 63) {
        throw Error(ErrorCode::SearchTooLarge,
                    "exhaustive search over N=" + std::to_string(n) + " would fit 2^" +
                        std::to_string(n - 1) + " configurations (limit N <= " +
                        std::to_string(std::min<std::size_t>(limit, 63)) + "); use the genetic search");
    }
    const std::uint64_t total = std::uint64_t{1} << (n - 1);

    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<Best> chunk_best(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<std::size_t> taus;
        Best& best = chunk_best[c];
        const std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
        for (std::uint64_t mask = c * kChunk; mask < end; ++mask) {
            decode_mask(mask, taus);
            const auto s = objective.score(taus);
            if (better_candidate(s.total, taus, best.total, best.taus)) {
                best.total = s.total;
                best.taus = taus;
                best.score = s;
            }
        }
    });

    Best overall;
    for (auto& b : chunk_best) {
        if (better_candidate(b.total, b.taus, overall.total, overall.taus)) {
            overall = std::move(b);
        }
    }
    SearchResult result;
    result.best_config = ChangepointConfiguration(overall.taus);
    result.best_score = overall.score;
    result.evaluations = total;
    return result;
}

SearchResult exhaustive_search(const Series& series, ModelKind model, PenaltyKind penalty_kind,
                               std::optional<std::size_t> max_n) {
    return exhaustive_search(Objective(series, model, penalty_kind), max_n);
}

}  // namespace shiftscan
