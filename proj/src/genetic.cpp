#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "shiftscan/parallel.hpp"
#include "shiftscan/search.hpp"

namespace shiftscan {

void GaSettings::validate() const {
    if (population_size < 2) {
        throw Error(ErrorCode::InvalidArgument, "GA population must hold at least 2 chromosomes");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "crossover rate must lie in [0, 1]");
    }
    if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "mutation rate must lie in [0, 1]");
    }
    if (elitism_count > population_size) {
        throw Error(ErrorCode::InvalidArgument, "elitism count exceeds the population");
    }
    if (max_generations < 1) {
        throw Error(ErrorCode::InvalidArgument, "GA needs at least one generation");
    }
}

Chromosome Chromosome::encode(const ChangepointConfiguration& config, std::size_t n) {
    config.require_valid_for(n);
    Chromosome c;
    c.bits.assign(n - 1, 0);
    for (std::size_t tau : config.taus()) {
        c.bits[tau - 1] = 1;
    }
    return c;
}

std::vector<std::size_t> Chromosome::taus() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j]) out.push_back(j + 1);
    }
    return out;
}

ChangepointConfiguration Chromosome::decode() const {
    return ChangepointConfiguration(taus());
}

namespace {

struct Member {
    std::vector<std::uint8_t> bits;
    std::vector<std::size_t> taus;
    PenalizedScore score;
};

std::string key_of(const std::vector<std::uint8_t>& bits) {
    return {bits.begin(), bits.end()};
}

bool member_better(const Member& a, const Member& b) {
    return better_candidate(a.score.total, a.taus, b.score.total, b.taus);
}

class Evaluator {
public:
    explicit Evaluator(const Objective& objective) : objective_(objective) {}

    // Scores every member, fitting each distinct uncached chromosome once.
    void evaluate(std::vector<Member>& members) {
        std::vector<std::string> keys(members.size());
        std::vector<std::size_t> fresh;  // index of first member carrying each new key
        std::unordered_map<std::string, std::size_t> pending;
        for (std::size_t i = 0; i < members.size(); ++i) {
            members[i].taus.clear();
            for (std::size_t j = 0; j < members[i].bits.size(); ++j) {
                if (members[i].bits[j]) members[i].taus.push_back(j + 1);
            }
            keys[i] = key_of(members[i].bits);
            if (!cache_.contains(keys[i]) && pending.emplace(keys[i], i).second) {
                fresh.push_back(i);
            }
        }
        std::vector<PenalizedScore> scores(fresh.size());
        parallel_for(fresh.size(), [&](std::size_t f) {
            scores[f] = objective_.score(members[fresh[f]].taus);
        });
        for (std::size_t f = 0; f < fresh.size(); ++f) {
            cache_.emplace(keys[fresh[f]], scores[f]);
        }
        evaluations_ += fresh.size();
        for (std::size_t i = 0; i < members.size(); ++i) {
            members[i].score = cache_.at(keys[i]);
        }
    }

    std::uint64_t evaluations() const noexcept { return evaluations_; }

private:
    const Objective& objective_;
    std::unordered_map<std::string, PenalizedScore> cache_;
    std::uint64_t evaluations_ = 0;
};

}  // namespace

SearchResult genetic_search(const Objective& objective, const GaSettings& settings) {
    settings.validate();
    const std::size_t n = objective.size();
    if (n < 4) {
        throw Error(ErrorCode::InvalidArgument, "genetic search needs N >= 4");
    }
    const std::size_t len = n - 1;
    const double mutation = settings.mutation_rate.value_or(1.0 / static_cast<double>(len));
    const std::size_t pop_size = settings.population_size;

    std::mt19937_64 rng(settings.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> position(0, len - 1);
    std::uniform_int_distribution<std::size_t> sparse_count(1, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);

    std::vector<Member> population(pop_size);
    population[0].bits.assign(len, 0);
    for (std::size_t i = 1; i < pop_size; ++i) {
        auto& bits = population[i].bits;
        bits.assign(len, 0);
        const std::size_t k = std::min(sparse_count(rng), len);
        for (std::size_t set = 0; set < k;) {
            const std::size_t j = position(rng);
            if (!bits[j]) {
                bits[j] = 1;
                ++set;
            }
        }
    }

    Evaluator evaluator(objective);
    evaluator.evaluate(population);
    std::stable_sort(population.begin(), population.end(), member_better);

    Member best = population.front();
    SearchResult result;
    result.history.push_back(best.score.total);

    std::size_t stagnant = 0;
    for (std::size_t gen = 1; gen < settings.max_generations && stagnant < settings.stagnation_limit;
         ++gen) {
        // population is sorted best-first, so a size-2 tournament keeps the lower index
        auto tournament = [&]() -> const Member& {
            const std::size_t a = pick(rng);
            const std::size_t b = pick(rng);
            return population[std::min(a, b)];
        };

        std::vector<Member> next;
        next.reserve(pop_size);
        for (std::size_t e = 0; e < settings.elitism_count; ++e) {
            next.push_back(population[e]);
        }
        while (next.size() < pop_size) {
            const Member& a = tournament();
            const Member& b = tournament();
            Member child;
            child.bits = a.bits;
            if (unit(rng) < settings.crossover_rate) {
                for (std::size_t j = 0; j < len; ++j) {
                    if (unit(rng) < 0.5) child.bits[j] = b.bits[j];
                }
            }
            for (std::size_t j = 0; j < len; ++j) {
                if (unit(rng) < mutation) child.bits[j] ^= 1;
            }
            next.push_back(std::move(child));
        }

        evaluator.evaluate(next);
        std::stable_sort(next.begin(), next.end(), member_better);
        population = std::move(next);

        if (member_better(population.front(), best)) {
            if (population.front().score.total < best.score.total) {
                stagnant = 0;
            } else {
                ++stagnant;
            }
            best = population.front();
        } else {
            ++stagnant;
        }
        result.history.push_back(best.score.total);
    }

    result.best_config = ChangepointConfiguration(best.taus);
    result.best_score = best.score;
    result.evaluations = evaluator.evaluations();
    return result;
}

SearchResult genetic_search(const Series& series, ModelKind model, PenaltyKind penalty_kind,
                            const GaSettings& settings) {
    return genetic_search(Objective(series, model, penalty_kind), settings);
}

}  // namespace shiftscan
