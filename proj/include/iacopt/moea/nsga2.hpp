#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "iacopt/moea/sorting.hpp"
#include "iacopt/moea/variation.hpp"

namespace iacopt::moea {

namespace detail {

/// Assigns rank and crowding distance front by front.
inline void annotate_fronts(std::vector<Individual>& population) {
    auto fronts = fast_non_dominated_sort(population);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        auto distances = crowding_distance(fronts[r], population);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            population[fronts[r][i]].rank = static_cast<int>(r);
            population[fronts[r][i]].crowding = distances[i];
        }
    }
}

}  // namespace detail

/// One NSGA-II generation: tournament/crossover/mutation offspring, then
/// elitist survival over parents ∪ offspring with crowding-based truncation
/// of the last partial front.
inline std::vector<Individual> nsga2_generation(std::vector<Individual> population,
                                                const problem::DeploymentProblem& problem,
                                                const AlgoParams& params, Rng& rng) {
    detail::annotate_fronts(population);
    std::vector<Individual> offspring =
        make_offspring(population, problem, params, rng, /*crowding_tiebreak=*/true);

    std::vector<Individual> merged = std::move(population);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));

    const std::size_t target = static_cast<std::size_t>(params.population_size);
    auto fronts = fast_non_dominated_sort(merged);

    std::vector<Individual> next;
    next.reserve(target);
    for (std::size_t r = 0; r < fronts.size() && next.size() < target; ++r) {
        auto& front = fronts[r];
        auto distances = crowding_distance(front, merged);
        if (next.size() + front.size() <= target) {
            for (std::size_t i = 0; i < front.size(); ++i) {
                merged[front[i]].rank = static_cast<int>(r);
                merged[front[i]].crowding = distances[i];
                next.push_back(std::move(merged[front[i]]));
            }
        } else {
            std::vector<std::size_t> by_crowding(front.size());
            std::iota(by_crowding.begin(), by_crowding.end(), 0);
            std::stable_sort(by_crowding.begin(), by_crowding.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return distances[a] > distances[b];
                             });
            for (std::size_t i = 0; next.size() < target; ++i) {
                std::size_t pick = by_crowding[i];
                merged[front[pick]].rank = static_cast<int>(r);
                merged[front[pick]].crowding = distances[pick];
                next.push_back(std::move(merged[front[pick]]));
            }
        }
    }
    return next;
}

}  // namespace iacopt::moea
