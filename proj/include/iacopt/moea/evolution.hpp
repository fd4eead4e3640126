#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "iacopt/moea/nsga2.hpp"
#include "iacopt/moea/nsga3.hpp"
#include "iacopt/moea/reference_points.hpp"

namespace iacopt::moea {

struct EvolutionResult {
    std::vector<problem::EvaluatedSolution> solutions;
    std::uint64_t evaluations = 0;
    int generations = 0;
    int population_size = 0;
};

/// Fills the auto (zero) fields: NSGA-II defaults to population 100, NSGA-III
/// to the smallest multiple of four holding its reference points; mutation
/// defaults to one expected reset per genotype.
inline AlgoParams resolve_params(AlgoParams params, Algorithm algorithm,
                                 const problem::DeploymentProblem& problem) {
    if (params.population_size == 0) {
        if (algorithm == Algorithm::nsga3) {
            auto refs = generate_reference_points(
                static_cast<int>(problem.objectives.size()), params.nsga3_divisions);
            std::size_t n = refs.points.size();
            params.population_size = static_cast<int>((n + 3) / 4 * 4);
        } else {
            params.population_size = 100;
        }
    }
    if (params.population_size < 4 || params.population_size % 2 != 0)
        throw std::invalid_argument("population size must be even and at least 4");
    if (params.generations < 1)
        throw std::invalid_argument("generations must be at least 1");
    if (params.crossover_prob < 0.0 || params.crossover_prob > 1.0)
        throw std::invalid_argument("crossover probability must be in [0, 1]");
    if (params.mutation_prob_per_gene == 0.0)
        params.mutation_prob_per_gene = 1.0 / static_cast<double>(problem.slots.size());
    if (params.mutation_prob_per_gene < 0.0 || params.mutation_prob_per_gene > 1.0)
        throw std::invalid_argument("mutation probability must be in [0, 1]");
    return params;
}

/// Runs the chosen algorithm from a uniform random population and returns the
/// final first front, deduplicated by genotype: its feasible members, or the
/// minimum-violation members (still flagged infeasible in their constraint
/// reports) when nothing feasible was found.
inline EvolutionResult run_evolution(const problem::DeploymentProblem& problem,
                                     const AlgoParams& raw_params, Algorithm algorithm,
                                     Rng& rng) {
    AlgoParams params = resolve_params(raw_params, algorithm, problem);

    ReferencePointSet refs;
    if (algorithm == Algorithm::nsga3)
        refs = generate_reference_points(static_cast<int>(problem.objectives.size()),
                                         params.nsga3_divisions);

    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(params.population_size));
    for (int i = 0; i < params.population_size; ++i)
        population.push_back(make_individual(random_genotype(problem, rng), problem));

    for (int gen = 0; gen < params.generations; ++gen) {
        population = algorithm == Algorithm::nsga3
                         ? nsga3_generation(std::move(population), problem, params, refs, rng)
                         : nsga2_generation(std::move(population), problem, params, rng);
    }

    auto fronts = fast_non_dominated_sort(population);
    std::vector<problem::EvaluatedSolution> front;
    front.reserve(fronts[0].size());
    for (std::size_t idx : fronts[0]) front.push_back(population[idx].solution);

    std::sort(front.begin(), front.end(),
              [](const auto& a, const auto& b) { return a.genotype < b.genotype; });
    front.erase(std::unique(front.begin(), front.end(),
                            [](const auto& a, const auto& b) { return a.genotype == b.genotype; }),
                front.end());

    bool any_feasible = std::any_of(front.begin(), front.end(),
                                    [](const auto& s) { return s.constraints.feasible; });
    if (any_feasible)
        front.erase(std::remove_if(front.begin(), front.end(),
                                   [](const auto& s) { return !s.constraints.feasible; }),
                    front.end());

    EvolutionResult result;
    result.solutions = std::move(front);
    result.population_size = params.population_size;
    result.generations = params.generations;
    result.evaluations = static_cast<std::uint64_t>(params.population_size) *
                         static_cast<std::uint64_t>(params.generations + 1);
    return result;
}

}  // namespace iacopt::moea
