#pragma once

#include <utility>
#include <vector>

#include "iacopt/moea/dominance.hpp"
#include "iacopt/moea/individual.hpp"
#include "iacopt/moea/rng.hpp"
#include "iacopt/problem.hpp"

namespace iacopt::moea {

inline problem::Genotype random_genotype(const problem::DeploymentProblem& problem, Rng& rng) {
    problem::Genotype genes(problem.slots.size());
    for (std::size_t i = 0; i < genes.size(); ++i)
        genes[i] = static_cast<std::int32_t>(uniform_index(rng, problem.candidates[i].size()));
    return genes;
}

inline Individual make_individual(problem::Genotype genes,
                                  const problem::DeploymentProblem& problem) {
    Individual ind;
    ind.solution = problem::evaluate(genes, problem);
    return ind;
}

/// Binary tournament: constrained dominance decides, then (optionally) higher
/// crowding, then a coin flip.
inline std::size_t binary_tournament(const std::vector<Individual>& population, Rng& rng,
                                     bool crowding_tiebreak) {
    std::size_t a = uniform_index(rng, population.size());
    std::size_t b = uniform_index(rng, population.size());
    if (constrained_dominates(population[a], population[b])) return a;
    if (constrained_dominates(population[b], population[a])) return b;
    if (crowding_tiebreak) {
        if (population[a].crowding > population[b].crowding) return a;
        if (population[b].crowding > population[a].crowding) return b;
    }
    return coin_flip(rng) ? a : b;
}

/// Uniform crossover: with probability `prob`, every gene position swaps
/// between the children with a fair coin; otherwise the parents are copied.
inline std::pair<problem::Genotype, problem::Genotype> uniform_crossover(
    const problem::Genotype& parent1, const problem::Genotype& parent2, double prob, Rng& rng) {
    problem::Genotype child1 = parent1;
    problem::Genotype child2 = parent2;
    if (uniform_unit(rng) < prob) {
        for (std::size_t i = 0; i < child1.size(); ++i)
            if (coin_flip(rng)) std::swap(child1[i], child2[i]);
    }
    return {std::move(child1), std::move(child2)};
}

/// Per-gene reset mutation: each gene is redrawn uniformly from its slot's
/// candidate list with probability `per_gene_prob`.
inline void reset_mutation(problem::Genotype& genes, const problem::DeploymentProblem& problem,
                           double per_gene_prob, Rng& rng) {
    for (std::size_t i = 0; i < genes.size(); ++i)
        if (uniform_unit(rng) < per_gene_prob)
            genes[i] = static_cast<std::int32_t>(uniform_index(rng, problem.candidates[i].size()));
}

/// Produces |population| offspring via tournament selection, uniform
/// crossover and reset mutation, evaluating each child.
inline std::vector<Individual> make_offspring(const std::vector<Individual>& population,
                                              const problem::DeploymentProblem& problem,
                                              const AlgoParams& params, Rng& rng,
                                              bool crowding_tiebreak) {
    std::vector<Individual> offspring;
    offspring.reserve(population.size());
    while (offspring.size() < population.size()) {
        std::size_t p1 = binary_tournament(population, rng, crowding_tiebreak);
        std::size_t p2 = binary_tournament(population, rng, crowding_tiebreak);
        auto [c1, c2] = uniform_crossover(population[p1].solution.genotype,
                                          population[p2].solution.genotype,
                                          params.crossover_prob, rng);
        reset_mutation(c1, problem, params.mutation_prob_per_gene, rng);
        reset_mutation(c2, problem, params.mutation_prob_per_gene, rng);
        offspring.push_back(make_individual(std::move(c1), problem));
        if (offspring.size() < population.size())
            offspring.push_back(make_individual(std::move(c2), problem));
    }
    return offspring;
}

}  // namespace iacopt::moea
