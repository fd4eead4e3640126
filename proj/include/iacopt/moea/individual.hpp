#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "iacopt/problem.hpp"

namespace iacopt::moea {

enum class Algorithm { nsga2, nsga3 };

inline const char* to_string(Algorithm algorithm) {
    return algorithm == Algorithm::nsga2 ? "NSGA-II" : "NSGA-III";
}

/// Population member: an evaluated solution plus the bookkeeping the two
/// survival schemes need (front rank and crowding for NSGA-II, reference-point
/// association for NSGA-III).
struct Individual {
    problem::EvaluatedSolution solution;
    int rank = 0;
    double crowding = 0.0;
    int ref_point = -1;
    double ref_distance = 0.0;

    const std::vector<double>& internal() const { return solution.internal_values; }
    bool feasible() const { return solution.constraints.feasible; }
    double violation() const { return solution.constraints.total_violation; }
};

struct AlgoParams {
    int population_size = 0;              // 0 = auto (see resolve_params)
    int generations = 100;
    double crossover_prob = 0.9;
    double mutation_prob_per_gene = 0.0;  // 0 = auto (1 / slot count)
    std::uint64_t seed = 42;
    int nsga3_divisions = 12;
};

}  // namespace iacopt::moea
