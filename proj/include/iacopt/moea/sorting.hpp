#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "iacopt/moea/dominance.hpp"
#include "iacopt/moea/individual.hpp"

namespace iacopt::moea {

/// Deb's fast non-dominated sort under constrained dominance. Returns fronts
/// as index lists; every individual lands in exactly one front.
inline std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<Individual>& population) {
    if (population.empty())
        throw std::invalid_argument("cannot sort an empty population");
    const std::size_t n = population.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (constrained_dominates(population[p], population[q]))
                dominated[p].push_back(q);
            else if (constrained_dominates(population[q], population[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }

    std::size_t assigned = fronts[0].size();
    while (assigned < n) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts.back()) {
            for (std::size_t q : dominated[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        assigned += next.size();
        fronts.push_back(std::move(next));
    }
    return fronts;
}

/// NSGA-II crowding distance for one front's objective vectors. Boundary
/// individuals get +inf; interior ones accumulate the normalized gap between
/// their neighbouring values per objective. Objectives with zero span are
/// skipped. Neighbours are taken over the distinct value grid, which makes
/// the result invariant under permutation of the front even when values tie.
inline std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front) {
    const std::size_t n = front.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0) return distance;
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front[0].size();
    std::vector<double> values;
    for (std::size_t obj = 0; obj < m; ++obj) {
        values.clear();
        for (const auto& row : front) values.push_back(row[obj]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        double span = values.back() - values.front();
        if (span <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (distance[i] == inf) continue;
            double v = front[i][obj];
            if (v == values.front() || v == values.back()) {
                distance[i] = inf;
                continue;
            }
            auto at = std::lower_bound(values.begin(), values.end(), v);
            distance[i] += (*(at + 1) - *(at - 1)) / span;
        }
    }
    return distance;
}

/// Convenience overload over population indices.
inline std::vector<double> crowding_distance(const std::vector<std::size_t>& front,
                                             const std::vector<Individual>& population) {
    std::vector<std::vector<double>> values;
    values.reserve(front.size());
    for (std::size_t idx : front) values.push_back(population[idx].internal());
    return crowding_distance(values);
}

}  // namespace iacopt::moea
