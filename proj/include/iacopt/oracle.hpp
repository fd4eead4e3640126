#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "iacopt/problem.hpp"

namespace iacopt::oracle {

class BudgetExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnumerationBudget {
    std::uint64_t max_combinations = 1'000'000;
};

/// Every genotype in the Cartesian product of the candidate lists, evaluated,
/// in odometer order.
inline std::vector<problem::EvaluatedSolution> enumerate_all(
    const problem::DeploymentProblem& problem, const EnumerationBudget& budget = {}) {
    if (budget.max_combinations < 1)
        throw std::invalid_argument("enumeration budget must be positive");
    if (problem.search_space_size > budget.max_combinations)
        throw BudgetExceededError("search space of " +
                                  std::to_string(problem.search_space_size) +
                                  " combinations exceeds the enumeration budget of " +
                                  std::to_string(budget.max_combinations));

    std::vector<problem::EvaluatedSolution> out;
    out.reserve(static_cast<std::size_t>(problem.search_space_size));
    problem::Genotype genes(problem.slots.size(), 0);
    for (;;) {
        out.push_back(problem::evaluate(genes, problem));
        std::size_t slot = genes.size();
        while (slot-- > 0) {
            if (static_cast<std::size_t>(++genes[slot]) < problem.candidates[slot].size()) break;
            genes[slot] = 0;
            if (slot == 0) return out;
        }
        if (genes.empty()) return out;
    }
}

/// Ground-truth feasible Pareto front by exhaustive pairwise filtering. The
/// dominance check here is deliberately written out rather than shared with
/// the evolutionary engine. When no genotype is feasible, the
/// minimum-violation solutions are returned instead.
inline std::vector<problem::EvaluatedSolution> brute_force_pareto(
    const problem::DeploymentProblem& problem, const EnumerationBudget& budget = {}) {
    auto all = enumerate_all(problem, budget);

    std::vector<problem::EvaluatedSolution> candidates;
    for (const auto& sol : all)
        if (sol.constraints.feasible) candidates.push_back(sol);

    if (candidates.empty()) {
        // Nothing feasible: keep the minimum-violation genotypes.
        double best = std::numeric_limits<double>::infinity();
        for (const auto& sol : all) best = std::min(best, sol.constraints.total_violation);
        std::vector<problem::EvaluatedSolution> result;
        for (const auto& sol : all)
            if (sol.constraints.total_violation == best) result.push_back(sol);
        std::sort(result.begin(), result.end(),
                  [](const auto& a, const auto& b) { return a.genotype < b.genotype; });
        return result;
    }

    auto dominates = [](const std::vector<double>& a, const std::vector<double>& b) {
        bool strict = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] > b[i]) return false;
            if (a[i] < b[i]) strict = true;
        }
        return strict;
    };

    std::vector<problem::EvaluatedSolution> front;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < candidates.size() && !dominated; ++j)
            if (i != j && dominates(candidates[j].internal_values, candidates[i].internal_values))
                dominated = true;
        if (!dominated) front.push_back(candidates[i]);
    }
    std::sort(front.begin(), front.end(),
              [](const auto& a, const auto& b) { return a.genotype < b.genotype; });
    return front;
}

}  // namespace iacopt::oracle
