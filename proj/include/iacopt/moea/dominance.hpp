#pragma once

#include <span>
#include <stdexcept>

#include "iacopt/moea/individual.hpp"

namespace iacopt::moea {

/// Pareto dominance in the all-minimization orientation: a is no worse in
/// every coordinate and strictly better in at least one.
inline bool pareto_dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("objective vectors have different dimensions");
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

/// Feasibility-first dominance: feasible beats infeasible; among infeasible,
/// less total violation wins; among feasible, plain Pareto dominance.
inline bool constrained_dominates(const Individual& a, const Individual& b) {
    if (a.feasible() && !b.feasible()) return true;
    if (!a.feasible() && b.feasible()) return false;
    if (!a.feasible())  // both infeasible
        return a.violation() < b.violation();
    return pareto_dominates(a.internal(), b.internal());
}

}  // namespace iacopt::moea
