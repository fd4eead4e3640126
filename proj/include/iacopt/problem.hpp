#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "iacopt/catalogue.hpp"
#include "iacopt/doml/ast.hpp"
#include "iacopt/doml/text_util.hpp"

namespace iacopt::problem {

/// Raised when the spec itself is unusable (missing/ambiguous `elements`
/// requirement, unknown element type token).
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when matchmaking leaves a slot with no candidates: no configuration
/// can satisfy the requirements, regardless of search.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One catalogue index per slot.
using Genotype = std::vector<std::int32_t>;

/// The combinatorial selection problem: ordered element-type slots, each with
/// its post-matchmaking candidate list, plus the aggregate objectives and
/// bounds evaluated on whole configurations.
struct DeploymentProblem {
    std::vector<catalogue::ElementType> slots;
    std::vector<std::vector<catalogue::CatalogueElement>> candidates;
    std::vector<doml::ObjectiveSpec> objectives;
    std::vector<doml::AggregateBound> aggregate_bounds;
    std::size_t priority = 0;
    std::uint64_t search_space_size = 0;  // saturates at uint64 max
};

struct ConstraintReport {
    std::vector<double> violations;  // one per aggregate bound, >= 0
    double total_violation = 0.0;
    bool feasible = true;
};

struct EvaluatedSolution {
    Genotype genotype;
    std::vector<double> objective_values;  // user orientation, declaration order
    std::vector<double> internal_values;   // all-minimization orientation
    ConstraintReport constraints;
};

namespace detail {

inline const catalogue::CatalogueElement& gene_element(const Genotype& genotype,
                                                       const DeploymentProblem& problem,
                                                       std::size_t slot) {
    std::int32_t gene = genotype.at(slot);
    const auto& pool = problem.candidates[slot];
    if (gene < 0 || static_cast<std::size_t>(gene) >= pool.size())
        throw std::out_of_range("gene " + std::to_string(gene) + " is out of range for slot " +
                                std::to_string(slot));
    return pool[static_cast<std::size_t>(gene)];
}

}  // namespace detail

/// Aggregates one property over the chosen elements: cost and performance are
/// sums, availability is the arithmetic mean.
inline double aggregate_property(const Genotype& genotype, const DeploymentProblem& problem,
                                 doml::BoundTarget target) {
    if (genotype.size() != problem.slots.size())
        throw std::invalid_argument("genotype length does not match slot count");
    double acc = 0.0;
    for (std::size_t i = 0; i < genotype.size(); ++i) {
        const auto& element = detail::gene_element(genotype, problem, i);
        switch (target) {
        case doml::BoundTarget::cost: acc += element.cost; break;
        case doml::BoundTarget::performance: acc += element.performance; break;
        case doml::BoundTarget::availability: acc += element.availability; break;
        }
    }
    if (target == doml::BoundTarget::availability && !genotype.empty())
        acc /= static_cast<double>(genotype.size());
    return acc;
}

inline doml::BoundTarget target_of(doml::ObjectiveName name) {
    switch (name) {
    case doml::ObjectiveName::cost: return doml::BoundTarget::cost;
    case doml::ObjectiveName::performance: return doml::BoundTarget::performance;
    case doml::ObjectiveName::availability: return doml::BoundTarget::availability;
    }
    throw std::invalid_argument("unknown objective");
}

/// Objective vector in declaration order, user orientation.
inline std::vector<double> evaluate_objectives(const Genotype& genotype,
                                               const DeploymentProblem& problem) {
    std::vector<double> values;
    values.reserve(problem.objectives.size());
    for (const auto& obj : problem.objectives)
        values.push_back(aggregate_property(genotype, problem, target_of(obj.name)));
    return values;
}

/// Normalized violation per aggregate bound. A max bound over value v adds
/// max(0, v - threshold) / max(|threshold|, 1); a min bound the mirror image.
inline ConstraintReport evaluate_constraints(const Genotype& genotype,
                                             const DeploymentProblem& problem) {
    ConstraintReport report;
    report.violations.reserve(problem.aggregate_bounds.size());
    for (const auto& bound : problem.aggregate_bounds) {
        double value = aggregate_property(genotype, problem, bound.target);
        double scale = std::max(std::abs(bound.threshold), 1.0);
        double violation = bound.kind == doml::BoundKind::max
                               ? std::max(0.0, value - bound.threshold) / scale
                               : std::max(0.0, bound.threshold - value) / scale;
        report.violations.push_back(violation);
        report.total_violation += violation;
    }
    report.feasible = report.total_violation == 0.0;
    return report;
}

/// Flips the sign of maximized objectives so that every internal coordinate
/// is minimized.
inline std::vector<double> to_internal(const std::vector<double>& objective_values,
                                       const std::vector<doml::ObjectiveSpec>& objectives) {
    if (objective_values.size() != objectives.size())
        throw std::invalid_argument("objective vector length mismatch");
    std::vector<double> internal(objective_values);
    for (std::size_t i = 0; i < internal.size(); ++i)
        if (objectives[i].direction == doml::Direction::maximize) internal[i] = -internal[i];
    return internal;
}

/// Full evaluation of one genotype.
inline EvaluatedSolution evaluate(const Genotype& genotype, const DeploymentProblem& problem) {
    EvaluatedSolution sol;
    sol.genotype = genotype;
    sol.objective_values = evaluate_objectives(genotype, problem);
    sol.internal_values = to_internal(sol.objective_values, problem.objectives);
    sol.constraints = evaluate_constraints(genotype, problem);
    return sol;
}

/// Builds the search space from a parsed optimization spec and a catalogue:
/// slots come from the `elements` requirement (declaration order), candidates
/// from matchmaking, bounds from the aggregate requirements.
inline DeploymentProblem build_problem(const doml::OptimizationSpec& spec,
                                       const catalogue::Catalogue& cat) {
    const doml::KeyValue* elements_req = nullptr;
    for (const auto& req : spec.requirements) {
        if (const auto* kv = std::get_if<doml::KeyValue>(&req); kv && kv->key == "elements") {
            if (elements_req)
                throw SpecError("spec declares more than one 'elements' requirement");
            elements_req = kv;
        }
    }
    if (!elements_req)
        throw SpecError("spec has no 'elements' requirement; nothing to deploy");

    DeploymentProblem problem;
    problem.objectives = spec.objectives;
    problem.priority = spec.priority;
    for (const auto& req : spec.requirements)
        if (const auto* bound = std::get_if<doml::AggregateBound>(&req))
            problem.aggregate_bounds.push_back(*bound);

    problem.search_space_size = 1;
    for (const auto& token : doml::detail::split_csv(elements_req->value)) {
        auto type = catalogue::element_type_from_string(token);
        if (!type)
            throw SpecError("unknown element type '" + token + "' in 'elements' requirement");
        auto pool = catalogue::filter_candidates(cat, *type, spec.requirements);
        if (pool.empty()) {
            std::string active;
            for (const auto& req : spec.requirements) {
                if (const auto* match = std::get_if<doml::CategoricalMatch>(&req))
                    active += " " + match->id + "(" + to_string(match->target) + ")";
                else if (const auto* kv = std::get_if<doml::KeyValue>(&req);
                         kv && kv->key == "max_VM_memory")
                    active += " " + kv->id + "(max_VM_memory " + kv->value + ")";
            }
            throw InfeasibleError("no catalogue element satisfies the requirements for slot " +
                                  std::to_string(problem.slots.size() + 1) + " (" + token +
                                  "); active element requirements:" +
                                  (active.empty() ? " none" : active));
        }
        problem.slots.push_back(*type);
        std::uint64_t size = pool.size();
        if (problem.search_space_size > std::numeric_limits<std::uint64_t>::max() / size)
            problem.search_space_size = std::numeric_limits<std::uint64_t>::max();
        else
            problem.search_space_size *= size;
        problem.candidates.push_back(std::move(pool));
    }
    return problem;
}

}  // namespace iacopt::problem
