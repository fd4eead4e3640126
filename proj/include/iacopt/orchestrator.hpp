#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "iacopt/catalogue.hpp"
#include "iacopt/doml/emitter.hpp"
#include "iacopt/doml/parser.hpp"
#include "iacopt/moea/evolution.hpp"
#include "iacopt/oracle.hpp"
#include "iacopt/problem.hpp"

namespace iacopt::orchestrator {

enum class Engine { nsga2, nsga3, exhaustive };

inline const char* to_string(Engine engine) {
    switch (engine) {
    case Engine::nsga2: return "NSGA-II";
    case Engine::nsga3: return "NSGA-III";
    case Engine::exhaustive: return "exhaustive";
    }
    return "?";
}

struct RunReport {
    Engine algorithm = Engine::nsga2;
    std::uint64_t search_space_size = 0;
    int generations = 0;
    std::uint64_t evaluation_count = 0;
    std::size_t feasible_count = 0;
    std::size_t solution_count = 0;
    bool feasible = true;
    std::chrono::duration<double> duration{0.0};
    std::vector<std::string> warnings;
};

struct Options {
    std::optional<moea::Algorithm> algorithm_override;
    std::size_t max_solutions = 5;
    std::string cost_unit = "euro";
    bool brute_force = false;
    oracle::EnumerationBudget budget{};
    doml::ConcretizationOptions concretization{};
};

struct RankedSolution {
    problem::EvaluatedSolution solution;
    std::string name;   // sol1, sol2, ...
    bool active = false;
};

struct OptimizeResult {
    std::string output_text;  // empty when infeasible
    RunReport report;
    std::vector<RankedSolution> solutions;
    /// Minimum-violation solution for diagnosis when report.feasible is false.
    std::optional<problem::EvaluatedSolution> best_infeasible;
    std::string infeasibility_note;
};

/// Three or more objectives use NSGA-III, fewer use NSGA-II (a single
/// objective degenerates it into an elitist GA).
inline moea::Algorithm select_algorithm(const doml::OptimizationSpec& spec) {
    if (spec.objectives.empty())
        throw problem::SpecError("spec declares no objectives");
    return spec.objectives.size() >= 3 ? moea::Algorithm::nsga3 : moea::Algorithm::nsga2;
}

/// Sorts by the priority objective in its user direction, breaking ties by the
/// remaining objectives in declaration order and finally by genotype; keeps
/// the best k, names them sol1..sol_k and marks the first active.
inline std::vector<RankedSolution> rank_and_select(
    std::vector<problem::EvaluatedSolution> solutions, const doml::OptimizationSpec& spec,
    std::size_t k = 5) {
    if (solutions.empty())
        throw problem::InfeasibleError("no solutions to rank");
    if (k < 1) throw std::invalid_argument("k must be at least 1");

    std::vector<std::size_t> objective_order;
    objective_order.push_back(spec.priority);
    for (std::size_t i = 0; i < spec.objectives.size(); ++i)
        if (i != spec.priority) objective_order.push_back(i);

    auto better = [&](const problem::EvaluatedSolution& a, const problem::EvaluatedSolution& b) {
        for (std::size_t idx : objective_order) {
            double av = a.objective_values[idx];
            double bv = b.objective_values[idx];
            if (av != bv) {
                return spec.objectives[idx].direction == doml::Direction::minimize ? av < bv
                                                                                   : av > bv;
            }
        }
        return a.genotype < b.genotype;
    };
    std::sort(solutions.begin(), solutions.end(), better);
    if (solutions.size() > k) solutions.resize(k);

    std::vector<RankedSolution> ranked;
    ranked.reserve(solutions.size());
    for (std::size_t i = 0; i < solutions.size(); ++i)
        ranked.push_back(RankedSolution{std::move(solutions[i]),
                                        "sol" + std::to_string(i + 1), i == 0});
    return ranked;
}

namespace detail {

inline std::string objective_unit(doml::ObjectiveName name, const Options& opts) {
    switch (name) {
    case doml::ObjectiveName::cost: return opts.cost_unit;
    case doml::ObjectiveName::availability: return "%";
    case doml::ObjectiveName::performance: return "metric";
    }
    return "";
}

inline doml::SolutionRecord to_record(const RankedSolution& ranked,
                                      const problem::DeploymentProblem& prob,
                                      const doml::OptimizationSpec& spec, const Options& opts) {
    doml::SolutionRecord record;
    record.name = ranked.name;
    for (std::size_t i = 0; i < spec.objectives.size(); ++i) {
        record.objective_values.push_back(doml::ObjectiveValue{
            doml::to_string(spec.objectives[i].name), ranked.solution.objective_values[i],
            objective_unit(spec.objectives[i].name, opts)});
    }
    for (std::size_t slot = 0; slot < ranked.solution.genotype.size(); ++slot) {
        const auto& pool = prob.candidates[slot];
        record.decisions.push_back(
            pool[static_cast<std::size_t>(ranked.solution.genotype[slot])].id);
    }
    return record;
}

}  // namespace detail

/// End-to-end pipeline: parse, build, search, rank, emit. The output text is
/// the input text with solution blocks spliced into the optimization layer and
/// one concrete_infrastructure block per solution appended.
inline OptimizeResult optimize(const std::string& doml_text, const catalogue::Catalogue& cat,
                               const moea::AlgoParams& params, const Options& opts = {}) {
    auto started = std::chrono::steady_clock::now();
    OptimizeResult result;

    doml::Document doc = doml::parse_document(doml_text);
    for (const auto& warning : doc.warnings)
        result.report.warnings.push_back("parse: " + warning.message);
    if (!doc.optimization)
        throw doml::ParseError("document contains no optimization layer", 1, 1);
    const doml::OptimizationSpec& spec = *doc.optimization;

    problem::DeploymentProblem prob = problem::build_problem(spec, cat);
    result.report.search_space_size = prob.search_space_size;

    std::vector<problem::EvaluatedSolution> found;
    if (opts.brute_force) {
        result.report.algorithm = Engine::exhaustive;
        found = oracle::brute_force_pareto(prob, opts.budget);
        result.report.evaluation_count = prob.search_space_size;
        result.report.generations = 0;
    } else {
        moea::Algorithm algorithm =
            opts.algorithm_override ? *opts.algorithm_override : select_algorithm(spec);
        result.report.algorithm =
            algorithm == moea::Algorithm::nsga2 ? Engine::nsga2 : Engine::nsga3;
        moea::Rng rng(params.seed);
        moea::EvolutionResult evolution = moea::run_evolution(prob, params, algorithm, rng);
        found = std::move(evolution.solutions);
        result.report.evaluation_count = evolution.evaluations;
        result.report.generations = evolution.generations;
    }

    result.report.feasible_count = static_cast<std::size_t>(
        std::count_if(found.begin(), found.end(),
                      [](const auto& s) { return s.constraints.feasible; }));

    if (result.report.feasible_count == 0) {
        result.report.feasible = false;
        if (!found.empty()) {
            auto best = std::min_element(found.begin(), found.end(),
                                         [](const auto& a, const auto& b) {
                                             return a.constraints.total_violation <
                                                    b.constraints.total_violation;
                                         });
            result.best_infeasible = *best;

            std::string note = "closest configuration [";
            for (std::size_t slot = 0; slot < best->genotype.size(); ++slot) {
                if (slot) note += ", ";
                note += prob.candidates[slot][static_cast<std::size_t>(best->genotype[slot])].id;
            }
            note += "] still violates:";
            for (std::size_t i = 0; i < prob.aggregate_bounds.size(); ++i) {
                if (best->constraints.violations[i] <= 0.0) continue;
                const auto& bound = prob.aggregate_bounds[i];
                note += " " + bound.id + " (" + to_string(bound.target) + " " +
                        doml::format_number(problem::aggregate_property(best->genotype, prob,
                                                                        bound.target)) +
                        " vs " + (bound.kind == doml::BoundKind::max ? "max " : "min ") +
                        doml::format_number(bound.threshold) + ")";
            }
            result.infeasibility_note = std::move(note);
        }
        result.report.duration = std::chrono::steady_clock::now() - started;
        return result;
    }

    result.solutions = rank_and_select(std::move(found), spec, opts.max_solutions);
    result.report.solution_count = result.solutions.size();

    std::vector<doml::SolutionRecord> records;
    records.reserve(result.solutions.size());
    for (const auto& ranked : result.solutions)
        records.push_back(detail::to_record(ranked, prob, spec, opts));

    std::string text = doml::emit_solutions(doml_text, doc, records);
    if (doc.infrastructure) {
        doml::ConcretizationResult concretization =
            doml::emit_concretization(records, *doc.infrastructure, cat, opts.concretization);
        for (auto& warning : concretization.warnings)
            result.report.warnings.push_back("concretization: " + warning);
        if (!text.empty() && text.back() != '\n') text += '\n';
        text += '\n';
        text += concretization.text;
        text += '\n';
    } else {
        result.report.warnings.push_back(
            "document has no infrastructure layer; concretization skipped");
    }
    result.output_text = std::move(text);
    result.report.duration = std::chrono::steady_clock::now() - started;
    return result;
}

}  // namespace iacopt::orchestrator
