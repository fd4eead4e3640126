#include <gtest/gtest.h>

#include <random>
#include <set>

#include "iacopt/orchestrator.hpp"
#include "test_util.hpp"

using namespace iacopt;
using namespace iacopt::orchestrator;

namespace {

doml::OptimizationSpec spec_with_objectives(std::vector<doml::ObjectiveSpec> objectives) {
    doml::OptimizationSpec spec;
    spec.name = "opt";
    spec.objectives = std::move(objectives);
    spec.requirements = {doml::KeyValue{"req5", "elements", "VM"}};
    return spec;
}

problem::EvaluatedSolution solution_with(std::vector<double> values,
                                         const std::vector<doml::ObjectiveSpec>& objectives,
                                         problem::Genotype genes) {
    problem::EvaluatedSolution sol;
    sol.genotype = std::move(genes);
    sol.objective_values = std::move(values);
    sol.internal_values = problem::to_internal(sol.objective_values, objectives);
    sol.constraints.feasible = true;
    return sol;
}

moea::AlgoParams fast_params(std::uint64_t seed = 42) {
    moea::AlgoParams params;
    params.population_size = 20;
    params.generations = 30;
    params.seed = seed;
    return params;
}

}  // namespace

// ---------------------------------------------------------------------------
// select_algorithm
// ---------------------------------------------------------------------------

TEST(SelectAlgorithm, ThreeObjectivesUseNsga3) {
    auto spec = spec_with_objectives(testutil::objectives_all_three());
    EXPECT_EQ(select_algorithm(spec), moea::Algorithm::nsga3);
}

TEST(SelectAlgorithm, TwoObjectivesUseNsga2) {
    auto spec = spec_with_objectives(testutil::objectives_cost_min_perf_max());
    EXPECT_EQ(select_algorithm(spec), moea::Algorithm::nsga2);
}

TEST(SelectAlgorithm, MonoObjectiveUsesNsga2) {
    auto spec = spec_with_objectives(
        {{doml::ObjectiveName::cost, doml::Direction::minimize}});
    EXPECT_EQ(select_algorithm(spec), moea::Algorithm::nsga2);
}

TEST(SelectAlgorithm, ZeroObjectivesRejected) {
    auto spec = spec_with_objectives({});
    EXPECT_THROW(select_algorithm(spec), problem::SpecError);
}

// ---------------------------------------------------------------------------
// rank_and_select
// ---------------------------------------------------------------------------

TEST(RankAndSelect, SevenSolutionsTruncateToFive) {
    auto objectives = testutil::objectives_cost_min_perf_max();
    auto spec = spec_with_objectives(objectives);
    std::vector<problem::EvaluatedSolution> sols;
    for (int i = 0; i < 7; ++i)
        sols.push_back(solution_with({100.0 + 10 * i, 10.0 - i}, objectives, {i}));

    auto ranked = rank_and_select(sols, spec, 5);
    ASSERT_EQ(ranked.size(), 5u);
    EXPECT_EQ(ranked[0].name, "sol1");
    EXPECT_TRUE(ranked[0].active);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        EXPECT_FALSE(ranked[i].active);
        EXPECT_EQ(ranked[i].name, "sol" + std::to_string(i + 1));
    }
    // Priority objective (cost, minimize) ascending.
    for (std::size_t i = 1; i < ranked.size(); ++i)
        EXPECT_LE(ranked[i - 1].solution.objective_values[0],
                  ranked[i].solution.objective_values[0]);
}

TEST(RankAndSelect, SingletonIsActiveSol1) {
    auto objectives = testutil::objectives_cost_min_perf_max();
    auto spec = spec_with_objectives(objectives);
    auto ranked = rank_and_select({solution_with({100, 5}, objectives, {0})}, spec, 5);
    ASSERT_EQ(ranked.size(), 1u);
    EXPECT_EQ(ranked[0].name, "sol1");
    EXPECT_TRUE(ranked[0].active);
}

TEST(RankAndSelect, CostPriorityOrders190Then210Then230) {
    auto objectives = testutil::objectives_cost_min_perf_max();
    auto spec = spec_with_objectives(objectives);
    std::vector<problem::EvaluatedSolution> sols = {
        solution_with({210, 4}, objectives, {0}),
        solution_with({190, 3}, objectives, {1}),
        solution_with({230, 5}, objectives, {2}),
    };
    auto ranked = rank_and_select(sols, spec, 5);
    ASSERT_EQ(ranked.size(), 3u);
    EXPECT_DOUBLE_EQ(ranked[0].solution.objective_values[0], 190.0);
    EXPECT_DOUBLE_EQ(ranked[1].solution.objective_values[0], 210.0);
    EXPECT_DOUBLE_EQ(ranked[2].solution.objective_values[0], 230.0);
}

TEST(RankAndSelect, MaxPriorityDescends) {
    std::vector<doml::ObjectiveSpec> objectives = {
        {doml::ObjectiveName::performance, doml::Direction::maximize},
        {doml::ObjectiveName::cost, doml::Direction::minimize}};
    auto spec = spec_with_objectives(objectives);
    std::vector<problem::EvaluatedSolution> sols = {
        solution_with({4, 100}, objectives, {0}),
        solution_with({9, 150}, objectives, {1}),
    };
    auto ranked = rank_and_select(sols, spec, 5);
    EXPECT_DOUBLE_EQ(ranked[0].solution.objective_values[0], 9.0);
}

TEST(RankAndSelect, TiesFallThroughSecondaryObjectivesThenGenotype) {
    auto objectives = testutil::objectives_cost_min_perf_max();
    auto spec = spec_with_objectives(objectives);
    std::vector<problem::EvaluatedSolution> sols = {
        solution_with({100, 4}, objectives, {3}),
        solution_with({100, 9}, objectives, {1}),  // same cost, better performance
        solution_with({100, 4}, objectives, {0}),  // full tie with first: genotype decides
    };
    auto ranked = rank_and_select(sols, spec, 5);
    EXPECT_DOUBLE_EQ(ranked[0].solution.objective_values[1], 9.0);
    EXPECT_EQ(ranked[1].solution.genotype, (problem::Genotype{0}));
    EXPECT_EQ(ranked[2].solution.genotype, (problem::Genotype{3}));
}

TEST(RankAndSelect, EmptyInputSignalsInfeasibility) {
    auto spec = spec_with_objectives(testutil::objectives_cost_min_perf_max());
    EXPECT_THROW(rank_and_select({}, spec, 5), problem::InfeasibleError);
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

TEST(Optimize, ReferenceScenarioEndToEnd) {
    auto cat = testutil::reference_catalogue_with_distractors();
    auto result = optimize(testutil::reference_document(), cat, fast_params());

    EXPECT_TRUE(result.report.feasible);
    EXPECT_EQ(result.report.algorithm, Engine::nsga3);
    EXPECT_EQ(result.report.search_space_size, 1u);
    ASSERT_EQ(result.solutions.size(), 1u);
    EXPECT_NEAR(result.solutions[0].solution.objective_values[0], 230.53, 1e-9);

    const std::string& text = result.output_text;
    EXPECT_NE(text.find("solution sol1 {"), std::string::npos);
    EXPECT_NE(text.find("cost 230.53 euro"), std::string::npos);
    EXPECT_NE(text.find("availability 97.5 %"), std::string::npos);
    EXPECT_NE(text.find("performance 8.0 metric"), std::string::npos);
    EXPECT_NE(text.find("concrete_infrastructure opt_infra1 {"), std::string::npos);
    EXPECT_NE(text.find("maps OracleDB"), std::string::npos);
    EXPECT_NE(text.find("image_name \"ami-012e54b30d5c6bc9d\""), std::string::npos);
}

TEST(Optimize, MissingOptimizationLayerIsStructuredError) {
    auto cat = testutil::reference_catalogue();
    EXPECT_THROW(optimize(testutil::kReferenceInfrastructureLayer, cat, fast_params()),
                 doml::ParseError);
}

TEST(Optimize, OutputAlwaysReparsesAndCountsMatch) {
    std::mt19937_64 rng(2025);
    auto cat = testutil::random_catalogue(rng, 5, 4);
    std::string text = R"(optimization opt {
      objectives {
        "cost" => min
        "performance" => max
      }
      nonfunctional_requirements {
        req5 "elements" => "VM, Storage"
      }
    }
)";
    auto result = optimize(text, cat, fast_params(7));
    ASSERT_TRUE(result.report.feasible);
    doml::Document reparsed = doml::parse_document(result.output_text);
    ASSERT_TRUE(reparsed.optimization.has_value());
    EXPECT_EQ(reparsed.optimization->solutions.size(), result.report.solution_count);
    EXPECT_EQ(result.solutions.size(), result.report.solution_count);
    EXPECT_LE(result.report.solution_count, 5u);
    // No infrastructure layer: concretization skipped with a warning.
    EXPECT_TRUE(reparsed.concrete.empty());
    bool warned = false;
    for (const auto& w : result.report.warnings)
        if (w.find("no infrastructure layer") != std::string::npos) warned = true;
    EXPECT_TRUE(warned);
}

TEST(Optimize, SyntheticSpaceSolutionsComeFromBruteForceFront) {
    std::mt19937_64 rng(321);
    auto cat = testutil::random_catalogue(rng, 4, 5);
    std::string text = R"(optimization opt {
      objectives {
        "cost" => min
        "availability" => max
      }
      nonfunctional_requirements {
        req5 "elements" => "VM, Storage"
      }
    }
)";
    doml::OptimizationSpec spec = *doml::parse_document(text).optimization;
    auto prob = problem::build_problem(spec, cat);
    auto front = oracle::brute_force_pareto(prob);
    std::set<problem::Genotype> front_set;
    for (const auto& s : front) front_set.insert(s.genotype);

    moea::AlgoParams params;
    params.population_size = 40;
    params.generations = 60;
    params.seed = 5;
    auto result = optimize(text, cat, params);
    ASSERT_TRUE(result.report.feasible);
    EXPECT_LE(result.solutions.size(), 5u);
    for (const auto& ranked : result.solutions)
        EXPECT_TRUE(front_set.count(ranked.solution.genotype))
            << "returned solution outside the brute-force front";
}

TEST(Optimize, InfeasibleSpecTerminatesWithDistinctState) {
    auto cat = testutil::reference_catalogue();
    std::string text = R"(optimization opt {
      objectives { "cost" => min }
      nonfunctional_requirements {
        req1 "cost <= 1" max 1.0 => "cost"
        req5 "elements" => "VM, Storage"
      }
    }
)";
    auto result = optimize(text, cat, fast_params());
    EXPECT_FALSE(result.report.feasible);
    EXPECT_TRUE(result.output_text.empty());
    EXPECT_TRUE(result.solutions.empty());
    ASSERT_TRUE(result.best_infeasible.has_value());
    EXPECT_GT(result.best_infeasible->constraints.total_violation, 0.0);
    EXPECT_NE(result.infeasibility_note.find("req1"), std::string::npos);
}

TEST(Optimize, ZeroCandidateSlotPropagatesSlotContext) {
    auto cat = testutil::reference_catalogue();
    std::string text = R"(optimization opt {
      objectives { "cost" => min }
      nonfunctional_requirements {
        req3 "Provider" values "outer-space" => "provider"
        req5 "elements" => "VM"
      }
    }
)";
    try {
        optimize(text, cat, fast_params());
        FAIL() << "expected InfeasibleError";
    } catch (const problem::InfeasibleError& e) {
        EXPECT_NE(std::string(e.what()).find("VM"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("req3"), std::string::npos);
    }
}

TEST(Optimize, AlgorithmOverrideWins) {
    auto cat = testutil::reference_catalogue_with_distractors();
    Options opts;
    opts.algorithm_override = moea::Algorithm::nsga2;
    auto result = optimize(testutil::reference_document(), cat, fast_params(), opts);
    EXPECT_EQ(result.report.algorithm, Engine::nsga2);
}

TEST(Optimize, BruteForceEngineReported) {
    auto cat = testutil::reference_catalogue_with_distractors();
    Options opts;
    opts.brute_force = true;
    auto result = optimize(testutil::reference_document(), cat, fast_params(), opts);
    EXPECT_EQ(result.report.algorithm, Engine::exhaustive);
    ASSERT_EQ(result.solutions.size(), 1u);
    EXPECT_NEAR(result.solutions[0].solution.objective_values[0], 230.53, 1e-9);
}

TEST(Optimize, MaxSolutionsHonored) {
    std::mt19937_64 rng(55);
    auto cat = testutil::random_catalogue(rng, 6, 6);
    std::string text = R"(optimization opt {
      objectives {
        "cost" => min
        "performance" => max
      }
      nonfunctional_requirements {
        req5 "elements" => "VM, Storage"
      }
    }
)";
    Options opts;
    opts.max_solutions = 2;
    opts.brute_force = true;
    auto result = optimize(text, cat, fast_params(), opts);
    ASSERT_TRUE(result.report.feasible);
    EXPECT_LE(result.solutions.size(), 2u);
}

TEST(Optimize, CostUnitLabelConfigurable) {
    auto cat = testutil::reference_catalogue_with_distractors();
    Options opts;
    opts.cost_unit = "usd";
    auto result = optimize(testutil::reference_document(), cat, fast_params(), opts);
    EXPECT_NE(result.output_text.find("cost 230.53 usd"), std::string::npos);
}

// Positive affine rescaling of every element cost must keep the same active
// solution when cost is the priority (argmin invariance). Exact path via the
// exhaustive engine.
TEST(Optimize, ActiveSolutionInvariantUnderAffineCostRescaling) {
    std::mt19937_64 rng(808);
    auto cat = testutil::random_catalogue(rng, 5, 5);
    std::string text = R"(optimization opt {
      objectives {
        "cost" => min
        "availability" => max
      }
      nonfunctional_requirements {
        req5 "elements" => "VM, Storage"
      }
    }
)";
    Options opts;
    opts.brute_force = true;

    auto baseline = optimize(text, cat, fast_params(), opts);
    ASSERT_TRUE(baseline.report.feasible);

    auto rescaled_cat = cat;
    for (auto& e : rescaled_cat.elements) e.cost = 3.25 * e.cost + 10.0;
    auto rescaled = optimize(text, rescaled_cat, fast_params(), opts);
    ASSERT_TRUE(rescaled.report.feasible);

    EXPECT_EQ(baseline.solutions[0].solution.genotype, rescaled.solutions[0].solution.genotype);
}

TEST(Optimize, EvaluationCountMatchesFormula) {
    auto cat = testutil::reference_catalogue_with_distractors();
    moea::AlgoParams params = fast_params();
    params.population_size = 12;
    params.generations = 7;
    auto result = optimize(testutil::reference_document(), cat, params);
    EXPECT_EQ(result.report.evaluation_count, 12u * (7u + 1u));
}
