#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "iacopt/oracle.hpp"
#include "test_util.hpp"

using namespace iacopt;
using namespace iacopt::oracle;

namespace {

/// Independent pairwise double-loop filter over evaluated solutions (third
/// implementation of dominance, used only to audit brute_force_pareto).
std::vector<problem::EvaluatedSolution> double_loop_front(
    std::vector<problem::EvaluatedSolution> feasible) {
    std::vector<problem::EvaluatedSolution> front;
    for (std::size_t i = 0; i < feasible.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < feasible.size(); ++j) {
            if (i == j) continue;
            bool no_worse = true, strictly = false;
            for (std::size_t k = 0; k < feasible[i].internal_values.size(); ++k) {
                if (feasible[j].internal_values[k] > feasible[i].internal_values[k])
                    no_worse = false;
                if (feasible[j].internal_values[k] < feasible[i].internal_values[k])
                    strictly = true;
            }
            if (no_worse && strictly) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.push_back(feasible[i]);
    }
    return front;
}

std::set<problem::Genotype> genotypes(const std::vector<problem::EvaluatedSolution>& sols) {
    std::set<problem::Genotype> out;
    for (const auto& s : sols) out.insert(s.genotype);
    return out;
}

}  // namespace

TEST(EnumerateAll, SingletonSpace) {
    auto prob = testutil::make_problem({{{10, 95, 2}}}, testutil::objectives_all_three());
    auto all = enumerate_all(prob);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].genotype, (problem::Genotype{0}));
}

TEST(EnumerateAll, FourByFiveSpace) {
    std::mt19937_64 rng(3);
    std::vector<std::vector<std::array<double, 3>>> slots(2);
    for (int i = 0; i < 4; ++i) slots[0].push_back({10.0 + i, 95, 2});
    for (int i = 0; i < 5; ++i) slots[1].push_back({20.0 + i, 96, 3});
    auto prob = testutil::make_problem(slots, testutil::objectives_cost_min_perf_max());
    EXPECT_EQ(enumerate_all(prob).size(), 20u);
}

TEST(EnumerateAll, TwoCubedDistinctGenotypes) {
    std::vector<std::vector<std::array<double, 3>>> slots(3);
    for (auto& slot : slots) {
        slot.push_back({10, 95, 2});
        slot.push_back({20, 96, 3});
    }
    auto prob = testutil::make_problem(slots, testutil::objectives_cost_min_perf_max());
    auto all = enumerate_all(prob);
    ASSERT_EQ(all.size(), 8u);
    EXPECT_EQ(genotypes(all).size(), 8u);
}

TEST(EnumerateAll, BudgetExceededRejected) {
    std::vector<std::vector<std::array<double, 3>>> slots(2);
    for (int i = 0; i < 4; ++i) slots[0].push_back({10.0 + i, 95, 2});
    for (int i = 0; i < 5; ++i) slots[1].push_back({20.0 + i, 96, 3});
    auto prob = testutil::make_problem(slots, testutil::objectives_cost_min_perf_max());
    EnumerationBudget tight{10};
    EXPECT_THROW(enumerate_all(prob, tight), BudgetExceededError);
    EXPECT_THROW(brute_force_pareto(prob, tight), BudgetExceededError);
}

TEST(BruteForcePareto, DominantSingleton) {
    // One genotype dominates everything: cheapest, best availability, best
    // performance.
    std::vector<std::vector<std::array<double, 3>>> slots(1);
    slots[0] = {{10, 99, 9}, {20, 95, 5}, {30, 91, 1}};
    auto prob = testutil::make_problem(slots, testutil::objectives_all_three());
    auto front = brute_force_pareto(prob);
    ASSERT_EQ(front.size(), 1u);
    EXPECT_EQ(front[0].genotype, (problem::Genotype{0}));
}

TEST(BruteForcePareto, AntichainKeepsBoth) {
    std::vector<std::vector<std::array<double, 3>>> slots(1);
    slots[0] = {{10, 95, 1}, {20, 95, 5}};
    auto prob = testutil::make_problem(slots, testutil::objectives_cost_min_perf_max());
    auto front = brute_force_pareto(prob);
    EXPECT_EQ(front.size(), 2u);
}

TEST(BruteForcePareto, MatchesIndependentDoubleLoopFilter) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<std::array<double, 3>>> slots(2);
        for (int i = 0; i < 4; ++i)
            slots[0].push_back({testutil::snap(rng, 10, 100, 2),
                                testutil::snap(rng, 90, 100, 2),
                                testutil::snap(rng, 1, 10, 1)});
        for (int i = 0; i < 5; ++i)
            slots[1].push_back({testutil::snap(rng, 10, 100, 2),
                                testutil::snap(rng, 90, 100, 2),
                                testutil::snap(rng, 1, 10, 1)});
        auto prob = testutil::make_problem(slots, testutil::objectives_all_three());

        auto front = brute_force_pareto(prob);
        auto all = enumerate_all(prob);
        std::vector<problem::EvaluatedSolution> feasible;
        for (const auto& s : all)
            if (s.constraints.feasible) feasible.push_back(s);
        auto expected = double_loop_front(std::move(feasible));
        EXPECT_EQ(genotypes(front), genotypes(expected)) << "trial " << trial;
    }
}

TEST(BruteForcePareto, FrontMembersMutuallyNonDominatedAndComplete) {
    std::mt19937_64 rng(29);
    std::vector<std::vector<std::array<double, 3>>> slots(2);
    for (int i = 0; i < 8; ++i)
        slots[0].push_back({testutil::snap(rng, 10, 100, 2), testutil::snap(rng, 90, 100, 2),
                            testutil::snap(rng, 1, 10, 1)});
    for (int i = 0; i < 8; ++i)
        slots[1].push_back({testutil::snap(rng, 10, 100, 2), testutil::snap(rng, 90, 100, 2),
                            testutil::snap(rng, 1, 10, 1)});
    auto prob = testutil::make_problem(slots, testutil::objectives_all_three());

    auto front = brute_force_pareto(prob);
    auto front_set = genotypes(front);
    auto dominates = [](const auto& a, const auto& b) {
        bool strict = false;
        for (std::size_t k = 0; k < a.internal_values.size(); ++k) {
            if (a.internal_values[k] > b.internal_values[k]) return false;
            if (a.internal_values[k] < b.internal_values[k]) strict = true;
        }
        return strict;
    };
    for (const auto& a : front)
        for (const auto& b : front)
            if (a.genotype != b.genotype) EXPECT_FALSE(dominates(a, b));

    // Every excluded feasible genotype is dominated by some front member.
    for (const auto& s : enumerate_all(prob)) {
        if (!s.constraints.feasible || front_set.count(s.genotype)) continue;
        bool covered = false;
        for (const auto& member : front)
            if (dominates(member, s)) covered = true;
        EXPECT_TRUE(covered);
    }
}

TEST(BruteForcePareto, OrderIndependentOfCandidateOrder) {
    std::mt19937_64 rng(37);
    std::vector<std::vector<std::array<double, 3>>> slots(2);
    for (int i = 0; i < 5; ++i)
        slots[0].push_back({testutil::snap(rng, 10, 100, 2), testutil::snap(rng, 90, 100, 2),
                            testutil::snap(rng, 1, 10, 1)});
    for (int i = 0; i < 4; ++i)
        slots[1].push_back({testutil::snap(rng, 10, 100, 2), testutil::snap(rng, 90, 100, 2),
                            testutil::snap(rng, 1, 10, 1)});
    auto prob = testutil::make_problem(slots, testutil::objectives_all_three());
    auto baseline = brute_force_pareto(prob);

    // Permute candidate order within each slot; the front as a set of
    // objective vectors must not change.
    auto shuffled_slots = slots;
    std::shuffle(shuffled_slots[0].begin(), shuffled_slots[0].end(), rng);
    std::shuffle(shuffled_slots[1].begin(), shuffled_slots[1].end(), rng);
    auto shuffled_prob =
        testutil::make_problem(shuffled_slots, testutil::objectives_all_three());
    auto shuffled = brute_force_pareto(shuffled_prob);

    auto values = [](const std::vector<problem::EvaluatedSolution>& sols) {
        std::multiset<std::vector<double>> out;
        for (const auto& s : sols) out.insert(s.objective_values);
        return out;
    };
    EXPECT_EQ(values(baseline), values(shuffled));
}

TEST(BruteForcePareto, NoFeasibleReturnsMinimumViolationSet) {
    iacopt::doml::AggregateBound impossible{"req", "cost <= 1", iacopt::doml::BoundKind::max,
                                            1.0, iacopt::doml::BoundTarget::cost};
    std::vector<std::vector<std::array<double, 3>>> slots(1);
    slots[0] = {{50, 95, 2}, {80, 96, 4}, {50, 99, 9}};
    auto prob = testutil::make_problem(slots, testutil::objectives_cost_min_perf_max(),
                                       {impossible});
    auto result = brute_force_pareto(prob);
    // Two genotypes share the minimal cost of 50.
    ASSERT_EQ(result.size(), 2u);
    for (const auto& s : result) {
        EXPECT_FALSE(s.constraints.feasible);
        EXPECT_NEAR(s.constraints.total_violation, 49.0, 1e-12);
    }
}
