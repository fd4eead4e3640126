#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "iacopt/moea/reference_points.hpp"
#include "iacopt/moea/sorting.hpp"
#include "iacopt/moea/variation.hpp"

namespace iacopt::moea {

namespace nsga3detail {

constexpr double kWeightFloor = 1e-6;
constexpr double kSpanFloor = 1e-6;

/// Achievement scalarizing value of `values` under an axis weight vector with
/// a small floor on the off-axis components.
inline double achievement_scalarizing(const std::vector<double>& values, std::size_t axis) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        double weight = i == axis ? 1.0 : kWeightFloor;
        worst = std::max(worst, values[i] / weight);
    }
    return worst;
}

/// Solves A x = 1 by Gaussian elimination with partial pivoting. Returns an
/// empty vector when the system is (numerically) singular.
inline std::vector<double> solve_unit_rhs(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<double> rhs(n, 1.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-12) return {};
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Translated-then-normalized copies of the candidates' internal objective
/// vectors. The ideal point is the per-objective minimum over the merged
/// population; spans come from the extreme-point hyperplane intercepts, with
/// per-objective maxima as a degeneracy fallback and a floor of kSpanFloor.
inline std::vector<std::vector<double>> normalize(const std::vector<Individual>& merged,
                                                  const std::vector<std::size_t>& candidates) {
    const std::size_t m = merged.front().internal().size();

    std::vector<double> ideal(m, std::numeric_limits<double>::infinity());
    for (const auto& ind : merged)
        for (std::size_t j = 0; j < m; ++j) ideal[j] = std::min(ideal[j], ind.internal()[j]);

    std::vector<std::vector<double>> translated(candidates.size(), std::vector<double>(m));
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = 0; j < m; ++j)
            translated[i][j] = merged[candidates[i]].internal()[j] - ideal[j];

    // Extreme point per axis by minimal achievement scalarizing value.
    std::vector<std::size_t> extremes(m, 0);
    for (std::size_t axis = 0; axis < m; ++axis) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < translated.size(); ++i) {
            double asf = achievement_scalarizing(translated[i], axis);
            if (asf < best) {
                best = asf;
                extremes[axis] = i;
            }
        }
    }

    bool duplicate_extremes = false;
    for (std::size_t i = 0; i < m && !duplicate_extremes; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (extremes[i] == extremes[j]) {
                duplicate_extremes = true;
                break;
            }

    std::vector<double> span(m, 0.0);
    bool valid = !duplicate_extremes;
    if (valid) {
        std::vector<std::vector<double>> system(m);
        for (std::size_t i = 0; i < m; ++i) system[i] = translated[extremes[i]];
        std::vector<double> x = solve_unit_rhs(std::move(system));
        valid = !x.empty();
        for (std::size_t j = 0; valid && j < m; ++j) {
            if (!(x[j] > 0.0) || !std::isfinite(x[j])) valid = false;
            else span[j] = 1.0 / x[j];
        }
    }
    if (!valid) {
        // Degenerate extreme-point system: fall back to per-objective maxima.
        for (const auto& row : translated)
            for (std::size_t j = 0; j < m; ++j) span[j] = std::max(span[j], row[j]);
    }
    for (std::size_t j = 0; j < m; ++j) span[j] = std::max(span[j], kSpanFloor);

    for (auto& row : translated)
        for (std::size_t j = 0; j < m; ++j) row[j] /= span[j];
    return translated;
}

/// Perpendicular distance from `point` to the ray through `direction`.
inline double perpendicular_distance(const std::vector<double>& point,
                                     const std::vector<double>& direction) {
    double dot = 0.0, dir_norm2 = 0.0, point_norm2 = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        dot += point[i] * direction[i];
        dir_norm2 += direction[i] * direction[i];
        point_norm2 += point[i] * point[i];
    }
    double projection2 = dir_norm2 > 0.0 ? (dot * dot) / dir_norm2 : 0.0;
    return std::sqrt(std::max(0.0, point_norm2 - projection2));
}

struct Association {
    int ref_point = -1;
    double distance = 0.0;
};

inline std::vector<Association> associate(const std::vector<std::vector<double>>& normalized,
                                          const ReferencePointSet& refs) {
    std::vector<Association> out(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_ref = 0;
        for (std::size_t r = 0; r < refs.points.size(); ++r) {
            double d = perpendicular_distance(normalized[i], refs.points[r]);
            if (d < best) {
                best = d;
                best_ref = static_cast<int>(r);
            }
        }
        out[i] = {best_ref, best};
    }
    return out;
}

}  // namespace nsga3detail

/// NSGA-III survival: fills the next population front by front; when a front
/// overflows, its members are chosen by reference-point niching over
/// ideal-translated, intercept-normalized objectives.
inline std::vector<Individual> nsga3_survival(std::vector<Individual> merged, std::size_t target,
                                              const ReferencePointSet& refs, Rng& rng) {
    auto fronts = fast_non_dominated_sort(merged);

    // Cumulative fronts until the target is reached.
    std::vector<std::size_t> selected;      // complete fronts
    std::vector<std::size_t> last_front;
    std::size_t last_rank = 0;
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        if (selected.size() + fronts[r].size() <= target) {
            for (std::size_t idx : fronts[r]) {
                merged[idx].rank = static_cast<int>(r);
                selected.push_back(idx);
            }
            if (selected.size() == target) break;
        } else {
            last_front = fronts[r];
            last_rank = r;
            break;
        }
    }

    auto build_result = [&](const std::vector<std::size_t>& indices) {
        std::vector<Individual> next;
        next.reserve(indices.size());
        for (std::size_t idx : indices) next.push_back(std::move(merged[idx]));
        return next;
    };

    if (last_front.empty()) return build_result(selected);

    // Normalize and associate the survival candidates (St = selected ∪ last).
    std::vector<std::size_t> st = selected;
    st.insert(st.end(), last_front.begin(), last_front.end());
    auto normalized = nsga3detail::normalize(merged, st);
    auto assoc = nsga3detail::associate(normalized, refs);
    for (std::size_t i = 0; i < st.size(); ++i) {
        merged[st[i]].ref_point = assoc[i].ref_point;
        merged[st[i]].ref_distance = assoc[i].distance;
        if (i >= selected.size()) merged[st[i]].rank = static_cast<int>(last_rank);
    }

    // Niche counts over the already-selected members.
    std::vector<std::size_t> niche_count(refs.points.size(), 0);
    for (std::size_t i = 0; i < selected.size(); ++i) ++niche_count[assoc[i].ref_point];

    // Pool of last-front members per reference point.
    std::vector<std::vector<std::size_t>> pool(refs.points.size());  // indices into st
    for (std::size_t i = selected.size(); i < st.size(); ++i)
        pool[assoc[i].ref_point].push_back(i);

    std::vector<bool> excluded(refs.points.size(), false);
    std::size_t remaining = target - selected.size();
    std::vector<std::size_t> chosen;
    while (chosen.size() < remaining) {
        // Reference points with minimal niche count, RNG tie-break.
        std::size_t min_count = std::numeric_limits<std::size_t>::max();
        for (std::size_t r = 0; r < refs.points.size(); ++r)
            if (!excluded[r]) min_count = std::min(min_count, niche_count[r]);
        std::vector<std::size_t> min_refs;
        for (std::size_t r = 0; r < refs.points.size(); ++r)
            if (!excluded[r] && niche_count[r] == min_count) min_refs.push_back(r);
        std::size_t ref = min_refs[uniform_index(rng, min_refs.size())];

        auto& members = pool[ref];
        if (members.empty()) {
            excluded[ref] = true;
            continue;
        }
        std::size_t pick_pos;
        if (niche_count[ref] == 0) {
            // Empty niche: take the member closest to the reference line.
            pick_pos = 0;
            for (std::size_t i = 1; i < members.size(); ++i)
                if (assoc[members[i]].distance < assoc[members[pick_pos]].distance) pick_pos = i;
        } else {
            pick_pos = uniform_index(rng, members.size());
        }
        chosen.push_back(st[members[pick_pos]]);
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(pick_pos));
        ++niche_count[ref];
    }

    std::vector<std::size_t> result = selected;
    result.insert(result.end(), chosen.begin(), chosen.end());
    return build_result(result);
}

/// One NSGA-III generation: the same variation pipeline as NSGA-II, with
/// survival by reference-point niching instead of crowding.
inline std::vector<Individual> nsga3_generation(std::vector<Individual> population,
                                                const problem::DeploymentProblem& problem,
                                                const AlgoParams& params,
                                                const ReferencePointSet& refs, Rng& rng) {
    std::vector<Individual> offspring =
        make_offspring(population, problem, params, rng, /*crowding_tiebreak=*/false);

    std::vector<Individual> merged = std::move(population);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));

    return nsga3_survival(std::move(merged), static_cast<std::size_t>(params.population_size),
                          refs, rng);
}

}  // namespace iacopt::moea
