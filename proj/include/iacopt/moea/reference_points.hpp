#pragma once

#include <stdexcept>
#include <vector>

namespace iacopt::moea {

/// Das-Dennis structured reference directions on the unit simplex.
struct ReferencePointSet {
    std::size_t objective_count = 0;
    std::vector<std::vector<double>> points;
};

/// Enumerates all M-dimensional vectors with components in {0, 1/p, ..., 1}
/// summing to 1, in lexicographic order. |points| = C(p + M - 1, M - 1).
inline ReferencePointSet generate_reference_points(int objective_count, int divisions) {
    if (objective_count < 2)
        throw std::invalid_argument("reference points need at least two objectives");
    if (divisions < 1)
        throw std::invalid_argument("reference points need at least one division");

    ReferencePointSet set;
    set.objective_count = static_cast<std::size_t>(objective_count);
    std::vector<int> partial(static_cast<std::size_t>(objective_count), 0);

    auto emit = [&](const std::vector<int>& numerators) {
        std::vector<double> point(numerators.size());
        for (std::size_t i = 0; i < numerators.size(); ++i)
            point[i] = static_cast<double>(numerators[i]) / divisions;
        set.points.push_back(std::move(point));
    };

    // Recursive composition of `divisions` into M non-negative parts; choosing
    // the first coordinate in increasing order yields lexicographic output.
    auto recurse = [&](auto&& self, std::size_t coord, int remaining) -> void {
        if (coord + 1 == partial.size()) {
            partial[coord] = remaining;
            emit(partial);
            return;
        }
        for (int take = 0; take <= remaining; ++take) {
            partial[coord] = take;
            self(self, coord + 1, remaining - take);
        }
    };
    recurse(recurse, 0, divisions);
    return set;
}

}  // namespace iacopt::moea
