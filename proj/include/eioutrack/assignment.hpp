#pragma once

#include <utility>
#include <vector>

#include <eioutrack/matrix.hpp>

namespace eioutrack {

// One-to-one assignment between rows and columns of a cost matrix. Every row
// and column appears exactly once, either in matches or in an unmatched list.
struct MatchResult {
    std::vector<std::pair<int, int>> matches;  // (row, col), ascending by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
};

// Minimum-total-cost assignment on a rectangular matrix; the shorter side is
// matched completely, then any assigned pair costing more than reject_above
// is demoted to unmatched. Entries must be finite and >= 0. An empty matrix
// yields an all-unmatched result.
MatchResult solve(const Matrix& costs, double reject_above);

}  // namespace eioutrack
