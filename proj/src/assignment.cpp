#include <eioutrack/assignment.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eioutrack {

namespace {

// Kuhn-Munkres with row/column potentials on an implicitly padded square
// matrix. Padded cells cost 0, a constant contribution for any assignment,
// so the real rows still receive their optimal columns. Rows are grown in
// index order, which makes tie resolution deterministic.
std::vector<int> solve_square(const Matrix& costs, std::size_t n) {
    const std::size_t real_rows = costs.rows();
    const std::size_t real_cols = costs.cols();
    const auto cell = [&](std::size_t r, std::size_t c) -> double {
        return (r < real_rows && c < real_cols) ? costs(r, c) : 0.0;
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<double> minv(n + 1, 0.0);
    std::vector<std::size_t> col_owner(n + 1, 0);  // 1-based row owning each column
    std::vector<std::size_t> way(n + 1, 0);
    std::vector<char> used(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        col_owner[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = col_owner[j0];
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cell(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (std::size_t j = 1; j <= n; ++j) {
        if (col_owner[j] != 0) {
            row_to_col[col_owner[j] - 1] = static_cast<int>(j - 1);
        }
    }
    return row_to_col;
}

}  // namespace

MatchResult solve(const Matrix& costs, double reject_above) {
    if (!(reject_above > 0.0)) {
        throw std::invalid_argument("solve: reject_above must be > 0");
    }
    for (double c : costs.data()) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::invalid_argument("solve: cost entries must be finite and >= 0");
        }
    }

    MatchResult result;
    const std::size_t rows = costs.rows();
    const std::size_t cols = costs.cols();
    if (rows == 0 || cols == 0) {
        for (std::size_t r = 0; r < rows; ++r) {
            result.unmatched_rows.push_back(static_cast<int>(r));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            result.unmatched_cols.push_back(static_cast<int>(c));
        }
        return result;
    }

    const std::vector<int> row_to_col = solve_square(costs, std::max(rows, cols));

    std::vector<char> col_matched(cols, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        const int c = row_to_col[r];
        if (c >= 0 && static_cast<std::size_t>(c) < cols && costs(r, c) <= reject_above) {
            result.matches.emplace_back(static_cast<int>(r), c);
            col_matched[c] = 1;
        } else {
            result.unmatched_rows.push_back(static_cast<int>(r));
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        if (!col_matched[c]) {
            result.unmatched_cols.push_back(static_cast<int>(c));
        }
    }
    return result;
}

}  // namespace eioutrack
