#include "permrelax/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace permrelax {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct DualSolution {
    std::vector<std::size_t> column_of_row;
    std::vector<double> u;  // row potentials
    std::vector<double> v;  // column potentials
};

// Shortest augmenting path Hungarian method for min sum cost(i, p[i]).
// Potentials satisfy cost(i,j) - u[i] - v[j] >= 0 with equality on the matching.
DualSolution hungarian_min(const SquareMatrix& cost) {
    const std::size_t n = cost.n();
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based with a virtual column 0, as in the classical formulation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = row_of_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    DualSolution out;
    out.column_of_row.assign(n, kNone);
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    for (std::size_t j = 1; j <= n; ++j) {
        out.column_of_row[row_of_col[j] - 1] = j - 1;
    }
    return out;
}

// Alternating-path search in the tight-edge graph. Rows < first_free are fixed.
class TightMatching {
public:
    TightMatching(std::vector<std::vector<bool>> tight, std::vector<std::size_t> column_of_row)
        : tight_(std::move(tight)), column_of_row_(std::move(column_of_row)) {
        const std::size_t n = column_of_row_.size();
        row_of_column_.assign(n, kNone);
        for (std::size_t i = 0; i < n; ++i) {
            row_of_column_[column_of_row_[i]] = i;
        }
    }

    const std::vector<std::size_t>& columns() const { return column_of_row_; }

    // Try to make (row, column) part of the matching while keeping rows < row
    // fixed. Returns false and leaves the matching intact when impossible.
    bool force(std::size_t row, std::size_t column) {
        const std::size_t current = column_of_row_[row];
        if (current == column) {
            return true;
        }
        const std::size_t displaced = row_of_column_[column];
        if (displaced < row) {
            return false;
        }
        const auto saved_rows = column_of_row_;
        const auto saved_cols = row_of_column_;

        column_of_row_[row] = column;
        row_of_column_[column] = row;
        row_of_column_[current] = kNone;
        column_of_row_[displaced] = kNone;

        std::vector<bool> visited(column_of_row_.size(), false);
        if (augment(displaced, row, visited)) {
            return true;
        }
        column_of_row_ = saved_rows;
        row_of_column_ = saved_cols;
        return false;
    }

private:
    bool augment(std::size_t r, std::size_t locked_upto, std::vector<bool>& visited) {
        const std::size_t n = column_of_row_.size();
        for (std::size_t c = 0; c < n; ++c) {
            if (!tight_[r][c] || visited[c]) {
                continue;
            }
            visited[c] = true;
            const std::size_t owner = row_of_column_[c];
            if (owner != kNone && owner <= locked_upto) {
                continue;
            }
            if (owner == kNone || augment(owner, locked_upto, visited)) {
                column_of_row_[r] = c;
                row_of_column_[c] = r;
                return true;
            }
        }
        return false;
    }

    std::vector<std::vector<bool>> tight_;
    std::vector<std::size_t> column_of_row_;
    std::vector<std::size_t> row_of_column_;
};

}  // namespace

double assignment_score(const SquareMatrix& m, const Permutation& p) {
    if (m.n() != p.n()) {
        throw DimensionMismatch(m.n(), p.n());
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        s += m(i, p[i]);
    }
    return s;
}

Permutation nearest_permutation_lap(const SquareMatrix& m) {
    const std::size_t n = m.n();
    if (n == 0) {
        return Permutation{};
    }
    double scale = 0.0;
    for (double v : m.values()) {
        scale = std::max(scale, std::abs(v));
    }
    SquareMatrix cost(n);
    for (std::size_t k = 0; k < m.size(); ++k) {
        cost.values()[k] = -m.values()[k];
    }
    const DualSolution dual = hungarian_min(cost);

    // Every optimal assignment lives on the zero-reduced-cost edges of any
    // optimal dual, so the lexicographic minimum is found greedily there.
    const double tol = 1e-12 * std::max(1.0, scale) * static_cast<double>(n);
    std::vector<std::vector<bool>> tight(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            tight[i][j] = cost(i, j) - dual.u[i] - dual.v[j] <= tol;
        }
        tight[i][dual.column_of_row[i]] = true;
    }
    TightMatching matching(tight, dual.column_of_row);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (tight[i][j] && matching.force(i, j)) {
                break;
            }
        }
    }
    return Permutation(matching.columns());
}

Permutation round_argmax(const SquareMatrix& m) {
    const std::size_t n = m.n();
    std::vector<std::size_t> choice(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = m.row(i);
        choice[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    std::vector<std::vector<std::size_t>> rows_by_column(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows_by_column[choice[i]].push_back(i);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (rows_by_column[j].size() > 1) {
            throw Collision(rows_by_column[j], j);
        }
    }
    return Permutation(std::move(choice));
}

}  // namespace permrelax
