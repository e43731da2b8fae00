#include "toric/exact_linalg.hpp"

#include <utility>

namespace toric::exact {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Matrix& a, int cols) {
    std::vector<int> pivots;
    int row = 0;
    const int rows = static_cast<int>(a.size());
    for (int c = 0; c < cols && row < rows; ++c) {
        int p = row;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[row]);
        // Row operations act on every column, so augmented right-hand sides follow along.
        const int width = static_cast<int>(a[row].size());
        Rational inv = 1 / a[row][c];
        for (int j = c; j < width; ++j) a[row][j] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == row || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (int j = c; j < width; ++j) a[r][j] -= f * a[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

int rank(Matrix rows) {
    if (rows.empty()) return 0;
    const int cols = static_cast<int>(rows.front().size());
    return static_cast<int>(rref(rows, cols).size());
}

Rational determinant(Matrix a) {
    const int n = static_cast<int>(a.size());
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

std::optional<RVec> solve(Matrix a, RVec b) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i) a[i].push_back(b[i]);
    auto pivots = rref(a, n);
    if (static_cast<int>(pivots.size()) < n) return std::nullopt;
    RVec x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

std::vector<RVec> null_space(const Matrix& a, int cols) {
    Matrix m = a;
    auto pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<RVec> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        RVec v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

int affine_dimension(const std::vector<RVec>& points) {
    if (points.empty()) return -1;
    Matrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        RVec d(points[i].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
        diffs.push_back(std::move(d));
    }
    return rank(std::move(diffs));
}

}  // namespace toric::exact
