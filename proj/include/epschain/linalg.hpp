#pragma once

#include "epschain/ratfun.hpp"

#include <optional>
#include <vector>

namespace epschain {

template <class T>
using Matrix = std::vector<std::vector<T>>;

inline size_t pivotCost(const BigRational& q) { return bitSize(q); }
inline size_t pivotCost(const URatFun& r) {
    return static_cast<size_t>(r.num().degree() + r.den().degree() + 2) * 64;
}
inline size_t pivotCost(const RationalFunction& r) { return r.num().termCount() + r.den().termCount(); }

// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<size_t> rowReduce(Matrix<T>& m, size_t ncols) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < ncols && row < m.size(); ++col) {
        size_t best = m.size();
        size_t bestCost = 0;
        for (size_t r = row; r < m.size(); ++r) {
            if (isZero(m[r][col])) continue;
            size_t c = pivotCost(m[r][col]);
            if (best == m.size() || c < bestCost) {
                best = r;
                bestCost = c;
            }
        }
        if (best == m.size()) continue;
        std::swap(m[row], m[best]);
        T inv = T(1) / m[row][col];
        for (size_t c = col; c < m[row].size(); ++c)
            if (!isZero(m[row][c])) m[row][c] = m[row][c] * inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || isZero(m[r][col])) continue;
            T f = m[r][col];
            for (size_t c = col; c < m[r].size(); ++c)
                if (!isZero(m[row][c])) m[r][c] = m[r][c] - f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Basis of {v : m v = 0}.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m, size_t ncols) {
    auto pivots = rowReduce(m, ncols);
    std::vector<bool> isPivot(ncols, false);
    for (size_t p : pivots) isPivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (size_t free = 0; free < ncols; ++free) {
        if (isPivot[free]) continue;
        std::vector<T> v(ncols, T(0));
        v[free] = T(1);
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Some solution of a x = b, nullopt if inconsistent.
template <class T>
std::optional<std::vector<T>> solveLinear(Matrix<T> a, const std::vector<T>& b, size_t ncols) {
    for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
    auto pivots = rowReduce(a, ncols);
    for (size_t r = pivots.size(); r < a.size(); ++r)
        if (!isZero(a[r][ncols])) return std::nullopt;
    std::vector<T> x(ncols, T(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][ncols];
    return x;
}

template <class T>
size_t matrixRank(Matrix<T> m, size_t ncols) {
    return rowReduce(m, ncols).size();
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
    size_t n = a.size();
    Matrix<T> m = a;
    for (size_t i = 0; i < n; ++i) {
        m[i].resize(2 * n, T(0));
        m[i][n + i] = T(1);
    }
    auto pivots = rowReduce(m, n);
    if (pivots.size() < n) return std::nullopt;
    Matrix<T> out(n, std::vector<T>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) out[i][j] = m[i][n + j];
    return out;
}

}  // namespace epschain
