#pragma once

// Dense linear algebra over F_q; everything in this project is tiny, so
// plain Gauss-Jordan on row-major storage is all we need.

#include <span>
#include <stdexcept>
#include <vector>

#include "leakage_lab/gf.hpp"

namespace leakage_lab {

struct Matrix {
    Field field;
    size_t rows = 0;
    size_t cols = 0;
    std::vector<uint64_t> a;  // row-major encodings

    Matrix() = default;
    Matrix(Field f, size_t r, size_t c) : field(std::move(f)), rows(r), cols(c), a(r * c, 0) {}

    uint64_t& at(size_t r, size_t c) { return a[r * cols + c]; }
    uint64_t at(size_t r, size_t c) const { return a[r * cols + c]; }
    std::span<const uint64_t> row(size_t r) const { return {a.data() + r * cols, cols}; }
    std::span<uint64_t> row(size_t r) { return {a.data() + r * cols, cols}; }

    static Matrix identity(Field f, size_t n) {
        Matrix m(std::move(f), n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix from_rows(Field f, const std::vector<std::vector<uint64_t>>& rows_in) {
        const size_t c = rows_in.empty() ? 0 : rows_in.front().size();
        for (const auto& r : rows_in)
            if (r.size() != c) throw std::invalid_argument("ragged rows");
        Matrix m(std::move(f), rows_in.size(), c);
        for (size_t i = 0; i < rows_in.size(); ++i)
            for (size_t j = 0; j < c; ++j) {
                if (rows_in[i][j] >= m.field->q())
                    throw std::invalid_argument("matrix entry out of field range");
                m.at(i, j) = rows_in[i][j];
            }
        return m;
    }
};

// reduced row echelon form; returns the rank, optionally the pivot columns
inline size_t rref_in_place(Matrix& m, std::vector<size_t>* pivot_cols = nullptr) {
    const FieldParams& f = *m.field;
    size_t rank = 0;
    if (pivot_cols) pivot_cols->clear();
    for (size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank)
            for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
        const uint64_t scale = f.inv(m.at(rank, col));
        for (size_t j = col; j < m.cols; ++j) m.at(rank, j) = f.mul(m.at(rank, j), scale);
        for (size_t r = 0; r < m.rows; ++r) {
            if (r == rank) continue;
            const uint64_t factor = m.at(r, col);
            if (factor == 0) continue;
            for (size_t j = col; j < m.cols; ++j)
                m.at(r, j) = f.sub(m.at(r, j), f.mul(factor, m.at(rank, j)));
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    m.rows = rank;  // drop the zero rows
    m.a.resize(rank * m.cols);
    return rank;
}

inline size_t rank_of(Matrix m) { return rref_in_place(m); }

// basis (as rows, RREF'd) of { x : M x^T = 0 }
inline Matrix null_space(const Matrix& m_in) {
    Matrix m = m_in;
    std::vector<size_t> pivots;
    const size_t rank = rref_in_place(m, &pivots);
    const FieldParams& f = *m.field;
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    Matrix basis(m.field, m.cols - rank, m.cols);
    size_t out = 0;
    for (size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        basis.at(out, free_col) = 1;
        for (size_t r = 0; r < rank; ++r)
            basis.at(out, pivots[r]) = f.neg(m.at(r, free_col));
        ++out;
    }
    return basis;
}

inline Matrix transpose(const Matrix& m) {
    Matrix t(m.field, m.cols, m.rows);
    for (size_t r = 0; r < m.rows; ++r)
        for (size_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
    return t;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (!a.field->same(*b.field)) throw std::invalid_argument("field mismatch");
    if (a.cols != b.rows) throw std::invalid_argument("matrix dimension mismatch");
    const FieldParams& f = *a.field;
    Matrix c(a.field, a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t k = 0; k < a.cols; ++k) {
            const uint64_t v = a.at(i, k);
            if (v == 0) continue;
            for (size_t j = 0; j < b.cols; ++j)
                c.at(i, j) = f.add(c.at(i, j), f.mul(v, b.at(k, j)));
        }
    return c;
}

// row vector times matrix
inline std::vector<uint64_t> vec_mat(std::span<const uint64_t> v, const Matrix& m) {
    if (v.size() != m.rows) throw std::invalid_argument("vector dimension mismatch");
    const FieldParams& f = *m.field;
    std::vector<uint64_t> out(m.cols, 0);
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (size_t j = 0; j < m.cols; ++j)
            out[j] = f.add(out[j], f.mul(v[i], m.at(i, j)));
    }
    return out;
}

inline std::vector<uint64_t> mat_vec(const Matrix& m, std::span<const uint64_t> v) {
    if (v.size() != m.cols) throw std::invalid_argument("vector dimension mismatch");
    const FieldParams& f = *m.field;
    std::vector<uint64_t> out(m.rows, 0);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0 && v[j] != 0)
                out[i] = f.add(out[i], f.mul(m.at(i, j), v[j]));
    return out;
}

struct AffineSolution {
    bool consistent = false;
    std::vector<uint64_t> particular;  // one solution of A x = b
    Matrix null_basis;                 // rows span the homogeneous solutions
};

// solve A x = b for a column vector x
inline AffineSolution solve(const Matrix& a_in, std::span<const uint64_t> b) {
    if (b.size() != a_in.rows) throw std::invalid_argument("rhs dimension mismatch");
    const FieldParams& f = *a_in.field;
    Matrix aug(a_in.field, a_in.rows, a_in.cols + 1);
    for (size_t r = 0; r < a_in.rows; ++r) {
        for (size_t c = 0; c < a_in.cols; ++c) aug.at(r, c) = a_in.at(r, c);
        aug.at(r, a_in.cols) = b[r];
    }
    std::vector<size_t> pivots;
    const size_t rank = rref_in_place(aug, &pivots);
    AffineSolution sol;
    if (!pivots.empty() && pivots.back() == a_in.cols) return sol;  // 0 = 1 row
    sol.consistent = true;
    sol.particular.assign(a_in.cols, 0);
    for (size_t r = 0; r < rank; ++r) sol.particular[pivots[r]] = aug.at(r, a_in.cols);
    std::vector<bool> is_pivot(a_in.cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    sol.null_basis = Matrix(a_in.field, a_in.cols - rank, a_in.cols);
    size_t out = 0;
    for (size_t free_col = 0; free_col < a_in.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        sol.null_basis.at(out, free_col) = 1;
        for (size_t r = 0; r < rank; ++r)
            sol.null_basis.at(out, pivots[r]) = f.neg(aug.at(r, free_col));
        ++out;
    }
    return sol;
}

}  // namespace leakage_lab
