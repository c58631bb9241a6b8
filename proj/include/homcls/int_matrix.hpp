#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homcls/ints.hpp"

namespace homcls {

// Dense integer matrix, row-major.  Matrices with zero rows or zero columns
// are legal values: degenerate cochain groups in extreme dimensions produce
// them routinely, and the group constructions must handle them.
class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged rows");
            for (const Int& x : r) a_.push_back(x);
        }
    }

    static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("IntMatrix: ragged rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const = default;

    IntVec row(std::size_t i) const {
        IntVec r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    IntVec col(std::size_t j) const {
        IntVec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        for (const Int& x : a_)
            if (x != 0) return false;
        return true;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) s += ", ";
            s += "[";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) s += ", ";
                s += (*this)(i, j).str();
            }
            s += "]";
        }
        return s + "]";
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> a_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// x · A for a row vector x of length A.rows().
inline IntVec row_times_matrix(const IntVec& x, const IntMatrix& a) {
    if (x.size() != a.rows()) throw std::invalid_argument("row_times_matrix: dimension mismatch");
    IntVec r(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) r[j] += x[i] * a(i, j);
    }
    return r;
}

// A · x for a column vector x of length A.cols().
inline IntVec matrix_times_col(const IntMatrix& a, const IntVec& x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matrix_times_col: dimension mismatch");
    IntVec r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (x[j] != 0) r[i] += a(i, j) * x[j];
    return r;
}

// Stack a on top of b (equal column counts).
inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
        throw std::invalid_argument("vstack: column mismatch");
    const std::size_t cols = a.rows() ? a.cols() : b.cols();
    IntMatrix m(a.rows() + b.rows(), cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(a.rows() + i, j) = b(i, j);
    return m;
}

// Place a left of b (equal row counts).
inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() && a.cols() != 0 && b.cols() != 0)
        throw std::invalid_argument("hstack: row mismatch");
    const std::size_t rows = a.cols() ? a.rows() : b.rows();
    IntMatrix m(rows, a.cols() + b.cols());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

inline IntMatrix negate(const IntMatrix& a) {
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = -a(i, j);
    return m;
}

}  // namespace homcls
