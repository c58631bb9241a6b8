#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "homcls/int_matrix.hpp"
#include "homcls/ints.hpp"

namespace homcls {

// D = S · U · T with S, T unimodular and D diagonal, nonnegative, each
// diagonal entry dividing the next.
struct SnfDecomposition {
    IntMatrix s;
    IntMatrix d;
    IntMatrix t;
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row b -= q * row a
inline void row_axpy(IntMatrix& m, std::size_t b, const Int& q, std::size_t a) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(b, j) -= q * m(a, j);
}

// col b -= q * col a
inline void col_axpy(IntMatrix& m, std::size_t b, const Int& q, std::size_t a) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, b) -= q * m(i, a);
}

// Division rounded to the nearest integer, so |a - q·b| ≤ |b|/2.
inline Int round_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (2 * abs_int(r) > abs_int(b)) q += (sign_int(r) == sign_int(b)) ? 1 : -1;
    return q;
}

}  // namespace detail

// Deterministic Smith normal form.  Each round re-selects the nonzero entry
// of least absolute value in the remaining submatrix as pivot (ties: smallest
// row index, then smallest column index) and reduces its row and column with
// rounded division, so remainders at most halve the pivot; this keeps
// coefficient growth mild and makes the output reproducible — downstream
// generator choices depend on that.
inline SnfDecomposition smith_normal_form(const IntMatrix& u) {
    const std::size_t m = u.rows(), n = u.cols();
    SnfDecomposition r{IntMatrix::identity(m), u, IntMatrix::identity(n)};
    IntMatrix& d = r.d;
    IntMatrix& s = r.s;
    IntMatrix& t = r.t;

    const std::size_t rank_bound = std::min(m, n);
    for (std::size_t k = 0; k < rank_bound; ++k) {
        bool exhausted = false;
        for (;;) {
            // Locate the minimal-|value| nonzero pivot in d[k.., k..].
            std::size_t pi = 0, pj = 0;
            bool found = false;
            Int best;
            for (std::size_t i = k; i < m; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    if (d(i, j) == 0) continue;
                    Int a = abs_int(d(i, j));
                    if (!found || a < best) {
                        found = true;
                        best = a;
                        pi = i;
                        pj = j;
                    }
                }
            if (!found) {
                exhausted = true;
                break;
            }
            detail::swap_rows(d, k, pi);
            detail::swap_rows(s, k, pi);
            detail::swap_cols(d, k, pj);
            detail::swap_cols(t, k, pj);

            // One reduction pass over column k and row k.  Any surviving
            // remainder is at most half the pivot, so the re-selected pivot
            // of the next round is strictly smaller; the loop terminates.
            bool clean = true;
            for (std::size_t i = k + 1; i < m; ++i) {
                if (d(i, k) == 0) continue;
                Int q = detail::round_div(d(i, k), d(k, k));
                detail::row_axpy(d, i, q, k);
                detail::row_axpy(s, i, q, k);
                if (d(i, k) != 0) clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (d(k, j) == 0) continue;
                Int q = detail::round_div(d(k, j), d(k, k));
                detail::col_axpy(d, j, q, k);
                detail::col_axpy(t, j, q, k);
                if (d(k, j) != 0) clean = false;
            }
            if (!clean) continue;

            // Divisibility fix: the pivot must divide every remaining entry.
            // Adding an offending row to row k plants an entry with nonzero
            // remainder, which the next round turns into a smaller pivot.
            bool divides = true;
            for (std::size_t i = k + 1; i < m && divides; ++i)
                for (std::size_t j = k + 1; j < n && divides; ++j)
                    if (d(i, j) % d(k, k) != 0) {
                        detail::row_axpy(d, k, Int(-1), i);
                        detail::row_axpy(s, k, Int(-1), i);
                        divides = false;
                    }
            if (divides) break;
        }
        if (exhausted) break;
        if (d(k, k) < 0) {
            for (std::size_t j = 0; j < n; ++j) d(k, j) = -d(k, j);
            for (std::size_t j = 0; j < m; ++j) s(k, j) = -s(k, j);
        }
    }
    return r;
}

// Exact determinant of a square matrix (Bareiss fraction-free elimination).
inline Int determinant(IntMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a(r, k) == 0) ++r;
            if (r == n) return 0;
            detail::swap_rows(a, k, r);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

struct LinearSolution {
    std::optional<IntVec> particular;  // x with A·x = b, when solvable over Z
    std::vector<IntVec> kernel;        // basis of {x : A·x = 0}
};

// A·x = b solver with the decomposition computed once; reuse it when many
// right-hand sides hit the same matrix.  Every arbitrary choice is canonical:
// the particular solution sets all free coordinates to zero, and kernel
// vectors are sign-normalized so their first nonzero entry is positive.
class LinearSystem {
public:
    explicit LinearSystem(const IntMatrix& a)
        : rows_(a.rows()), cols_(a.cols()), f_(smith_normal_form(a)) {
        const std::size_t rb = std::min(rows_, cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j < rb && f_.d(j, j) != 0) continue;
            IntVec v = f_.t.col(j);
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] == 0) continue;
                if (v[i] < 0) v = vec_neg(v);
                break;
            }
            kernel_.push_back(std::move(v));
        }
    }

    const std::vector<IntVec>& kernel() const { return kernel_; }

    std::optional<IntVec> solve(const IntVec& b) const {
        if (b.size() != rows_) throw std::invalid_argument("LinearSystem: dimension mismatch");
        // A·x = b  <=>  D·y = S·b with x = T·y.
        const std::size_t rb = std::min(rows_, cols_);
        IntVec c = matrix_times_col(f_.s, b);
        IntVec y(cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i < rb && f_.d(i, i) != 0) {
                if (c[i] % f_.d(i, i) != 0) return std::nullopt;
                y[i] = c[i] / f_.d(i, i);
            } else if (c[i] != 0) {
                return std::nullopt;
            }
        }
        return matrix_times_col(f_.t, y);
    }

private:
    std::size_t rows_, cols_;
    SnfDecomposition f_;
    std::vector<IntVec> kernel_;
};

// Solve A·x = b over the integers.  The kernel basis is always returned
// (valid even when the inhomogeneous system is unsolvable).
inline LinearSolution solve_linear(const IntMatrix& a, const IntVec& b) {
    LinearSystem sys(a);
    LinearSolution out;
    out.kernel = sys.kernel();
    out.particular = sys.solve(b);
    return out;
}

// Solve x·A = b over the integers (row convention); kernel spans {x : x·A = 0}.
inline LinearSolution solve_linear_left(const IntMatrix& a, const IntVec& b) {
    return solve_linear(a.transpose(), b);
}

// Inverse of a unimodular matrix: I = S·M·T gives M⁻¹ = T·S.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse_unimodular: matrix not square");
    SnfDecomposition f = smith_normal_form(m);
    if (f.d != IntMatrix::identity(m.rows()))
        throw std::invalid_argument("inverse_unimodular: matrix is not unimodular");
    return f.t * f.s;
}

}  // namespace homcls
