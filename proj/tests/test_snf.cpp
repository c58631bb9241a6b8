#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "homcls/int_matrix.hpp"
#include "homcls/snf.hpp"

using namespace homcls;

namespace {

bool divisibility_chain_ok(const IntMatrix& d) {
    const std::size_t r = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d(i, j) != 0) return false;
    for (std::size_t i = 0; i < r; ++i)
        if (d(i, i) < 0) return false;
    for (std::size_t i = 0; i + 1 < r; ++i) {
        if (d(i, i) == 0) {
            if (d(i + 1, i + 1) != 0) return false;
        } else if (d(i + 1, i + 1) % d(i, i) != 0) {
            return false;
        }
    }
    return true;
}

void check_snf_invariants(const IntMatrix& u, const SnfDecomposition& f) {
    REQUIRE(f.s.rows() == u.rows());
    REQUIRE(f.s.cols() == u.rows());
    REQUIRE(f.t.rows() == u.cols());
    REQUIRE(f.t.cols() == u.cols());
    REQUIRE(f.d == f.s * u * f.t);
    REQUIRE(abs_int(determinant(f.s)) == 1);
    REQUIRE(abs_int(determinant(f.t)) == 1);
    REQUIRE(divisibility_chain_ok(f.d));
}

IntMatrix random_matrix(std::mt19937& rng, int max_dim, int max_entry) {
    std::uniform_int_distribution<int> dim(0, max_dim);
    std::uniform_int_distribution<int> entry(-max_entry, max_entry);
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    return m;
}

}  // namespace

TEST_CASE("smith normal form of the 2x2 identity") {
    IntMatrix u = IntMatrix::identity(2);
    SnfDecomposition f = smith_normal_form(u);
    REQUIRE(f.d == u);
    REQUIRE(f.s == u);
    REQUIRE(f.t == u);
    check_snf_invariants(u, f);
}

TEST_CASE("smith normal form of [[2,4],[6,8]]") {
    IntMatrix u{{2, 4}, {6, 8}};
    SnfDecomposition f = smith_normal_form(u);
    REQUIRE(f.d == IntMatrix{{2, 0}, {0, 4}});
    REQUIRE(abs_int(determinant(u)) == 8);  // 2*4 matches |det|
    check_snf_invariants(u, f);
}

TEST_CASE("smith normal form of a zero 3x2 matrix") {
    IntMatrix u(3, 2);
    SnfDecomposition f = smith_normal_form(u);
    REQUIRE(f.d == u);
    check_snf_invariants(u, f);
}

TEST_CASE("smith normal form of empty matrices") {
    for (auto [r, c] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {0, 3}, {3, 0}}) {
        IntMatrix u(r, c);
        SnfDecomposition f = smith_normal_form(u);
        check_snf_invariants(u, f);
    }
}

TEST_CASE("solve_linear frozen examples") {
    SECTION("A=[2], b=[4]") {
        LinearSolution s = solve_linear(IntMatrix{{2}}, {Int(4)});
        REQUIRE(s.particular.has_value());
        REQUIRE(*s.particular == IntVec{Int(2)});
        REQUIRE(s.kernel.empty());
    }
    SECTION("A=[2], b=[3] has no solution") {
        LinearSolution s = solve_linear(IntMatrix{{2}}, {Int(3)});
        REQUIRE_FALSE(s.particular.has_value());
        REQUIRE(s.kernel.empty());
    }
    SECTION("A=[[1,1]], b=[0] has kernel basis {(1,-1)}") {
        LinearSolution s = solve_linear(IntMatrix{{1, 1}}, {Int(0)});
        REQUIRE(s.particular.has_value());
        REQUIRE(vec_is_zero(*s.particular));
        REQUIRE(s.kernel.size() == 1);
        REQUIRE(s.kernel[0] == IntVec{Int(1), Int(-1)});
    }
}

TEST_CASE("solve_linear rejects mismatched dimensions") {
    REQUIRE_THROWS_AS(solve_linear(IntMatrix{{1, 2}}, IntVec{Int(1), Int(2)}), std::invalid_argument);
}

TEST_CASE("solve_linear on empty shapes") {
    // 0xN: every vector is a solution of the empty system.
    LinearSolution a = solve_linear(IntMatrix(0, 3), IntVec{});
    REQUIRE(a.particular.has_value());
    REQUIRE(a.kernel.size() == 3);
    // Nx0: solvable only for b = 0.
    LinearSolution b = solve_linear(IntMatrix(2, 0), IntVec{Int(0), Int(0)});
    REQUIRE(b.particular.has_value());
    REQUIRE(b.particular->empty());
    LinearSolution c = solve_linear(IntMatrix(2, 0), IntVec{Int(0), Int(5)});
    REQUIRE_FALSE(c.particular.has_value());
}

TEST_CASE("randomized SNF invariant suite") {
    std::mt19937 rng(20260818);
    for (int iter = 0; iter < 300; ++iter) {
        IntMatrix u = random_matrix(rng, 6, 9);
        SnfDecomposition f = smith_normal_form(u);
        check_snf_invariants(u, f);
        // Determinism: identical input, identical decomposition.
        SnfDecomposition g = smith_normal_form(u);
        REQUIRE(f.s == g.s);
        REQUIRE(f.d == g.d);
        REQUIRE(f.t == g.t);
    }
}

TEST_CASE("solve_linear cross-checked against brute force") {
    std::mt19937 rng(987654);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<int> entry(-3, 3);
    const Int box = 6;

    for (int iter = 0; iter < 60; ++iter) {
        const std::size_t m = dim(rng), n = dim(rng);
        IntMatrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);

        IntVec b(m);
        if (iter % 2 == 0) {
            IntVec planted(n);
            for (std::size_t j = 0; j < n; ++j) planted[j] = entry(rng);
            b = matrix_times_col(a, planted);
        } else {
            for (std::size_t i = 0; i < m; ++i) b[i] = entry(rng);
        }

        LinearSolution s = solve_linear(a, b);
        if (s.particular) REQUIRE(matrix_times_col(a, *s.particular) == b);
        for (const IntVec& k : s.kernel) REQUIRE(vec_is_zero(matrix_times_col(a, k)));

        // Enumerate all solutions in the box and confirm each lies in
        // particular + integer span of the kernel basis.
        IntMatrix kmat(n, s.kernel.size());
        for (std::size_t j = 0; j < s.kernel.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) kmat(i, j) = s.kernel[j][i];
        LinearSystem lattice(kmat);

        std::vector<Int> x(n, -box);
        bool brute_found = false;
        for (;;) {
            if (matrix_times_col(a, x) == b) {
                brute_found = true;
                REQUIRE(s.particular.has_value());
                REQUIRE(lattice.solve(vec_sub(x, *s.particular)).has_value());
            }
            std::size_t p = 0;
            while (p < n && x[p] == box) x[p++] = -box;
            if (p == n) break;
            x[p] += 1;
        }
        if (iter % 2 == 0) REQUIRE(s.particular.has_value());
        if (!s.particular) REQUIRE_FALSE(brute_found);
    }
}

TEST_CASE("inverse of unimodular matrices") {
    std::mt19937 rng(13579);
    std::uniform_int_distribution<int> entry(-2, 2);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int iter = 0; iter < 40; ++iter) {
        const std::size_t n = 1 + iter % 4;
        // Random product of elementary row operations applied to the identity.
        IntMatrix m = IntMatrix::identity(n);
        for (int step = 0; step < 8; ++step) {
            std::size_t i = pick(rng) % n, j = pick(rng) % n;
            if (i == j) continue;
            Int q = entry(rng);
            for (std::size_t c = 0; c < n; ++c) m(i, c) += q * m(j, c);
        }
        IntMatrix inv = inverse_unimodular(m);
        REQUIRE(m * inv == IntMatrix::identity(n));
        REQUIRE(inv * m == IntMatrix::identity(n));
    }
}
