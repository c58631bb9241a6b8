#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "homcls/abelian.hpp"
#include "homcls/int_matrix.hpp"
#include "homcls/ints.hpp"
#include "homcls/simplicial.hpp"
#include "homcls/snf.hpp"

namespace homcls {

// A finitely generated coefficient group Z^free_rank (+) Z/q1 (+) ...,
// with element values laid out free coordinates first.
struct Coeff {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    std::size_t width() const { return free_rank + torsion.size(); }

    std::vector<Int> coordinate_orders() const {
        std::vector<Int> q(free_rank, Int(0));
        q.insert(q.end(), torsion.begin(), torsion.end());
        return q;
    }

    IntVec reduce(IntVec v) const {
        for (std::size_t j = 0; j < torsion.size(); ++j)
            v[free_rank + j] = mod_floor(v[free_rank + j], torsion[j]);
        return v;
    }

    friend bool operator==(const Coeff&, const Coeff&) = default;
};

// A normalized cochain: one value per nondegenerate simplex of its dimension,
// implicitly zero on degenerate simplices.  Negative dimension means the zero
// cochain of an empty cochain level.
struct Cochain {
    int dim = 0;
    Coeff coeff;
    std::vector<IntVec> values;

    friend bool operator==(const Cochain&, const Cochain&) = default;
};

inline Cochain zero_cochain(const SimplicialSet& x, int dim, const Coeff& coeff) {
    Cochain c{dim, coeff, {}};
    if (dim >= 0)
        c.values.assign(x.count(dim), IntVec(coeff.width()));
    return c;
}

inline IntVec evaluate(const Cochain& c, const SimplexRef& r) {
    if (r.dim() != c.dim) throw std::invalid_argument("evaluate: dimension mismatch");
    if (r.is_degenerate()) return IntVec(c.coeff.width());
    return c.values[r.base];
}

inline Cochain cochain_add(const Cochain& a, const Cochain& b) {
    if (a.dim != b.dim || !(a.coeff == b.coeff) || a.values.size() != b.values.size())
        throw std::invalid_argument("cochain_add: shape mismatch");
    Cochain c = a;
    for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] = vec_add(c.values[i], b.values[i]);
    return c;
}

inline Cochain cochain_neg(const Cochain& a) {
    Cochain c = a;
    for (auto& v : c.values) v = vec_neg(v);
    return c;
}

inline Cochain cochain_sub(const Cochain& a, const Cochain& b) {
    return cochain_add(a, cochain_neg(b));
}

inline Cochain cochain_scale(const Int& s, const Cochain& a) {
    Cochain c = a;
    for (auto& v : c.values) v = vec_scale(s, v);
    return c;
}

// Canonical form: torsion coordinates reduced into [0, q).
inline Cochain cochain_reduce(const Cochain& a) {
    Cochain c = a;
    for (auto& v : c.values) v = c.coeff.reduce(v);
    return c;
}

inline bool cochain_is_zero(const Cochain& a) {
    for (const auto& v : a.values)
        if (!vec_is_zero(a.coeff.reduce(v))) return false;
    return true;
}

// (delta c)(x) = sum_k (-1)^k c(d_k x) on nondegenerate simplices.
inline Cochain coboundary(const SimplicialSet& x, const Cochain& c) {
    if (c.dim < 0) return zero_cochain(x, c.dim + 1, c.coeff);
    Cochain out = zero_cochain(x, c.dim + 1, c.coeff);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        SimplexRef r = nondeg_ref(c.dim + 1, i);
        IntVec acc(c.coeff.width());
        for (int k = 0; k <= c.dim + 1; ++k) {
            IntVec t = evaluate(c, x.face(r, k));
            acc = (k % 2 == 0) ? vec_add(acc, t) : vec_sub(acc, t);
        }
        out.values[i] = acc;
    }
    return out;
}

inline bool is_cocycle(const SimplicialSet& x, const Cochain& c) {
    return cochain_is_zero(coboundary(x, c));
}

// The group of n-cochains as a fully effective group with Cochain elements;
// generators are the unit cochains (simplex-major, coordinate-minor).
inline FullyEffectiveGroup cochain_group(const SimplicialSet& x, int n, const Coeff& coeff) {
    FullyEffectiveGroup g;
    const std::size_t ns = n >= 0 ? x.count(n) : 0;
    const std::size_t w = coeff.width();
    std::vector<Int> corder = coeff.coordinate_orders();
    g.base.zero = zero_cochain(x, n, coeff);
    g.base.add = [](const Elem& a, const Elem& b) {
        return Elem(cochain_add(std::any_cast<const Cochain&>(a), std::any_cast<const Cochain&>(b)));
    };
    g.base.neg = [](const Elem& a) { return Elem(cochain_neg(std::any_cast<const Cochain&>(a))); };
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            Cochain e = zero_cochain(x, n, coeff);
            e.values[i][j] = 1;
            g.generators.push_back(std::move(e));
            g.orders.push_back(corder[j]);
        }
    g.express = [ns, w](const Elem& e) {
        const Cochain& c = std::any_cast<const Cochain&>(e);
        IntVec out;
        out.reserve(ns * w);
        for (const auto& v : c.values) out.insert(out.end(), v.begin(), v.end());
        return out;
    };
    return g;
}

// Deterministic solver for delta e = z (equality mod coefficient torsion):
// column-convention system over the unknown values of e plus one slack column
// per torsion coordinate of each target simplex.
inline std::optional<Cochain> solve_coboundary(const SimplicialSet& x, const Cochain& z) {
    const int n = z.dim - 1;
    const Coeff& coeff = z.coeff;
    const std::size_t w = coeff.width();
    const std::size_t nsrc = n >= 0 ? x.count(n) : 0;
    const std::size_t ndst = x.count(z.dim);
    const std::size_t rows = ndst * w;
    const std::size_t unknowns = nsrc * w;

    // Column u*w+j: the flattened coboundary of the unit cochain at (u, j).
    IntMatrix m(rows, unknowns + ndst * coeff.torsion.size());
    for (std::size_t u = 0; u < nsrc; ++u) {
        Cochain e = zero_cochain(x, n, coeff);
        e.values[u][0] = 1;  // coordinates behave identically; scatter below
        Cochain de = coboundary(x, e);
        for (std::size_t t = 0; t < ndst; ++t) {
            const Int& c = de.values[t][0];
            if (c == 0) continue;
            for (std::size_t j = 0; j < w; ++j) m(t * w + j, u * w + j) = c;
        }
    }
    std::size_t slack = unknowns;
    for (std::size_t t = 0; t < ndst; ++t)
        for (std::size_t j = 0; j < coeff.torsion.size(); ++j)
            m(t * w + coeff.free_rank + j, slack++) = coeff.torsion[j];

    IntVec b;
    b.reserve(rows);
    for (const auto& v : z.values) b.insert(b.end(), v.begin(), v.end());

    LinearSolution sol = solve_linear(m, b);
    if (!sol.particular) return std::nullopt;
    Cochain e = zero_cochain(x, n, coeff);
    for (std::size_t u = 0; u < nsrc; ++u)
        for (std::size_t j = 0; j < w; ++j) e.values[u][j] = (*sol.particular)[u * w + j];
    return cochain_reduce(e);
}

struct CohomologyResult {
    FullyEffectiveGroup group;  // elements are cocycle Cochains
    // For a cocycle z whose class vanishes: e with delta e = z (mod torsion).
    std::function<std::optional<Cochain>(const Cochain&)> coboundary_witness;
};

// H^n(X; coeff) as a fully effective group whose element representatives are
// cocycles, assembled as cocycles(n) modulo coboundaries from level n-1.
inline CohomologyResult cohomology(const SimplicialSet& x, int n, const Coeff& coeff) {
    FullyEffectiveGroup cn = cochain_group(x, n, coeff);
    FullyEffectiveGroup cn1 = cochain_group(x, n + 1, coeff);
    FullyEffectiveGroup cnm1 = cochain_group(x, n - 1, coeff);
    auto delta = [&x](const Elem& e) {
        return Elem(coboundary(x, std::any_cast<const Cochain&>(e)));
    };
    FullyEffectiveGroup cocycles = kernel(cn, cn1, delta);
    CokernelResult cok = cokernel(cnm1.base, cnm1.generators, cocycles, delta);
    CohomologyResult out;
    out.group = cok.group;
    auto wit = cok.zero_witness;
    out.coboundary_witness = [wit](const Cochain& z) -> std::optional<Cochain> {
        std::optional<Elem> e = wit(z);
        if (!e) return std::nullopt;
        return cochain_reduce(std::any_cast<const Cochain&>(*e));
    };
    return out;
}

// ---------------------------------------------------------------------------
// Cone and suspension cochain algebra

// C^n(CX) splits as C^{n-1}(X) (+) C^n(X) for n >= 1: the cone part reads
// b(cone r) = (-1)^n e(r), the base part is the restriction to the X block.
// Under this split, delta(e, c) = (-delta e + c, delta c).
inline Cochain cone_join(const ConeSpace& cx, const Cochain& e, const Cochain& c) {
    if (e.dim + 1 != c.dim || !(e.coeff == c.coeff))
        throw std::invalid_argument("cone_join: shape mismatch");
    const int n = c.dim;
    if (n < 1) throw std::invalid_argument("cone_join: requires dimension >= 1");
    Cochain b = zero_cochain(cx.space, n, c.coeff);
    const std::size_t nx = cx.x_count_at(n);
    for (std::size_t i = 0; i < nx; ++i) b.values[i] = c.values[i];
    const int sign = n % 2 == 0 ? 1 : -1;
    for (std::size_t j = 0; j < e.values.size(); ++j)
        b.values[nx + j] = vec_scale(sign, e.values[j]);
    return b;
}

inline std::pair<Cochain, Cochain> cone_split(const ConeSpace& cx, const SimplicialSet& x,
                                              const Cochain& b) {
    const int n = b.dim;
    if (n < 1) throw std::invalid_argument("cone_split: requires dimension >= 1");
    Cochain c = zero_cochain(x, n, b.coeff);
    Cochain e = zero_cochain(x, n - 1, b.coeff);
    const std::size_t nx = cx.x_count_at(n);
    for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] = b.values[i];
    const int sign = n % 2 == 0 ? 1 : -1;
    for (std::size_t j = 0; j < e.values.size(); ++j)
        e.values[j] = vec_scale(sign, b.values[nx + j]);
    return {e, c};
}

// Restriction of a cone cochain to the X block.
inline Cochain cone_restrict(const ConeSpace& cx, const SimplicialSet& x, const Cochain& b) {
    Cochain c = zero_cochain(x, b.dim, b.coeff);
    for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] = b.values[i];
    return c;
}

// The degree-shift isomorphism C^n(X) -> C^{n+1}(SX) for n >= 1:
// (Dz)(susp r) = (-1)^n z(r).  It satisfies delta(Dz) = -D(delta z).
inline Cochain suspension_shift(const SuspensionSpace& sx, const Cochain& z) {
    if (z.dim < 1) throw std::invalid_argument("suspension_shift: requires dimension >= 1");
    Cochain out = zero_cochain(sx.space, z.dim + 1, z.coeff);
    const int sign = z.dim % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < z.values.size(); ++i)
        out.values[i] = vec_scale(sign, z.values[i]);
    return out;
}

inline Cochain suspension_unshift(const SuspensionSpace& sx, const SimplicialSet& x,
                                  const Cochain& w) {
    if (w.dim < 2) throw std::invalid_argument("suspension_unshift: requires dimension >= 2");
    Cochain out = zero_cochain(x, w.dim - 1, w.coeff);
    const int sign = (w.dim - 1) % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = vec_scale(sign, w.values[i]);
    return out;
}

// Pullback of a cochain along a simplicial map: (f* c)(x) = c(f(x)).
inline Cochain pullback_cochain(const SimplicialSet& x, const SimplicialMap& f, const Cochain& c) {
    Cochain out = zero_cochain(x, c.dim, c.coeff);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = evaluate(c, map_push(f, nondeg_ref(c.dim, i)));
    return out;
}

}  // namespace homcls
