#pragma once

#include <any>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homcls/int_matrix.hpp"
#include "homcls/ints.hpp"
#include "homcls/snf.hpp"

namespace homcls {

// A group element representative.  Representations are generally non-unique:
// distinct representatives may denote the same group element, and only fully
// effective groups can decide equality of classes (through express).
using Elem = std::any;

// Operations on representatives that are only required to be correct at the
// level of classes: [zero] = 0, [add(α,β)] = [α]+[β], [neg(α)] = −[α].  No
// group law (not even associativity) is assumed on representatives, and no
// equality test exists at this level.
struct SemiEffectiveGroup {
    Elem zero;
    std::function<Elem(const Elem&, const Elem&)> add;
    std::function<Elem(const Elem&)> neg;
};

// Generators b₁,…,bₙ together with an m×n matrix U whose rows span exactly
// the lattice {z : Σ zᵢbᵢ = 0}, and a routine expressing any representative
// as an integer combination of the bᵢ.
struct Presentation {
    SemiEffectiveGroup base;
    std::vector<Elem> generators;
    IntMatrix relations;
    std::function<IntVec(const Elem&)> express;
};

// Internal direct sum of cyclic subgroups ⟨aᵢ⟩ of order qᵢ, with qᵢ ∈
// {2,3,…} for torsion generators and qᵢ = 0 standing for infinite order.
// Groups produced by the constructions below are in invariant-factor form:
// finite orders ascending under divisibility, infinite factors last.
struct FullyEffectiveGroup {
    SemiEffectiveGroup base;
    std::vector<Elem> generators;
    std::vector<Int> orders;
    std::function<IntVec(const Elem&)> express;

    // Canonical coordinates: torsion coordinates reduced into [0, qᵢ).
    IntVec reduce(IntVec z) const {
        for (std::size_t i = 0; i < z.size(); ++i)
            if (orders[i] != 0) z[i] = mod_floor(z[i], orders[i]);
        return z;
    }

    IntVec coords(const Elem& e) const { return reduce(express(e)); }
    bool is_zero_class(const Elem& e) const { return vec_is_zero(coords(e)); }
    bool classes_equal(const Elem& a, const Elem& b) const { return coords(a) == coords(b); }

    std::size_t free_rank() const {
        std::size_t r = 0;
        for (const Int& q : orders)
            if (q == 0) ++r;
        return r;
    }

    std::vector<Int> torsion() const {
        std::vector<Int> t;
        for (const Int& q : orders)
            if (q != 0) t.push_back(q);
        return t;
    }

    bool is_trivial() const { return orders.empty(); }

    // Number of elements; 0 encodes infinite.
    Int order() const {
        Int n = 1;
        for (const Int& q : orders) {
            if (q == 0) return 0;
            n *= q;
        }
        return n;
    }
};

// c·x in a semi-effective group, by binary doubling (class-level correct
// regardless of how add associates on representatives).
inline Elem semi_scalar(const SemiEffectiveGroup& g, const Elem& x, Int c) {
    if (c < 0) return g.neg(semi_scalar(g, x, -c));
    Elem acc = g.zero;
    Elem pow = x;
    for (; c > 0; c >>= 1) {
        if ((c & 1) != 0) acc = g.add(acc, pow);
        if (c > 1) pow = g.add(pow, pow);
    }
    return acc;
}

// Σ zᵢ·gensᵢ on representatives.
inline Elem semi_combo(const SemiEffectiveGroup& g, const std::vector<Elem>& gens, const IntVec& z) {
    if (z.size() != gens.size()) throw std::invalid_argument("semi_combo: coefficient count mismatch");
    Elem acc = g.zero;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (z[i] == 0) continue;
        acc = g.add(acc, semi_scalar(g, gens[i], z[i]));
    }
    return acc;
}

// Relation rows qⱼ·eⱼ for the torsion generators of a fully effective group.
inline IntMatrix orders_matrix(const FullyEffectiveGroup& g) {
    std::vector<IntVec> rows;
    for (std::size_t j = 0; j < g.orders.size(); ++j) {
        if (g.orders[j] == 0) continue;
        IntVec r(g.orders.size());
        r[j] = g.orders[j];
        rows.push_back(std::move(r));
    }
    return IntMatrix::from_rows(rows, g.orders.size());
}

// Normalize a presentation into a fully effective group: with D = S·U·T the
// generator change a := T⁻¹·b turns the relation lattice into the rows of D,
// so aⱼ has order dⱼⱼ (0 beyond the diagonal); generators with dⱼⱼ = 1 are
// dropped.  Coordinates transform by z ↦ z·T.
inline FullyEffectiveGroup presentation_to_fully_effective(const Presentation& p) {
    const std::size_t n = p.generators.size();
    if (p.relations.cols() != n && p.relations.rows() != 0)
        throw std::invalid_argument("presentation: relation matrix width must match generator count");
    SnfDecomposition f = smith_normal_form(
        p.relations.rows() ? p.relations : IntMatrix(0, n));
    const std::size_t rb = std::min(f.d.rows(), f.d.cols());

    IntMatrix tinv = inverse_unimodular(f.t);

    FullyEffectiveGroup g;
    g.base = p.base;
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < n; ++j) {
        Int q = j < rb ? f.d(j, j) : Int(0);
        if (q == 1) continue;
        kept.push_back(j);
        g.orders.push_back(q);
        g.generators.push_back(semi_combo(p.base, p.generators, tinv.row(j)));
    }

    auto express_old = p.express;
    IntMatrix t = f.t;
    auto kept_copy = kept;
    std::vector<Int> orders_copy = g.orders;
    g.express = [express_old, t, kept_copy, orders_copy](const Elem& e) {
        IntVec z = express_old(e);
        IntVec w = row_times_matrix(z, t);
        IntVec out(kept_copy.size());
        for (std::size_t s = 0; s < kept_copy.size(); ++s) {
            out[s] = w[kept_copy[s]];
            if (orders_copy[s] != 0) out[s] = mod_floor(out[s], orders_copy[s]);
        }
        return out;
    };
    return g;
}

// Generating set of the lattice {x : x·Z lies in the row space of V},
// obtained by projecting the left kernel of the stacked matrix [Z; V] to its
// first Z.rows() coordinates.
inline std::vector<IntVec> lattice_preimage_generators(const IntMatrix& z, const IntMatrix& v) {
    IntMatrix stacked = vstack(z, v);
    LinearSystem sys(stacked.transpose());
    std::vector<IntVec> out;
    for (const IntVec& k : sys.kernel()) {
        IntVec x(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(z.rows()));
        if (!vec_is_zero(x)) out.push_back(std::move(x));
    }
    return out;
}

// Kernel of a homomorphism between fully effective groups, given as a
// routine on representatives with [f(α)] = f([α]).  Representatives of the
// kernel are drawn from the domain's representative set.
inline FullyEffectiveGroup kernel(const FullyEffectiveGroup& a, const FullyEffectiveGroup& b,
                                  const std::function<Elem(const Elem&)>& f) {
    const std::size_t ka = a.generators.size();
    const std::size_t kb = b.generators.size();

    // Row i: the image of the i-th domain generator in codomain coordinates.
    std::vector<IntVec> zrows;
    zrows.reserve(ka);
    for (const Elem& g : a.generators) zrows.push_back(b.express(f(g)));
    IntMatrix z = IntMatrix::from_rows(zrows, kb);

    // x·Z ≡ 0 modulo the codomain's torsion relations.
    std::vector<IntVec> xs = lattice_preimage_generators(z, orders_matrix(b));
    IntMatrix x = IntMatrix::from_rows(xs, ka);

    Presentation p;
    p.base = a.base;
    for (const IntVec& row : xs) p.generators.push_back(semi_combo(a.base, a.generators, row));
    std::vector<IntVec> rel = lattice_preimage_generators(x, orders_matrix(a));
    p.relations = IntMatrix::from_rows(rel, xs.size());

    // Express a kernel representative through the domain's coordinates by
    // solving (v,w)·[X; U_A] = coords over Z.
    auto sys = std::make_shared<LinearSystem>(vstack(x, orders_matrix(a)).transpose());
    auto a_express = a.express;
    const std::size_t ngen = xs.size();
    p.express = [sys, a_express, ngen](const Elem& e) {
        std::optional<IntVec> vw = sys->solve(a_express(e));
        if (!vw) throw std::invalid_argument("kernel express: element is not in the kernel");
        return IntVec(vw->begin(), vw->begin() + static_cast<std::ptrdiff_t>(ngen));
    };
    return presentation_to_fully_effective(p);
}

struct CokernelResult {
    FullyEffectiveGroup group;
    // For [β] in the image of f: a domain representative α with [f(α)] = [β];
    // nullopt otherwise.  Witnesses come from the canonical solver, so they
    // are reproducible.
    std::function<std::optional<Elem>(const Elem&)> zero_witness;
};

// Cokernel B/im(f).  The domain only needs semi-effective operations and a
// listed generating set; the quotient reuses B's representative set, and its
// relations are the images of the domain generators stacked over B's own
// relations.
inline CokernelResult cokernel(const SemiEffectiveGroup& a_base, const std::vector<Elem>& a_gens,
                               const FullyEffectiveGroup& b,
                               const std::function<Elem(const Elem&)>& f) {
    const std::size_t kb = b.generators.size();
    std::vector<IntVec> zrows;
    zrows.reserve(a_gens.size());
    for (const Elem& g : a_gens) zrows.push_back(b.express(f(g)));
    IntMatrix z = IntMatrix::from_rows(zrows, kb);

    Presentation p;
    p.base = b.base;
    p.generators = b.generators;
    p.relations = vstack(z, orders_matrix(b));
    p.express = b.express;

    CokernelResult out;
    out.group = presentation_to_fully_effective(p);

    auto sys = std::make_shared<LinearSystem>(p.relations.transpose());
    auto b_express = b.express;
    const std::size_t ngen = a_gens.size();
    out.zero_witness = [sys, b_express, a_base, a_gens, ngen](const Elem& beta) -> std::optional<Elem> {
        std::optional<IntVec> xw = sys->solve(b_express(beta));
        if (!xw) return std::nullopt;
        IntVec x(xw->begin(), xw->begin() + static_cast<std::ptrdiff_t>(ngen));
        return semi_combo(a_base, a_gens, x);
    };
    return out;
}

// Assemble the middle group of a short exact sequence 0 → A → B → C → 0 from
// fully effective ends.  Inputs beyond the groups:
//   f : A-representatives → B-representatives (the injection),
//   g : B-representatives → C-representatives (the projection),
//   r : representatives of elements of ker g → A-representatives, a
//       retraction with [f(r(β))] = [β],
//   xi: C-representatives → B-representatives, a section on representatives
//       only (g(xi(γ)) must represent [γ]; xi need not be a homomorphism).
// Generators are {f(aᵢ)} ∪ {xi(γⱼ)}; each C-relation row w pulls back through
// r to A-coordinates y, giving the relation block [[−Y, V], [U, 0]].
inline FullyEffectiveGroup assemble_short_exact(
    const FullyEffectiveGroup& a, const FullyEffectiveGroup& c,
    const std::function<Elem(const Elem&)>& f, const std::function<Elem(const Elem&)>& g,
    const std::function<Elem(const Elem&)>& r, const std::function<Elem(const Elem&)>& xi,
    const SemiEffectiveGroup& b_base) {
    const std::size_t ka = a.generators.size();
    const std::size_t kc = c.generators.size();

    std::vector<Elem> u;
    for (const Elem& ai : a.generators) u.push_back(f(ai));
    std::vector<Elem> v;
    for (const Elem& cj : c.generators) v.push_back(xi(cj));

    // Wiring check: g∘xi must hit each C-generator class on the nose.
    for (std::size_t j = 0; j < kc; ++j) {
        IntVec got = c.coords(g(v[j]));
        IntVec want(kc);
        want[j] = 1;
        if (got != c.reduce(want))
            throw std::invalid_argument("assemble_short_exact: xi is not a section for g");
    }

    IntMatrix uc = orders_matrix(c);
    std::vector<IntVec> rel_rows;
    for (std::size_t s = 0; s < uc.rows(); ++s) {
        IntVec w = uc.row(s);
        // Σ wⱼ·xi(γⱼ) lies in ker g, so it pulls back through r.
        Elem pulled = r(semi_combo(b_base, v, w));
        IntVec y = a.express(pulled);
        IntVec row(ka + kc);
        for (std::size_t i = 0; i < ka; ++i) row[i] = -y[i];
        for (std::size_t j = 0; j < kc; ++j) row[ka + j] = w[j];
        rel_rows.push_back(std::move(row));
    }
    IntMatrix ua = orders_matrix(a);
    for (std::size_t s = 0; s < ua.rows(); ++s) {
        IntVec row(ka + kc);
        IntVec q = ua.row(s);
        for (std::size_t i = 0; i < ka; ++i) row[i] = q[i];
        rel_rows.push_back(std::move(row));
    }

    Presentation p;
    p.base = b_base;
    p.generators = u;
    p.generators.insert(p.generators.end(), v.begin(), v.end());
    p.relations = IntMatrix::from_rows(rel_rows, ka + kc);
    p.express = [a, c, g, r, b_base, v, ka, kc](const Elem& beta) {
        IntVec w = c.coords(g(beta));
        Elem beta1 = b_base.add(beta, b_base.neg(semi_combo(b_base, v, w)));
        IntVec y = a.express(r(beta1));
        IntVec out(ka + kc);
        for (std::size_t i = 0; i < ka; ++i) out[i] = y[i];
        for (std::size_t j = 0; j < kc; ++j) out[ka + j] = w[j];
        return out;
    };
    return presentation_to_fully_effective(p);
}

// The free-plus-torsion lattice Z^{r} ⊕ Z/q₁ ⊕ … with integer-vector
// representatives; the workhorse concrete group (cochain groups, coefficient
// groups).  Orders: 0 for a free coordinate, qᵢ ≥ 2 for torsion.
inline FullyEffectiveGroup vector_group(const std::vector<Int>& orders) {
    for (const Int& q : orders)
        if (q == 1 || q < 0) throw std::invalid_argument("vector_group: orders must be 0 or >= 2");
    const std::size_t n = orders.size();
    FullyEffectiveGroup g;
    g.orders = orders;
    g.base.zero = IntVec(n);
    g.base.add = [](const Elem& x, const Elem& y) {
        return Elem(vec_add(std::any_cast<const IntVec&>(x), std::any_cast<const IntVec&>(y)));
    };
    g.base.neg = [](const Elem& x) { return Elem(vec_neg(std::any_cast<const IntVec&>(x))); };
    for (std::size_t i = 0; i < n; ++i) {
        IntVec e(n);
        e[i] = 1;
        g.generators.push_back(e);
    }
    g.express = [](const Elem& x) { return std::any_cast<const IntVec&>(x); };
    return g;
}

// "Z^r (+) Z/q1 (+) ..." with the free part first; "0" for the trivial group.
inline std::string format_group(std::size_t free_rank, const std::vector<Int>& torsion) {
    if (free_rank == 0 && torsion.empty()) return "0";
    std::string s;
    if (free_rank == 1) s = "Z";
    else if (free_rank > 1) s = "Z^" + std::to_string(free_rank);
    for (const Int& q : torsion) {
        if (!s.empty()) s += " (+) ";
        s += "Z/" + q.str();
    }
    return s;
}

inline std::string format_group(const FullyEffectiveGroup& g) {
    return format_group(g.free_rank(), g.torsion());
}

}  // namespace homcls
