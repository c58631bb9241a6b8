// Acceptance gate: every shipped capability, one line per criterion.
// Exits nonzero if any criterion fails its exact checks or its time budget.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "homcls/chains.hpp"
#include "homcls/homotopy.hpp"
#include "homcls/snf.hpp"
#include "test_spaces.hpp"

using namespace homcls;
using namespace homcls::testspaces;

namespace {

const Coeff kZ{1, {}};
const Coeff kZ2{0, {Int(2)}};

struct Failures {
    int count = 0;
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++count;
            std::cerr << "    check failed: " << what << "\n";
        }
    }
};

// --------------------------------------------------------------------------
// 1. Degree classification from the three-sphere.

bool criterion_hopf_degree() {
    Failures f;
    HomotopyEngine eng(minimal_sphere(3), sphere3_data());
    const FullyEffectiveGroup& g = eng.classes();
    f.expect(g.free_rank() == 1 && g.torsion().empty(), "[S^3, target] is Z");
    IntVec idc = eng.class_of(identity_map(eng.space()));
    f.expect(idc.size() == 1 && (idc[0] == 1 || idc[0] == -1),
             "identity has class +-1 x generator");
    f.expect(vec_is_zero(eng.class_of(constant_map(eng.space(), 0))),
             "constant map has class zero");
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 2. The order-two group of classes from the four-sphere.

bool criterion_stable_stem() {
    Failures f;
    StageClassGroup r = homotopy_classes(minimal_sphere(4), sphere3_data());
    f.expect(r.group.free_rank() == 0 && r.group.torsion() == std::vector<Int>{Int(2)},
             "[S^4, target] is Z/2");
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 3. Eilenberg-MacLane targets reproduce cohomology.

bool criterion_em_cohomology() {
    Failures f;
    struct Case {
        const char* label;
        SimplicialSet space;
        Coeff coeff;
        int n;
    };
    std::vector<Case> cases;
    cases.push_back({"boundary_d4 (Z,3)", boundary_simplex(4), kZ, 3});
    cases.push_back({"rp2 (Z,2)", rp2(), kZ, 2});
    cases.push_back({"rp2 (Z,3)", rp2(), kZ, 3});
    cases.push_back({"rp2 (Z/2,2)", rp2(), kZ2, 2});
    cases.push_back({"torus7 (Z,2)", torus7(), kZ, 2});
    cases.push_back({"torus7 (Z,3)", torus7(), kZ, 3});
    cases.push_back({"torus7 (Z/2,2)", torus7(), kZ2, 2});
    for (const Case& c : cases) {
        StageClassGroup r = homotopy_classes(c.space, em_target_data(c.coeff, c.n));
        CohomologyResult h = cohomology(c.space, c.n, c.coeff);
        f.expect(r.group.orders == h.group.orders, std::string("class group matches H^n: ") + c.label);
    }
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 4. The wedge group and its restriction cross-validation.

bool wedge_inclusion(const SimplicialSet& sub, const SimplicialSet& whole, SimplicialMap& out) {
    out.images.assign(sub.names.size(), {});
    for (int d = 0; d <= sub.top_dim(); ++d)
        for (std::size_t i = 0; i < sub.count(d); ++i) {
            auto idx = find_simplex(whole, d, sub.name(d, i));
            if (!idx) return false;
            out.images[static_cast<std::size_t>(d)].push_back(nondeg_ref(d, *idx));
        }
    validate_simplicial_map(sub, whole, out);
    return true;
}

bool criterion_wedge() {
    Failures f;
    SimplicialSet x = wedge_s4_s3();
    HomotopyEngine eng(x, sphere3_data());
    const FullyEffectiveGroup& g = eng.classes();
    f.expect(g.orders == (std::vector<Int>{Int(2), Int(0)}), "[S^4 v S^3, target] is Z (+) Z/2");
    if (f.count) return false;

    // Restriction oracle: summand inclusions map the generators onto the
    // single-sphere answers, so the restriction homomorphism is an
    // isomorphism onto [S^4, target] x [S^3, target].
    SimplicialSet a = boundary_simplex(5);
    std::vector<std::vector<std::size_t>> bf;
    for (int omit = 0; omit <= 4; ++omit) {
        std::vector<std::size_t> fc;
        for (int i = 0; i <= 4; ++i)
            if (i != omit) fc.push_back(static_cast<std::size_t>(i));
        bf.push_back(std::move(fc));
    }
    SimplicialSet b = simplicial_complex({"5", "6", "7", "8", "9"}, bf);
    SimplicialMap incl_a, incl_b;
    f.expect(wedge_inclusion(a, x, incl_a), "four-sphere summand includes");
    f.expect(wedge_inclusion(b, x, incl_b), "three-sphere summand includes");
    if (f.count) return false;

    HomotopyEngine eng_a(a, sphere3_data());
    HomotopyEngine eng_b(b, sphere3_data());
    const FullyEffectiveGroup& ga = eng_a.stage_group(4);
    const FullyEffectiveGroup& gb = eng_b.stage_group(3);
    f.expect(ga.orders == std::vector<Int>{Int(2)}, "summand group [S^4] is Z/2");
    f.expect(gb.orders == std::vector<Int>{Int(0)}, "summand group [S^3] is Z");
    if (f.count) return false;

    auto restrict_a = [&](const MapRep& m) {
        std::vector<Cochain> comps;
        for (const Cochain& c : m.comps) comps.push_back(pullback_cochain(a, incl_a, c));
        return eng_a.make_rep(m.stage, std::move(comps));
    };
    auto restrict_b = [&](const MapRep& m) {
        std::vector<Cochain> comps{pullback_cochain(b, incl_b, m.comps[0])};
        return eng_b.make_rep(3, std::move(comps));
    };
    const MapRep& g_tors = std::any_cast<const MapRep&>(g.generators[0]);
    const MapRep& g_free = std::any_cast<const MapRep&>(g.generators[1]);
    f.expect(ga.coords(Elem(restrict_a(g_tors))) == IntVec{Int(1)},
             "order-two generator restricts to the [S^4] generator");
    f.expect(gb.coords(Elem(restrict_b(g_tors))) == IntVec{Int(0)},
             "order-two generator dies on the three-sphere");
    IntVec fb = gb.coords(Elem(restrict_b(g_free)));
    f.expect(fb == IntVec{Int(1)} || fb == IntVec{Int(-1)},
             "free generator restricts to a degree +-1 class");
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 5. The H-group property suite on random stage simplices.

EmSimplex rand_em(std::mt19937& rng, int m, int n, const Coeff& coeff) {
    EmSimplex s = em_zero(m, n, coeff);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> val(-3, 3);
    for (Mask t : subsets_of_size(m, n + 1)) {
        if (!coin(rng)) continue;
        IntVec v(coeff.width());
        for (auto& c : v) c = val(rng);
        em_set(s, t, v);
    }
    return s;
}

// A random member of the sphere tower's top stage over Delta^m: a cocycle
// bottom plus a degree-4 component solving the lifting condition.
StageSimplex rand_stage4(std::mt19937& rng, const PostnikovTower& tower, int m) {
    StageSimplex s = tower.zero(4, m);
    s.comps[0] = delta_map(rand_em(rng, m, 2, kZ));
    EmSimplex k = tower.k_value(3, tower.truncate(s, 3));
    if (em_is_zero(k)) {
        s.comps[1] = delta_map(rand_em(rng, m, 3, kZ2));
    } else {
        SimplicialSet delta = standard_simplex(m);
        FaceCache fc(delta);
        auto e = solve_coboundary(delta, em_to_standard_cochain(fc, k));
        if (!e) throw std::runtime_error("lifting condition unsolvable over a simplex");
        s.comps[1] = em_add(em_from_standard_cochain(fc, *e), delta_map(rand_em(rng, m, 3, kZ2)));
    }
    return s;
}

bool criterion_h_group() {
    Failures f;
    PostnikovTower tower(sphere3_data());
    std::mt19937 rng(20260818);
    std::uniform_int_distribution<int> md(0, 4);
    int simplices = 0;
    while (simplices < 200) {
        int m = md(rng);
        StageSimplex a = rand_stage4(rng, tower, m);
        StageSimplex b = rand_stage4(rng, tower, m);
        simplices += 2;

        f.expect(tower.is_member(a) && tower.is_member(b), "random simplices are members");
        // Strict unit and inverse.
        f.expect(tower.add(a, tower.zero(4, m)) == a, "right unit");
        f.expect(tower.add(tower.zero(4, m), a) == a, "left unit");
        f.expect(tower.add(a, tower.neg(a)) == tower.zero(4, m), "right inverse");
        f.expect(tower.add(tower.neg(a), a) == tower.zero(4, m), "left inverse");
        // Stage closure.
        f.expect(tower.is_member(tower.add(a, b)), "sum stays in the stage");
        f.expect(tower.is_member(tower.neg(a)), "negation stays in the stage");
        // Adding or negating a top-only simplex acts on top components alone.
        StageSimplex top_only = tower.zero(4, m);
        top_only.comps[1] = rand_em(rng, m, 4, kZ2);
        StageSimplex sum = tower.add(a, top_only);
        f.expect(sum.comps[0] == a.comps[0] &&
                     sum.comps[1] == em_add(a.comps[1], top_only.comps[1]),
                 "top-only addition adds top components");
        f.expect(tower.neg(top_only).comps[1] == em_neg(top_only.comps[1]),
                 "top-only negation negates the top component");
        // Projection is a strict homomorphism.
        f.expect(tower.project(tower.add(a, b)) ==
                     tower.add(tower.project(a), tower.project(b)),
                 "projection preserves sums");
        f.expect(tower.project(tower.neg(a)) == tower.neg(tower.project(a)),
                 "projection preserves negation");
        // The k-invariant's failure of additivity is exactly the coboundary
        // of the stored correction term.
        StageSimplex a3 = tower.truncate(a, 3);
        StageSimplex b3 = tower.truncate(b, 3);
        EmSimplex lhs = tower.k_value(3, tower.add(a3, b3));
        EmSimplex rhs = em_add(em_add(tower.k_value(3, a3), tower.k_value(3, b3)),
                               delta_map(tower.correction(3, a3, b3)));
        f.expect(lhs == rhs, "nonadditivity equals the correction's coboundary");
    }
    // The same coboundary identity where the k-invariant has content
    // (degree-5 values need at least a 5-simplex).
    for (int m : {5, 5, 5, 5, 6, 6}) {
        StageSimplex a3 = tower.zero(3, m);
        a3.comps[0] = delta_map(rand_em(rng, m, 2, kZ));
        StageSimplex b3 = tower.zero(3, m);
        b3.comps[0] = delta_map(rand_em(rng, m, 2, kZ));
        EmSimplex lhs = tower.k_value(3, tower.add(a3, b3));
        EmSimplex rhs = em_add(em_add(tower.k_value(3, a3), tower.k_value(3, b3)),
                               delta_map(tower.correction(3, a3, b3)));
        f.expect(lhs == rhs, "nonadditivity identity with nonzero k-invariant");
    }
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 6. The chain homotopy identity on the two-triangle square.

struct RefOps {
    const SimplicialSet* x;
    SimplexRef face(const SimplexRef& r, int i) const { return x->face(r, i); }
    SimplexRef degeneracy(const SimplexRef& r, int i) const { return apply_degeneracy(r, i); }
    bool equal(const SimplexRef& a, const SimplexRef& b) const { return a == b; }
    std::string key(const SimplexRef& r) const { return ref_to_string(r); }
};

std::vector<SimplexRef> all_refs(const SimplicialSet& x, int m) {
    std::set<SimplexRef> out;
    for (std::size_t i = 0; i < x.count(m); ++i) out.insert(nondeg_ref(m, i));
    if (m > 0)
        for (const SimplexRef& r : all_refs(x, m - 1))
            for (int j = 0; j <= m - 1; ++j) out.insert(apply_degeneracy(r, j));
    return {out.begin(), out.end()};
}

bool criterion_chain_homotopy() {
    Failures f;
    SimplicialSet x = two_triangles();
    RefOps ops{&x};
    for (int m = 0; m <= 3; ++m) {
        for (const SimplexRef& a : all_refs(x, m)) {
            for (const SimplexRef& b : all_refs(x, m)) {
                if (pair_is_degenerate(ops, a, b, m)) continue;
                PairSum<SimplexRef> lhs;
                lhs.push_back({Int(1), a, b});
                for (const TensorTerm<SimplexRef>& t : alexander_whitney(ops, a, b, m)) {
                    if (t.left.is_degenerate() || t.right.is_degenerate()) continue;
                    for (PairTerm<SimplexRef>& u :
                         shuffle_map(ops, t.left, t.left.dim(), t.right, t.right.dim())) {
                        u.coef = -u.coef * t.coef;
                        lhs.push_back(std::move(u));
                    }
                }
                PairSum<SimplexRef> rhs;
                if (m >= 1) {
                    for (const PairTerm<SimplexRef>& t : pair_boundary(ops, a, b, m)) {
                        if (pair_is_degenerate(ops, t.first, t.second, m - 1)) continue;
                        for (PairTerm<SimplexRef>& u :
                             homotopy_operator(ops, t.first, t.second, m - 1)) {
                            u.coef *= t.coef;
                            rhs.push_back(std::move(u));
                        }
                    }
                }
                for (const PairTerm<SimplexRef>& t : homotopy_operator(ops, a, b, m)) {
                    for (PairTerm<SimplexRef>& u : pair_boundary(ops, t.first, t.second, m + 1)) {
                        u.coef *= t.coef;
                        rhs.push_back(std::move(u));
                    }
                }
                PairSum<SimplexRef> l = combine_pairs(ops, lhs, m);
                PairSum<SimplexRef> r = combine_pairs(ops, rhs, m);
                bool same = l.size() == r.size();
                for (std::size_t i = 0; same && i < l.size(); ++i)
                    same = l[i].coef == r[i].coef && l[i].first == r[i].first &&
                           l[i].second == r[i].second;
                f.expect(same, "identity at (" + ref_to_string(a) + ", " + ref_to_string(b) +
                                   ") dim " + std::to_string(m));
            }
        }
    }
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 7. Nullhomotopy certificates: 100 constructed nullhomotopic inputs.

bool criterion_certificates() {
    Failures f;
    std::mt19937 rng(424242);
    auto run = [&f, &rng](const SimplicialSet& xin, int iters) {
        HomotopyEngine eng(xin, sphere3_data());
        const SimplicialSet& x = eng.space();
        for (int it = 0; it < iters; ++it) {
            Cochain w2 = random_cochain(rng, x, 2, kZ, -2, 2);
            MapRep m = eng.make_rep(
                4, {cochain_reduce(coboundary(x, w2)), zero_cochain(x, 4, kZ2)});
            ConeMapRep cert = eng.nullhomotopy(m);
            f.expect(eng.is_valid(cert.rep), "certificate satisfies the lifting conditions");
            f.expect(eng.restrict_to_base(cert) == m, "certificate restricts to the input");
        }
    };
    run(boundary_simplex(4), 50);
    run(minimal_sphere(4), 50);
    return f.count == 0;
}

// --------------------------------------------------------------------------
// 8. Smith normal form invariants on random matrices.

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

bool criterion_snf() {
    Failures f;
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> dim(0, 6);
    std::uniform_int_distribution<int> entry(-9, 9);
    for (int iter = 0; iter < 1000; ++iter) {
        IntMatrix u(dim(rng), dim(rng));
        for (std::size_t i = 0; i < u.rows(); ++i)
            for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = entry(rng);
        SnfDecomposition r = smith_normal_form(u);
        f.expect(r.d == r.s * u * r.t, "D = S*U*T");
        f.expect(abs_int(determinant(r.s)) == 1, "S unimodular");
        f.expect(abs_int(determinant(r.t)) == 1, "T unimodular");
        f.expect(divisibility_chain_ok(r.d), "divisibility chain");
        if (f.count > 8) return false;  // don't spam a broken build
    }
    return f.count == 0;
}

// --------------------------------------------------------------------------

struct Criterion {
    const char* name;
    bool (*check)();
    double limit_seconds;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"degree classification from the three-sphere", criterion_hopf_degree, 10.0},
        {"order-two classes from the four-sphere", criterion_stable_stem, 300.0},
        {"Eilenberg-MacLane targets reproduce cohomology (7 cases)", criterion_em_cohomology,
         30.0},
        {"wedge group with restriction cross-validation", criterion_wedge, 600.0},
        {"H-group identities on 200+ random stage simplices", criterion_h_group, 600.0},
        {"chain homotopy identity on the two-triangle square", criterion_chain_homotopy, 600.0},
        {"100 nullhomotopy certificates restrict to their inputs", criterion_certificates,
         600.0},
        {"Smith normal form invariants on 1000 random matrices", criterion_snf, 5.0},
    };

    bool all_ok = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.check();
        } catch (const std::exception& e) {
            std::cerr << "    exception: " << e.what() << "\n";
            ok = false;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        if (secs > c.limit_seconds) {
            std::cerr << "    time limit exceeded: " << secs << "s > " << c.limit_seconds
                      << "s\n";
            ok = false;
        }
        std::printf("[%zu] %-60s %s (%.2fs, limit %.0fs)\n", i + 1, c.name,
                    ok ? "PASS" : "FAIL", secs, c.limit_seconds);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
