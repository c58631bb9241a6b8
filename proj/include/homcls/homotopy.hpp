#pragma once

// Homotopy classes of maps into a Postnikov target.
//
// A map X -> P_i is stored as a tuple of cochains (c^d, ..., c^i) on X
// subject to the lifting conditions: c^d is a cocycle and each higher
// component satisfies  delta c^j = k_{(j-1)*}(c^d, ..., c^{j-1}).  The
// induced H-group operations evaluate the stage-level operations one simplex
// at a time, the connecting cochain mu transports k-values across the
// suspension of the domain, and nullhomotopies are built as maps from the
// cone CX restricting to the input on the base.  The group [X, P_i] is
// assembled stage by stage through the short exact sequence
//
//     0 -> H^i(X; pi_i) / im(mu_i) -> [X, P_i] -> ker(k_{(i-1)*}) -> 0,
//
// with the suspension side handled through listed generating sets only (no
// nested suspensions are ever formed).
//
// Lifetime: groups and representatives returned by an engine refer to state
// owned by that engine through shared ownership of the engine's state block,
// held by the engine handle itself and by every StageClassGroup.  Keep one of
// those alive while using a returned group.

#include <algorithm>
#include <any>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homcls/abelian.hpp"
#include "homcls/cochain.hpp"
#include "homcls/em.hpp"
#include "homcls/postnikov.hpp"
#include "homcls/simplicial.hpp"

namespace homcls {

// A simplicial map domain -> P_stage in cochain form.  comps[j - d] holds
// the degree-j component; values are kept reduced modulo coefficient
// torsion.  The domain pointer identifies one of the engine's three spaces
// (the base X, its cone CX, or its suspension SX).
struct MapRep {
    const SimplicialSet* domain = nullptr;
    int d = 0;
    int stage = 0;
    std::vector<Cochain> comps;

    const Cochain& comp(int j) const { return comps[static_cast<std::size_t>(j - d)]; }
    Cochain& comp(int j) { return comps[static_cast<std::size_t>(j - d)]; }

    friend bool operator==(const MapRep& a, const MapRep& b) {
        return a.d == b.d && a.stage == b.stage && a.comps == b.comps;
    }
};

// A map CX -> P_stage: a nullhomotopy certificate for its restriction to X.
struct ConeMapRep {
    MapRep rep;
};

// All state for computing homotopy-class groups of maps from one fixed
// finite domain into one Postnikov target.
class HomotopyEngine {
public:
    HomotopyEngine(SimplicialSet x, PostnikovData data)
        : st_(std::make_shared<State>(std::move(x), std::move(data))) {}

    int d() const { return st_->tower.d(); }
    int top_stage() const { return st_->tower.top_stage(); }
    const SimplicialSet& space() const { return st_->x; }
    const SimplicialSet& cone_space() const { return st_->susp.cone_x.space; }
    const SimplicialSet& suspension_space() const { return st_->susp.space; }
    const SuspensionSpace& suspension_data() const { return st_->susp; }
    const PostnikovTower& tower() const { return st_->tower; }

    // ------------------------------------------------------------------
    // Representative-level operations

    MapRep zero_rep(int stage) const { return make_zero(*st_, &st_->x, stage); }

    // Wrap explicit cochains as a map representation, checking the lifting
    // conditions.
    MapRep make_rep(int stage, std::vector<Cochain> comps) const {
        MapRep m{&st_->x, d(), stage, std::move(comps)};
        for (Cochain& c : m.comps) c = cochain_reduce(c);
        require_valid(m, "make_rep");
        return m;
    }

    // Insert a degree-`stage` cocycle as a map with vanishing lower
    // components.
    MapRep lambda_rep(int stage, const Cochain& z) const {
        return make_lambda(*st_, &st_->x, stage, z);
    }

    // The same insertion over the suspension of the domain.
    MapRep suspension_rep(int stage, const Cochain& z) const {
        return make_lambda(*st_, &st_->susp.space, stage, z);
    }

    MapRep suspension_zero(int stage) const { return make_zero(*st_, &st_->susp.space, stage); }

    MapRep add(const MapRep& a, const MapRep& b) const { return star_add(*st_, a, b); }
    MapRep neg(const MapRep& a) const { return star_neg(*st_, a); }
    MapRep sub(const MapRep& a, const MapRep& b) const { return add(a, neg(b)); }

    MapRep project(const MapRep& m) const { return truncate_rep(m, m.stage - 1); }

    // The obstruction cochain of a stage-s representation: the common value
    // of delta c^{s+1} over all lifts, in C^{s+2}(domain; pi_{s+1}).
    Cochain k_star(const MapRep& m) const { return k_star_impl(*st_, m); }

    // Lift to the next stage by solving delta c = k_star(m); throws
    // std::invalid_argument when the obstruction class is nonzero.
    MapRep xi_lift(const MapRep& m) const { return lift_rep(*st_, m, "xi_lift"); }

    // The suspension connecting cochain of a map on SX at stage s: a cocycle
    // in Z^{s+1}(X; pi_{s+1}) whose cone insertion has coboundary exactly the
    // obstruction cochain of the composite CX -> SX -> P_s.
    Cochain mu(const MapRep& f) const { return mu_impl(*st_, f); }

    // Pull a map on SX back to the cone along the collapse CX -> SX.
    MapRep compose_with_collapse(const MapRep& f) const { return pull_to_cone(*st_, f); }

    bool is_valid(const MapRep& m) const { return validity_error(m).empty(); }
    void require_valid(const MapRep& m, const char* who) const {
        std::string err = validity_error(m);
        if (!err.empty()) throw std::invalid_argument(std::string(who) + ": " + err);
    }

    // ------------------------------------------------------------------
    // Groups

    // The fully effective group [X, P_stage]; elements are MapReps on X.
    const FullyEffectiveGroup& stage_group(int stage) {
        if (stage < d() || stage > top_stage())
            throw std::invalid_argument("stage_group: stage " + std::to_string(stage) +
                                        " outside [" + std::to_string(d()) + ", " +
                                        std::to_string(top_stage()) + "]");
        build_stage(stage);
        return st_->stage_groups.at(stage);
    }

    // The stage at which [X, Y] is read off: dim X clamped into [d, 2d-2],
    // then capped at the top stored stage when nothing above it can matter.
    int class_stage() const {
        int dim = 0;
        for (int j = 0; j <= st_->x.top_dim(); ++j)
            if (st_->x.count(j) > 0) dim = j;
        const int dd = d();
        if (dim > 2 * dd - 2)
            throw std::domain_error("homotopy classes: dim X = " + std::to_string(dim) +
                                    " exceeds the metastable range dim X <= 2d-2 = " +
                                    std::to_string(2 * dd - 2) + " for this target (d = " +
                                    std::to_string(dd) + ")");
        int stage = std::clamp(dim, dd, 2 * dd - 2);
        if (stage > top_stage()) {
            if (!st_->tower.complete_above_top())
                throw std::domain_error("homotopy classes: the target's Postnikov data stops at "
                                        "stage " + std::to_string(top_stage()) + " but stage " +
                                        std::to_string(stage) + " is required");
            stage = top_stage();
        }
        return stage;
    }

    // [X, Y] itself.
    const FullyEffectiveGroup& classes() { return stage_group(class_stage()); }

    // ------------------------------------------------------------------
    // Explicit simplicial maps into the stored model

    // The cochain representation of phi_stage composed with f.
    MapRep rep_of_map(const SimplicialMap& f, int stage) const {
        if (!st_->tower.has_model_map())
            throw std::domain_error("rep_of_map: target has no stored finite model");
        const SimplicialSet& model = *st_->tower.model();
        validate_simplicial_map(st_->x, model, f);
        MapRep m = make_zero(*st_, &st_->x, stage);
        for (int j = d(); j <= stage; ++j) {
            Cochain& c = m.comp(j);
            for (std::size_t i = 0; i < c.values.size(); ++i) {
                SimplexRef image = map_push(f, nondeg_ref(j, i));
                if (image.is_degenerate()) continue;
                StageSimplex s = st_->tower.phi_image(stage, j, image.base);
                c.values[i] = em_top_value(s.comps[static_cast<std::size_t>(j - d())]);
            }
            c = cochain_reduce(c);
        }
        require_valid(m, "rep_of_map");
        return m;
    }

    IntVec class_of(const SimplicialMap& f) {
        int stage = class_stage();
        const FullyEffectiveGroup& g = stage_group(stage);
        return g.coords(Elem(rep_of_map(f, stage)));
    }

    bool homotopic(const SimplicialMap& f, const SimplicialMap& g) {
        return class_of(f) == class_of(g);
    }

    bool is_nullhomotopic(const SimplicialMap& f) { return vec_is_zero(class_of(f)); }

    // ------------------------------------------------------------------
    // Nullhomotopies

    // A nullhomotopy certificate for a map representation whose class is
    // zero: a valid map representation on CX restricting to m on the base of
    // the cone.  Throws std::invalid_argument when the witness machinery
    // detects that the class is in fact nonzero.
    ConeMapRep nullhomotopy(const MapRep& m) {
        if (m.domain != &st_->x)
            throw std::invalid_argument("nullhomotopy: representation is not over the base space");
        require_valid(m, "nullhomotopy");
        for (int s = d() + 1; s <= m.stage; ++s) build_stage(s);
        return ConeMapRep{nullhoa(*st_, m)};
    }

    // Restriction of a cone representation to the base of the cone.
    MapRep restrict_to_base(const ConeMapRep& b) const {
        MapRep out{&st_->x, d(), b.rep.stage, {}};
        for (const Cochain& c : b.rep.comps)
            out.comps.push_back(cone_restrict(st_->susp.cone_x, st_->x, c));
        return out;
    }

private:
    struct State {
        PostnikovTower tower;
        SimplicialSet x;
        SuspensionSpace susp;  // also owns the cone CX the suspension quotients
        FaceCache xcache;
        FaceCache ccache;
        FaceCache scache;

        // Stage-indexed caches of the assembled machinery.
        std::map<int, FullyEffectiveGroup> stage_groups;
        std::map<int, CokernelResult> factor;  // H^j(X)/im(mu_j), keyed by j
        std::map<int, std::vector<MapRep>> susp_gens;

        State(SimplicialSet xin, PostnikovData data)
            : tower(std::move(data)),
              x(validated(std::move(xin))),
              susp(suspension(x)),
              xcache(x),
              ccache(susp.cone_x.space),
              scache(susp.space) {}

        State(const State&) = delete;
        State& operator=(const State&) = delete;

        static SimplicialSet validated(SimplicialSet s) {
            validate_simplicial_set(s);
            return s;
        }

        FaceCache& cache_for(const SimplicialSet* s) {
            if (s == &x) return xcache;
            if (s == &susp.cone_x.space) return ccache;
            if (s == &susp.space) return scache;
            throw std::invalid_argument("map representation over an unknown space");
        }
    };

    std::shared_ptr<State> st_;

    // ------------------------------------------------------------------
    // Simplexwise stage evaluation

    // The stage simplex carried by a representation over one nondegenerate
    // simplex of its domain: each component cochain restricted to the
    // simplex's vertex-subset lattice.
    static StageSimplex stage_over(State& st, const MapRep& m, int dim, std::size_t index) {
        FaceCache& fc = st.cache_for(m.domain);
        StageSimplex s;
        s.d = m.d;
        s.stage = m.stage;
        s.m = dim;
        for (int j = m.d; j <= m.stage; ++j) {
            const Cochain& c = m.comp(j);
            EmSimplex em = em_zero(dim, j, c.coeff);
            if (j <= dim) {
                for (Mask t : subsets_of_size(dim, j + 1)) {
                    SimplexRef r = fc.restrict(nondeg_ref(dim, index), t);
                    IntVec v = evaluate(c, r);
                    if (!vec_is_zero(v)) em_set(em, t, v);
                }
            }
            s.comps.push_back(std::move(em));
        }
        return s;
    }

    static bool rep_is_zero(const MapRep& m) {
        for (const Cochain& c : m.comps)
            if (!cochain_is_zero(c)) return false;
        return true;
    }

    static MapRep make_zero(State& st, const SimplicialSet* space, int stage) {
        const int dd = st.tower.d();
        if (stage < dd || stage > st.tower.top_stage())
            throw std::invalid_argument("map representation: stage out of range");
        MapRep m{space, dd, stage, {}};
        for (int j = dd; j <= stage; ++j)
            m.comps.push_back(zero_cochain(*space, j, st.tower.pi(j)));
        return m;
    }

    static MapRep make_lambda(State& st, const SimplicialSet* space, int stage,
                              const Cochain& z) {
        if (z.dim != stage || !(z.coeff == st.tower.pi(stage)))
            throw std::invalid_argument("cocycle insertion: wrong degree or coefficients");
        if (!is_cocycle(*space, z))
            throw std::invalid_argument("cocycle insertion: input must be a cocycle");
        MapRep m = make_zero(st, space, stage);
        m.comp(stage) = cochain_reduce(z);
        return m;
    }

    // Binary H-group operation, one simplex at a time: restrict both inputs
    // over each nondegenerate simplex, apply the stage-level operation, and
    // read the top values back off as the output cochains.  Adding the zero
    // representation is the identity on the nose (strict unit), so that case
    // short-circuits.
    static MapRep star_add(State& st, const MapRep& a, const MapRep& b) {
        if (a.domain != b.domain || a.stage != b.stage)
            throw std::invalid_argument("map addition: mismatched representations");
        if (rep_is_zero(a)) return reduced_copy(b);
        if (rep_is_zero(b)) return reduced_copy(a);
        MapRep out{a.domain, a.d, a.stage, {}};
        for (int j = a.d; j <= a.stage; ++j) {
            Cochain c = zero_cochain(*a.domain, j, a.comp(j).coeff);
            if (j == a.d) {
                c = cochain_add(a.comp(j), b.comp(j));
            } else {
                for (std::size_t i = 0; i < c.values.size(); ++i) {
                    StageSimplex sa = truncate_stage(stage_over(st, a, j, i), j, a.d);
                    StageSimplex sb = truncate_stage(stage_over(st, b, j, i), j, a.d);
                    StageSimplex sum = st.tower.add(sa, sb);
                    c.values[i] = em_top_value(sum.comps[static_cast<std::size_t>(j - a.d)]);
                }
            }
            out.comps.push_back(cochain_reduce(c));
        }
        return out;
    }

    static MapRep star_neg(State& st, const MapRep& a) {
        if (rep_is_zero(a)) return reduced_copy(a);
        MapRep out{a.domain, a.d, a.stage, {}};
        for (int j = a.d; j <= a.stage; ++j) {
            Cochain c = zero_cochain(*a.domain, j, a.comp(j).coeff);
            if (j == a.d) {
                c = cochain_neg(a.comp(j));
            } else {
                for (std::size_t i = 0; i < c.values.size(); ++i) {
                    StageSimplex sa = truncate_stage(stage_over(st, a, j, i), j, a.d);
                    StageSimplex n = st.tower.neg(sa);
                    c.values[i] = em_top_value(n.comps[static_cast<std::size_t>(j - a.d)]);
                }
            }
            out.comps.push_back(cochain_reduce(c));
        }
        return out;
    }

    static StageSimplex truncate_stage(StageSimplex s, int stage, int dd) {
        s.stage = stage;
        s.comps.resize(static_cast<std::size_t>(stage - dd) + 1);
        return s;
    }

    static MapRep reduced_copy(const MapRep& a) {
        MapRep out = a;
        for (Cochain& c : out.comps) c = cochain_reduce(c);
        return out;
    }

    static MapRep truncate_rep(const MapRep& m, int stage) {
        if (stage < m.d || stage > m.stage)
            throw std::invalid_argument("map truncation: stage out of range");
        MapRep out = m;
        out.stage = stage;
        out.comps.resize(static_cast<std::size_t>(stage - m.d) + 1);
        return out;
    }

    static Cochain k_star_impl(State& st, const MapRep& m) {
        const int s = m.stage;
        Cochain out = zero_cochain(*m.domain, s + 2, st.tower.pi(s + 1));
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            StageSimplex over = stage_over(st, m, s + 2, i);
            out.values[i] = em_top_value(st.tower.k_value(s, over));
        }
        return cochain_reduce(out);
    }

    static MapRep lift_rep(State& st, const MapRep& m, const char* who) {
        Cochain w = k_star_impl(st, m);
        std::optional<Cochain> c = solve_coboundary(*m.domain, w);
        if (!c)
            throw std::invalid_argument(std::string(who) +
                                        ": the obstruction cochain is not a coboundary; the map "
                                        "does not lift");
        MapRep out = m;
        out.stage = m.stage + 1;
        out.comps.push_back(std::move(*c));
        return out;
    }

    std::string validity_error(const MapRep& m) const {
        if (m.domain == nullptr) return "no domain";
        st_->cache_for(m.domain);  // throws for foreign spaces
        if (m.d != d() || m.stage < d() || m.stage > top_stage() ||
            m.comps.size() != static_cast<std::size_t>(m.stage - m.d) + 1)
            return "component count does not match the stage range";
        for (int j = m.d; j <= m.stage; ++j) {
            const Cochain& c = m.comp(j);
            if (c.dim != j || !(c.coeff == st_->tower.pi(j)) ||
                c.values.size() != m.domain->count(j))
                return "component " + std::to_string(j) + " has the wrong shape";
        }
        if (!is_cocycle(*m.domain, m.comp(m.d)))
            return "bottom component is not a cocycle";
        for (int j = m.d + 1; j <= m.stage; ++j) {
            Cochain want = k_star_impl(*st_, truncate_rep(m, j - 1));
            if (!cochain_is_zero(cochain_sub(coboundary(*m.domain, m.comp(j)), want)))
                return "component " + std::to_string(j) + " violates its lifting condition";
        }
        return "";
    }

    // ------------------------------------------------------------------
    // Suspension and cone transport

    static MapRep pull_to_cone(State& st, const MapRep& f) {
        if (f.domain != &st.susp.space)
            throw std::invalid_argument("collapse composition: not a suspension representation");
        MapRep out{&st.susp.cone_x.space, f.d, f.stage, {}};
        for (const Cochain& c : f.comps)
            out.comps.push_back(
                cochain_reduce(pullback_cochain(st.susp.cone_x.space, st.susp.collapse, c)));
        return out;
    }

    // mu(F) = -D^{-1}(k_star F).  With this sign, the coboundary of the cone
    // cochain (0, mu F) equals the obstruction cochain of F composed with
    // the collapse CX -> SX on the nose, which makes the middle term of the
    // nullhomotopy combination a valid representation by construction.
    static Cochain mu_impl(State& st, const MapRep& f) {
        if (f.domain != &st.susp.space)
            throw std::invalid_argument("mu: not a suspension representation");
        Cochain w = k_star_impl(st, f);
        return cochain_reduce(cochain_neg(suspension_unshift(st.susp, st.x, w)));
    }

    SemiEffectiveGroup rep_base(const SimplicialSet* space, int stage) const {
        State* sp = st_.get();
        SemiEffectiveGroup g;
        g.zero = make_zero(*sp, space, stage);
        g.add = [sp](const Elem& a, const Elem& b) {
            return Elem(star_add(*sp, std::any_cast<const MapRep&>(a),
                                 std::any_cast<const MapRep&>(b)));
        };
        g.neg = [sp](const Elem& a) {
            return Elem(star_neg(*sp, std::any_cast<const MapRep&>(a)));
        };
        return g;
    }

    // ------------------------------------------------------------------
    // The nullhomotopy construction

    // Build a valid representation on CX restricting to m on the base,
    // assuming the class of m is zero.  Recurses on the projection; the
    // correction at the top stage is found through the factor-group witness
    // and transported across the suspension by mu.
    static MapRep nullhoa(State& st, const MapRep& m) {
        const int dd = st.tower.d();
        const SimplicialSet* cx = &st.susp.cone_x.space;
        if (m.stage == dd) {
            std::optional<Cochain> e = solve_coboundary(st.x, m.comp(dd));
            if (!e)
                throw std::invalid_argument(
                    "nullhomotopy: the bottom class is nonzero; the map is not nullhomotopic");
            return MapRep{cx, dd, dd,
                          {cochain_reduce(cone_join(st.susp.cone_x, *e, m.comp(dd)))}};
        }
        const int s = m.stage;
        MapRep b0 = lift_rep(st, nullhoa(st, truncate_rep(m, s - 1)), "cone lift");
        Cochain z = cochain_reduce(
            cochain_sub(m.comp(s), cone_restrict(st.susp.cone_x, st.x, b0.comp(s))));

        const CokernelResult& factor = st.factor.at(s);
        std::optional<Elem> witness = factor.zero_witness(Elem(z));
        if (!witness)
            throw std::invalid_argument(
                "nullhomotopy: the class survives in the factor group; the map is not "
                "nullhomotopic");
        const MapRep& f = std::any_cast<const MapRep&>(*witness);
        Cochain ztil = mu_impl(st, f);

        // Middle term: the witness transported to the cone, topped by the
        // insertion of its connecting cocycle over the cone block.
        MapRep middle = pull_to_cone(st, f);
        middle.stage = s;
        middle.comps.push_back(cochain_reduce(
            cone_join(st.susp.cone_x, zero_cochain(st.x, s - 1, ztil.coeff), ztil)));

        // Last term: a cone nullhomotopy of the leftover cocycle.
        std::optional<Cochain> e = solve_coboundary(st.x, cochain_sub(z, ztil));
        if (!e)
            throw std::invalid_argument(
                "nullhomotopy: witness failed to match the leftover class");
        MapRep last = make_zero(st, cx, s);
        last.comp(s) =
            cochain_reduce(cone_join(st.susp.cone_x, *e, coboundary(st.x, *e)));

        return star_add(st, b0, star_add(st, middle, last));
    }

    // The factor-group representative of a representation whose projection
    // is nullhomotopic: c^s minus the restricted lift of a nullhomotopy of
    // the projection, a cocycle on X.
    static Cochain leftover_cocycle(State& st, const MapRep& m) {
        MapRep b0 = lift_rep(st, nullhoa(st, truncate_rep(m, m.stage - 1)), "cone lift");
        return cochain_reduce(cochain_sub(
            m.comp(m.stage), cone_restrict(st.susp.cone_x, st.x, b0.comp(m.stage))));
    }

    // ------------------------------------------------------------------
    // Group assembly

    // Generators of [SX, P_stage], recursively: insertions of cohomology
    // generators plus lifts of a generating set of the liftable sublattice
    // over the lower-stage generators.  Only generating sets are formed,
    // never the full suspension group.
    const std::vector<MapRep>& suspension_generators(int stage) {
        auto it = st_->susp_gens.find(stage);
        if (it != st_->susp_gens.end()) return it->second;
        State& st = *st_;
        const SimplicialSet* sxp = &st.susp.space;
        std::vector<MapRep> gens;
        if (stage > d()) {
            const std::vector<MapRep>& prev = suspension_generators(stage - 1);
            CohomologyResult above = cohomology(st.susp.space, stage + 1, st.tower.pi(stage));
            std::vector<IntVec> rows;
            rows.reserve(prev.size());
            for (const MapRep& g : prev)
                rows.push_back(above.group.express(Elem(k_star_impl(st, g))));
            IntMatrix z = IntMatrix::from_rows(rows, above.group.generators.size());
            SemiEffectiveGroup base = rep_base(sxp, stage - 1);
            std::vector<Elem> prev_elems(prev.begin(), prev.end());
            for (const IntVec& v : lattice_preimage_generators(z, orders_matrix(above.group))) {
                Elem combo = semi_combo(base, prev_elems, v);
                gens.push_back(lift_rep(st, std::any_cast<const MapRep&>(combo), "xi_lift"));
            }
        }
        CohomologyResult level = cohomology(st.susp.space, stage, st.tower.pi(stage));
        for (const Elem& gen : level.group.generators)
            gens.push_back(make_lambda(st, sxp, stage, std::any_cast<const Cochain&>(gen)));
        return st_->susp_gens.emplace(stage, std::move(gens)).first->second;
    }

    void build_stage(int stage) {
        if (st_->stage_groups.count(stage)) return;
        State* sp = st_.get();
        const SimplicialSet* xp = &sp->x;

        if (stage == d()) {
            CohomologyResult h = cohomology(sp->x, stage, sp->tower.pi(stage));
            FullyEffectiveGroup g;
            g.base = rep_base(xp, stage);
            g.orders = h.group.orders;
            for (const Elem& gen : h.group.generators)
                g.generators.push_back(
                    Elem(make_lambda(*sp, xp, stage, std::any_cast<const Cochain&>(gen))));
            auto hexpress = h.group.express;
            const int dd = stage;
            g.express = [hexpress, dd](const Elem& e) {
                const MapRep& m = std::any_cast<const MapRep&>(e);
                return hexpress(Elem(m.comp(dd)));
            };
            st_->stage_groups.emplace(stage, std::move(g));
            return;
        }

        build_stage(stage - 1);
        const FullyEffectiveGroup& below = st_->stage_groups.at(stage - 1);

        // Kernel of the obstruction homomorphism on the group below.
        CohomologyResult obstruction = cohomology(sp->x, stage + 1, sp->tower.pi(stage));
        FullyEffectiveGroup n_ker =
            kernel(below, obstruction.group, [sp](const Elem& e) {
                return Elem(k_star_impl(*sp, std::any_cast<const MapRep&>(e)));
            });

        // Factor group: cohomology at this level modulo the image of mu over
        // the listed suspension generators.
        const std::vector<MapRep>& sgens = suspension_generators(stage - 1);
        CohomologyResult level = cohomology(sp->x, stage, sp->tower.pi(stage));
        std::vector<Elem> sgen_elems(sgens.begin(), sgens.end());
        CokernelResult factor =
            cokernel(rep_base(&sp->susp.space, stage - 1), sgen_elems, level.group,
                     [sp](const Elem& e) {
                         return Elem(mu_impl(*sp, std::any_cast<const MapRep&>(e)));
                     });
        const CokernelResult& factor_ref =
            st_->factor.emplace(stage, std::move(factor)).first->second;

        // Short exact sequence assembly.
        const int s = stage;
        auto f = [sp, xp, s](const Elem& z) {
            return Elem(make_lambda(*sp, xp, s, std::any_cast<const Cochain&>(z)));
        };
        auto g = [s](const Elem& e) {
            return Elem(truncate_rep(std::any_cast<const MapRep&>(e), s - 1));
        };
        auto r = [sp](const Elem& e) {
            return Elem(leftover_cocycle(*sp, std::any_cast<const MapRep&>(e)));
        };
        auto xi = [sp](const Elem& e) {
            return Elem(lift_rep(*sp, std::any_cast<const MapRep&>(e), "xi_lift"));
        };
        st_->stage_groups.emplace(
            stage,
            assemble_short_exact(factor_ref.group, n_ker, f, g, r, xi, rep_base(xp, stage)));
    }
};

// ---------------------------------------------------------------------------
// Free-function surface

// The fully effective group [X, P_stage] together with the engine that owns
// its representative machinery.
struct StageClassGroup {
    std::shared_ptr<HomotopyEngine> engine;
    FullyEffectiveGroup group;
};

inline StageClassGroup compute_group(const SimplicialSet& x, const PostnikovData& data,
                                     int stage) {
    auto engine = std::make_shared<HomotopyEngine>(x, data);
    FullyEffectiveGroup g = engine->stage_group(stage);
    return {std::move(engine), std::move(g)};
}

inline StageClassGroup homotopy_classes(const SimplicialSet& x, const PostnikovData& data) {
    auto engine = std::make_shared<HomotopyEngine>(x, data);
    FullyEffectiveGroup g = engine->classes();
    return {std::move(engine), std::move(g)};
}

}  // namespace homcls
