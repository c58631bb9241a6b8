#pragma once

// Locally effective Postnikov systems: a tower of stages P_d, ..., P_n for a
// (d-1)-connected target, each stage a simplicial set whose m-simplices are
// tuples of Eilenberg-MacLane simplices cut out by k-invariants, carrying an
// H-group structure whose addition is corrected level by level through the
// Eilenberg-Zilber chain homotopy.

#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homcls/abelian.hpp"
#include "homcls/chains.hpp"
#include "homcls/cochain.hpp"
#include "homcls/em.hpp"
#include "homcls/simplicial.hpp"

namespace homcls {

// An m-simplex of the stage-i space: one Eilenberg-MacLane simplex per level
// d..i, comps[j - d] of degree j over Delta^m.  The bottom component is a
// cocycle and consecutive components are linked by the k-invariants; those
// conditions are checked by PostnikovTower::is_member, not enforced here.
struct StageSimplex {
    int d = 0;
    int stage = 0;
    int m = 0;
    std::vector<EmSimplex> comps;

    friend bool operator==(const StageSimplex& a, const StageSimplex& b) {
        return a.d == b.d && a.stage == b.stage && a.m == b.m && a.comps == b.comps;
    }
};

inline std::string stage_key(const StageSimplex& s) {
    std::string out = std::to_string(s.d) + ";" + std::to_string(s.stage) + ";" +
                      std::to_string(s.m);
    for (const EmSimplex& c : s.comps) {
        out += "!";
        out += em_key(c);
    }
    return out;
}

// Description of a tower: connectivity bound, stages, coefficient groups,
// the k-invariant oracle (for stages d..top_stage-1; the value on a stage-i
// simplex over Delta^m is a full degree-(i+2) cochain simplex over Delta^m
// with pi_{i+1}-coefficients), and optionally a finite simplicial model of
// the target together with its stagewise images.
struct PostnikovData {
    int d = 2;
    int top_stage = 2;
    std::vector<Coeff> pi;  // pi[i - d] = coefficients in dimension i
    std::function<EmSimplex(int, const StageSimplex&)> k_oracle;
    // Whether [X, P_i] is independent of i for i >= top_stage (true when the
    // target has no homotopy above top_stage, as for Eilenberg-MacLane
    // targets).
    bool complete_above_top = false;
    std::optional<SimplicialSet> model;
    // phi(stage, dim, index): the stage-simplex image of the model's
    // nondegenerate simplices, for stage in d..top_stage.
    std::function<StageSimplex(int, int, std::size_t)> phi;
    std::string target_name;
};

inline std::size_t cache_byte_budget() {
    if (const char* env = std::getenv("HOMCLS_CACHE_BYTES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env) return static_cast<std::size_t>(v);
    }
    return std::size_t{256} * 1024 * 1024;
}

class PostnikovTower {
public:
    explicit PostnikovTower(PostnikovData data)
        : data_(std::move(data)), cache_(std::make_shared<Cache>()) {
        if (data_.d < 2) throw std::invalid_argument("postnikov tower: d must be >= 2");
        if (data_.top_stage < data_.d || data_.top_stage > 2 * data_.d - 2)
            throw std::invalid_argument(
                "postnikov tower: top stage must lie between d and 2d-2");
        if (data_.pi.size() != static_cast<std::size_t>(data_.top_stage - data_.d) + 1)
            throw std::invalid_argument("postnikov tower: one coefficient group per stage");
        cache_->budget = cache_byte_budget();
    }

    int d() const { return data_.d; }
    int top_stage() const { return data_.top_stage; }
    bool complete_above_top() const { return data_.complete_above_top; }
    const std::string& target_name() const { return data_.target_name; }
    const std::optional<SimplicialSet>& model() const { return data_.model; }
    bool has_model_map() const { return data_.model.has_value() && data_.phi != nullptr; }

    const Coeff& pi(int level) const {
        if (level < data_.d || level > data_.top_stage)
            throw std::invalid_argument("postnikov tower: no homotopy stored in dimension " +
                                        std::to_string(level));
        return data_.pi[static_cast<std::size_t>(level - data_.d)];
    }

    StageSimplex phi_image(int stage, int dim, std::size_t index) const {
        if (!has_model_map())
            throw std::domain_error("postnikov tower: target has no stored finite model");
        return data_.phi(stage, dim, index);
    }

    StageSimplex zero(int stage, int m) const {
        check_stage(stage);
        StageSimplex s;
        s.d = data_.d;
        s.stage = stage;
        s.m = m;
        for (int j = data_.d; j <= stage; ++j) s.comps.push_back(em_zero(m, j, pi(j)));
        return s;
    }

    bool is_zero(const StageSimplex& s) const {
        for (const EmSimplex& c : s.comps)
            if (!em_is_zero(c)) return false;
        return true;
    }

    void check_shape(const StageSimplex& s) const {
        check_stage(s.stage);
        if (s.d != data_.d || s.comps.size() != static_cast<std::size_t>(s.stage - s.d) + 1)
            throw std::invalid_argument("stage simplex: wrong component count");
        for (int j = s.d; j <= s.stage; ++j) {
            const EmSimplex& c = s.comps[static_cast<std::size_t>(j - s.d)];
            if (c.m != s.m || c.n != j || !(c.coeff == pi(j)))
                throw std::invalid_argument("stage simplex: component shape mismatch");
        }
    }

    StageSimplex face(const StageSimplex& s, int i) const {
        StageSimplex out = s;
        out.m = s.m - 1;
        for (EmSimplex& c : out.comps) c = em_face(c, i);
        return out;
    }

    StageSimplex degeneracy(const StageSimplex& s, int i) const {
        StageSimplex out = s;
        out.m = s.m + 1;
        for (EmSimplex& c : out.comps) c = em_degeneracy(c, i);
        return out;
    }

    StageSimplex pullback(const StageSimplex& s, const std::vector<int>& vertex_map,
                          int m_new) const {
        StageSimplex out = s;
        out.m = m_new;
        for (EmSimplex& c : out.comps) c = em_pullback(c, vertex_map, m_new);
        return out;
    }

    // Restriction to a vertex subset of {0..m}.
    StageSimplex restrict(const StageSimplex& s, Mask sub) const {
        return pullback(s, mask_vertices(sub), mask_size(sub) - 1);
    }

    StageSimplex project(const StageSimplex& s) const {
        if (s.stage <= data_.d)
            throw std::invalid_argument("stage_project: already at the bottom stage");
        StageSimplex out = s;
        out.stage = s.stage - 1;
        out.comps.pop_back();
        return out;
    }

    StageSimplex truncate(const StageSimplex& s, int stage) const {
        if (stage < data_.d || stage > s.stage)
            throw std::invalid_argument("stage truncation out of range");
        StageSimplex out = s;
        out.stage = stage;
        out.comps.resize(static_cast<std::size_t>(stage - s.d) + 1);
        return out;
    }

    // Insert a degree-`stage` cocycle simplex as a stage simplex whose lower
    // components vanish.
    StageSimplex lambda_insert(int stage, const EmSimplex& z) const {
        check_stage(stage);
        if (z.n != stage || !(z.coeff == pi(stage)))
            throw std::invalid_argument("lambda_insert: wrong degree or coefficients");
        if (!em_is_cocycle(z))
            throw std::invalid_argument("lambda_insert: input must be a cocycle");
        StageSimplex out = zero(stage, z.m);
        out.comps.back() = z;
        return out;
    }

    // The k-invariant of a stage-i simplex, i < top_stage: a degree-(i+2)
    // simplex over the same Delta^m with pi_{i+1} coefficients.
    EmSimplex k_value(int i, const StageSimplex& s) const {
        if (i != s.stage) throw std::invalid_argument("k_value: stage mismatch");
        if (i < data_.d || i >= data_.top_stage)
            throw std::invalid_argument("k_value: no k-invariant at stage " + std::to_string(i));
        if (!data_.k_oracle) throw std::domain_error("k_value: tower has no k-invariants");
        return data_.k_oracle(i, s);
    }

    // Membership in the stage space: bottom component a cocycle, and each
    // k-invariant of a truncation equal to the coboundary of the next
    // component.
    bool is_member(const StageSimplex& s) const {
        check_shape(s);
        if (!em_is_cocycle(s.comps[0])) return false;
        for (int j = s.d; j < s.stage; ++j) {
            EmSimplex expect = k_value(j, truncate(s, j));
            if (!(delta_map(s.comps[static_cast<std::size_t>(j - s.d)+1]) == expect)) return false;
        }
        return true;
    }

    void require_member(const StageSimplex& s, const char* who) const {
        if (!is_member(s))
            throw std::invalid_argument(std::string(who) + ": stage simplex violates the "
                                        "lifting conditions");
    }

    // The nonadditivity of the k-invariant on a pair of stage-i simplices:
    // k_i(a + b) - k_i(a) - k_i(b), a degree-(i+2) cocycle simplex.  Zero
    // whenever either argument is the zero simplex.
    EmSimplex nonadditivity(int i, const StageSimplex& a, const StageSimplex& b) const {
        if (is_zero(a) || is_zero(b))
            return em_zero(a.m, i + 2, pi(i + 1));
        std::string key = std::to_string(i) + "|" + stage_key(a) + "|" + stage_key(b);
        if (const EmSimplex* hit = cache_lookup(cache_->nonadd, key)) return *hit;
        EmSimplex val = em_sub(em_sub(k_value(i, add(a, b)), k_value(i, a)), k_value(i, b));
        cache_store(cache_->nonadd, key, val);
        return val;
    }

    // The correction term A_i(a, b): a degree-(i+1) simplex over Delta^m
    // whose value on an (i+2)-element vertex subset F is the coefficient-
    // weighted sum, over the chain-homotopy expansion of the pair restricted
    // to F, of the top values of the nonadditivity of each expansion pair.
    EmSimplex correction(int i, const StageSimplex& a, const StageSimplex& b) const {
        if (a.stage != i || b.stage != i || a.m != b.m)
            throw std::invalid_argument("correction: mismatched stage simplices");
        const Coeff& target = pi(i + 1);
        if (is_zero(a) || is_zero(b)) return em_zero(a.m, i + 1, target);
        std::string key = std::to_string(i) + "|" + stage_key(a) + "|" + stage_key(b);
        if (const EmSimplex* hit = cache_lookup(cache_->correction, key)) return *hit;

        EmSimplex out = em_zero(a.m, i + 1, target);
        StageOps ops{this};
        for (Mask f : subsets_of_size(a.m, i + 2)) {
            StageSimplex ra = restrict(a, f);
            StageSimplex rb = restrict(b, f);
            if (is_zero(ra) || is_zero(rb)) continue;
            PairSum<StageSimplex> terms = homotopy_operator(ops, ra, rb, i + 1);
            IntVec acc(target.width(), Int(0));
            for (const PairTerm<StageSimplex>& t : combine_pairs(ops, terms, i + 2)) {
                EmSimplex na = nonadditivity(i, t.first, t.second);
                acc = vec_add(acc, vec_scale(t.coef, em_top_value(na)));
            }
            em_set(out, f, acc);
        }
        cache_store(cache_->correction, key, out);
        return out;
    }

    // H-group addition: componentwise sums corrected level by level, so that
    // the result satisfies the lifting conditions whenever the inputs do.
    StageSimplex add(const StageSimplex& a, const StageSimplex& b) const {
        if (a.stage != b.stage || a.m != b.m || a.d != b.d)
            throw std::invalid_argument("stage add: mismatched stage simplices");
        StageSimplex out = a;
        out.comps[0] = em_add(a.comps[0], b.comps[0]);
        for (int j = a.d; j < a.stage; ++j) {
            std::size_t idx = static_cast<std::size_t>(j - a.d) + 1;
            EmSimplex corr = correction(j, truncate(a, j), truncate(b, j));
            out.comps[idx] = em_add(em_add(a.comps[idx], b.comps[idx]), corr);
        }
        return out;
    }

    // H-group inverse: the strict two-sided inverse for add.
    StageSimplex neg(const StageSimplex& a) const {
        StageSimplex out = a;
        out.comps[0] = em_neg(a.comps[0]);
        for (int j = a.d; j < a.stage; ++j) {
            std::size_t idx = static_cast<std::size_t>(j - a.d) + 1;
            EmSimplex corr = correction(j, truncate(a, j), truncate(out, j));
            out.comps[idx] = em_neg(em_add(a.comps[idx], corr));
        }
        return out;
    }

    StageSimplex sub(const StageSimplex& a, const StageSimplex& b) const {
        return add(a, neg(b));
    }

private:
    struct Cache {
        std::map<std::string, EmSimplex> correction;
        std::map<std::string, EmSimplex> nonadd;
        std::size_t bytes = 0;
        std::size_t budget = 0;
    };

    struct StageOps {
        const PostnikovTower* tower;
        StageSimplex face(const StageSimplex& s, int i) const { return tower->face(s, i); }
        StageSimplex degeneracy(const StageSimplex& s, int i) const {
            return tower->degeneracy(s, i);
        }
        bool equal(const StageSimplex& a, const StageSimplex& b) const { return a == b; }
        std::string key(const StageSimplex& s) const { return stage_key(s); }
    };

    void check_stage(int stage) const {
        if (stage < data_.d || stage > data_.top_stage)
            throw std::invalid_argument("postnikov tower: stage " + std::to_string(stage) +
                                        " out of range");
    }

    static std::size_t em_bytes(const EmSimplex& s) {
        std::size_t b = 64;
        for (const auto& [t, v] : s.vals) {
            (void)t;
            b += 16 + 24 * v.size();
        }
        return b;
    }

    const EmSimplex* cache_lookup(std::map<std::string, EmSimplex>& store,
                                  const std::string& key) const {
        auto it = store.find(key);
        return it == store.end() ? nullptr : &it->second;
    }

    void cache_store(std::map<std::string, EmSimplex>& store, const std::string& key,
                     const EmSimplex& val) const {
        std::size_t cost = key.size() + em_bytes(val);
        if (cache_->bytes + cost > cache_->budget) {
            // Budget reached: drop everything rather than grow without bound.
            cache_->correction.clear();
            cache_->nonadd.clear();
            cache_->bytes = 0;
            if (cost > cache_->budget) return;  // single entry over budget: skip
        }
        store.emplace(key, val);
        cache_->bytes += cost;
    }

    PostnikovData data_;
    std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Built-in towers.

// The k-invariant of the 3-sphere's tower: the mod-2 cup-1 self-pairing of
// the degree-3 component.  On a 6-element vertex subset {w0 < ... < w5} the
// value is
//     c(w0 w3 w4 w5) c(w0 w1 w2 w3)
//   + c(w0 w1 w4 w5) c(w1 w2 w3 w4)
//   + c(w0 w1 w2 w5) c(w2 w3 w4 w5)   (mod 2)
// where c is the degree-3 component.
inline EmSimplex sphere3_k_invariant(const StageSimplex& s) {
    static const int families[3][2][4] = {
        {{0, 3, 4, 5}, {0, 1, 2, 3}},
        {{0, 1, 4, 5}, {1, 2, 3, 4}},
        {{0, 1, 2, 5}, {2, 3, 4, 5}},
    };
    const EmSimplex& c = s.comps[0];
    EmSimplex out = em_zero(s.m, 5, Coeff{0, {Int(2)}});
    for (Mask f : subsets_of_size(s.m, 6)) {
        std::vector<int> w = mask_vertices(f);
        Int acc = 0;
        for (const auto& fam : families) {
            Mask m1 = 0, m2 = 0;
            for (int a : fam[0]) m1 |= Mask{1} << w[static_cast<std::size_t>(a)];
            for (int a : fam[1]) m2 |= Mask{1} << w[static_cast<std::size_t>(a)];
            acc += em_value(c, m1)[0] * em_value(c, m2)[0];
        }
        em_set(out, f, IntVec{acc});
    }
    return out;
}

// The tower of the 3-sphere through stage 4: pi_3 = Z, pi_4 = Z/2, one
// k-invariant, and the one-cell sphere as the stored finite model.
inline PostnikovData sphere3_data() {
    PostnikovData data;
    data.d = 3;
    data.top_stage = 4;
    data.pi = {Coeff{1, {}}, Coeff{0, {Int(2)}}};
    data.k_oracle = [](int i, const StageSimplex& s) {
        if (i != 3) throw std::invalid_argument("sphere:3 tower: no k-invariant at stage " +
                                                std::to_string(i));
        return sphere3_k_invariant(s);
    };
    data.complete_above_top = false;
    data.model = minimal_sphere(3);
    data.phi = [](int stage, int dim, std::size_t index) {
        if (stage != 3 && stage != 4)
            throw std::invalid_argument("sphere:3 model map: stage out of range");
        if (!((dim == 0 || dim == 3) && index == 0))
            throw std::invalid_argument("sphere:3 model map: unknown simplex");
        StageSimplex out;
        out.d = 3;
        out.stage = stage;
        out.m = dim;
        EmSimplex bottom = em_zero(dim, 3, Coeff{1, {}});
        if (dim == 3) em_set(bottom, full_mask(3), IntVec{Int(1)});
        out.comps.push_back(bottom);
        if (stage == 4) out.comps.push_back(em_zero(dim, 4, Coeff{0, {Int(2)}}));
        return out;
    };
    data.target_name = "sphere:3";
    return data;
}

// The one-stage tower of an Eilenberg-MacLane target K(coeff, n).
inline PostnikovData em_target_data(const Coeff& coeff, int n) {
    if (n < 2) throw std::invalid_argument("em target: n must be >= 2");
    PostnikovData data;
    data.d = n;
    data.top_stage = n;
    data.pi = {coeff};
    data.k_oracle = nullptr;
    data.complete_above_top = true;
    data.model = std::nullopt;
    data.phi = nullptr;
    data.target_name = "em:" + format_group(coeff.free_rank, coeff.torsion) + ":" +
                       std::to_string(n);
    return data;
}

}  // namespace homcls
