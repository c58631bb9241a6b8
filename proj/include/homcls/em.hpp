#pragma once

// Simplicial Eilenberg-MacLane and path-fibration spaces, represented level by
// level: a simplex of degree n over the standard m-simplex is a normalized
// pi-valued n-cochain on Delta^m, stored sparsely on the (n+1)-element vertex
// subsets where it is nonzero.  K(pi,n)_m holds the cocycles, E(pi,n)_m all
// cochains; faces and degeneracies act by pulling back along the simplicial
// operators' vertex maps.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "homcls/cochain.hpp"
#include "homcls/simplicial.hpp"

namespace homcls {

// Vertex subsets of {0,...,m} as bitmasks (bit v = vertex v present).
using Mask = std::uint64_t;

inline Mask full_mask(int m) { return (Mask{1} << (m + 1)) - 1; }

inline int mask_size(Mask t) { return std::popcount(t); }

// All k-element subsets of {0,...,m}, in increasing numeric (hence
// colexicographic) order.
inline std::vector<Mask> subsets_of_size(int m, int k) {
    std::vector<Mask> out;
    if (k < 0 || k > m + 1) return out;
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    Mask t = full_mask(k - 1);
    Mask limit = Mask{1} << (m + 1);
    while (t < limit) {
        out.push_back(t);
        // Gosper's hack: next subset of the same size.
        Mask c = t & (~t + 1);
        Mask r = t + c;
        t = (((r ^ t) >> 2) / c) | r;
    }
    return out;
}

// The sorted vertex list of a mask.
inline std::vector<int> mask_vertices(Mask t) {
    std::vector<int> out;
    for (int v = 0; t != 0; ++v, t >>= 1)
        if (t & 1) out.push_back(v);
    return out;
}

inline Mask mask_from_vertices(const std::vector<int>& vs) {
    Mask t = 0;
    for (int v : vs) t |= Mask{1} << v;
    return t;
}

// A degree-n simplex over Delta^m: a normalized n-cochain on Delta^m with
// coefficients in the finitely generated abelian group described by coeff.
// vals maps an (n+1)-element vertex subset to a nonzero reduced coordinate
// vector; absent subsets carry the value zero.  Kept normalized by em_set /
// the arithmetic below, so operator== is semantic equality.
struct EmSimplex {
    int m = 0;
    int n = 0;
    Coeff coeff;
    std::map<Mask, IntVec> vals;

    friend bool operator==(const EmSimplex& a, const EmSimplex& b) {
        return a.m == b.m && a.n == b.n && a.coeff == b.coeff && a.vals == b.vals;
    }
};

inline EmSimplex em_zero(int m, int n, const Coeff& coeff) {
    return EmSimplex{m, n, coeff, {}};
}

inline bool em_is_zero(const EmSimplex& s) { return s.vals.empty(); }

inline IntVec em_value(const EmSimplex& s, Mask t) {
    auto it = s.vals.find(t);
    if (it != s.vals.end()) return it->second;
    return IntVec(s.coeff.width(), Int(0));
}

// Assign a value (reducing it; zero entries are erased to keep normal form).
inline void em_set(EmSimplex& s, Mask t, const IntVec& v) {
    if (mask_size(t) != s.n + 1)
        throw std::invalid_argument("em_set: subset size must be n+1");
    if ((t & ~full_mask(s.m)) != 0)
        throw std::invalid_argument("em_set: subset not contained in {0..m}");
    IntVec r = s.coeff.reduce(v);
    if (vec_is_zero(r))
        s.vals.erase(t);
    else
        s.vals[t] = std::move(r);
}

// The value on the full vertex set; the natural "label" when n == m.
inline IntVec em_top_value(const EmSimplex& s) { return em_value(s, full_mask(s.m)); }

inline EmSimplex em_add(const EmSimplex& a, const EmSimplex& b) {
    if (a.m != b.m || a.n != b.n || !(a.coeff == b.coeff))
        throw std::invalid_argument("em_add: mismatched simplices");
    EmSimplex out = a;
    for (const auto& [t, v] : b.vals) em_set(out, t, vec_add(em_value(out, t), v));
    return out;
}

inline EmSimplex em_neg(const EmSimplex& a) {
    EmSimplex out = em_zero(a.m, a.n, a.coeff);
    for (const auto& [t, v] : a.vals) em_set(out, t, vec_neg(v));
    return out;
}

inline EmSimplex em_sub(const EmSimplex& a, const EmSimplex& b) { return em_add(a, em_neg(b)); }

inline EmSimplex em_scale(const Int& c, const EmSimplex& a) {
    EmSimplex out = em_zero(a.m, a.n, a.coeff);
    for (const auto& [t, v] : a.vals) em_set(out, t, vec_scale(c, v));
    return out;
}

// Pull back along the order-preserving vertex map {0..m_new} -> {0..s.m}
// given by vertex_map (size m_new+1).  The result's value on a subset T is
// s's value on the image of T, or zero when the map collapses T.
inline EmSimplex em_pullback(const EmSimplex& s, const std::vector<int>& vertex_map, int m_new) {
    if (vertex_map.size() != static_cast<std::size_t>(m_new) + 1)
        throw std::invalid_argument("em_pullback: vertex map has wrong length");
    for (std::size_t i = 0; i < vertex_map.size(); ++i) {
        if (vertex_map[i] < 0 || vertex_map[i] > s.m)
            throw std::invalid_argument("em_pullback: vertex image out of range");
        if (i > 0 && vertex_map[i] < vertex_map[i - 1])
            throw std::invalid_argument("em_pullback: vertex map must be order-preserving");
    }
    EmSimplex out = em_zero(m_new, s.n, s.coeff);
    for (Mask t : subsets_of_size(m_new, s.n + 1)) {
        Mask image = 0;
        for (int v : mask_vertices(t)) image |= Mask{1} << vertex_map[static_cast<std::size_t>(v)];
        if (mask_size(image) != s.n + 1) continue;  // collapsed subsets pull back to zero
        auto it = s.vals.find(image);
        if (it != s.vals.end()) em_set(out, t, it->second);
    }
    return out;
}

// The i-th face: pull back along the injection {0..m-1} -> {0..m} skipping i.
inline EmSimplex em_face(const EmSimplex& s, int i) {
    if (s.m < 1) throw std::invalid_argument("em_face: no faces in dimension 0");
    if (i < 0 || i > s.m) throw std::invalid_argument("em_face: index out of range");
    std::vector<int> vm(static_cast<std::size_t>(s.m), 0);
    for (int v = 0; v < s.m; ++v) vm[static_cast<std::size_t>(v)] = v < i ? v : v + 1;
    return em_pullback(s, vm, s.m - 1);
}

// The i-th degeneracy: pull back along the surjection {0..m+1} -> {0..m}
// repeating i.
inline EmSimplex em_degeneracy(const EmSimplex& s, int i) {
    if (i < 0 || i > s.m) throw std::invalid_argument("em_degeneracy: index out of range");
    std::vector<int> vm(static_cast<std::size_t>(s.m) + 2, 0);
    for (int v = 0; v <= s.m + 1; ++v) vm[static_cast<std::size_t>(v)] = v <= i ? v : v - 1;
    return em_pullback(s, vm, s.m + 1);
}

// Apply a decreasing degeneracy word (outermost first), as in SimplexRef.
inline EmSimplex em_apply_word(const EmSimplex& s, const std::vector<int>& word) {
    EmSimplex out = s;
    for (auto it = word.rbegin(); it != word.rend(); ++it) out = em_degeneracy(out, *it);
    return out;
}

// The simplicial coboundary of the underlying cochain on Delta^m: a degree
// n+1 simplex whose value on an (n+2)-subset T is the alternating sum of s
// over the (n+1)-element subsets of T, signs by position of the omitted
// vertex within T.
inline EmSimplex delta_map(const EmSimplex& s) {
    EmSimplex out = em_zero(s.m, s.n + 1, s.coeff);
    if (s.n + 2 > s.m + 1) return out;
    for (Mask t : subsets_of_size(s.m, s.n + 2)) {
        IntVec acc(s.coeff.width(), Int(0));
        bool any = false;
        int pos = 0;
        for (int v : mask_vertices(t)) {
            auto it = s.vals.find(t & ~(Mask{1} << v));
            if (it != s.vals.end()) {
                acc = pos % 2 == 0 ? vec_add(acc, it->second) : vec_sub(acc, it->second);
                any = true;
            }
            ++pos;
        }
        if (any) em_set(out, t, acc);
    }
    return out;
}

inline bool em_is_cocycle(const EmSimplex& s) { return em_is_zero(delta_map(s)); }

// Deterministic serialization, usable as an ordered cache key.
inline std::string em_key(const EmSimplex& s) {
    std::ostringstream os;
    os << s.m << '|' << s.n << '|' << s.coeff.free_rank;
    for (const Int& q : s.coeff.torsion) os << '/' << q;
    for (const auto& [t, v] : s.vals) {
        os << '#' << t << ':';
        for (const Int& c : v) os << c << ',';
    }
    return os.str();
}

inline std::string em_to_string(const EmSimplex& s) {
    std::ostringstream os;
    os << "Em(m=" << s.m << ", n=" << s.n << "; ";
    bool first = true;
    for (const auto& [t, v] : s.vals) {
        if (!first) os << ", ";
        first = false;
        os << '{';
        const auto vs = mask_vertices(t);
        for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? " " : "") << vs[i];
        os << "}=" << vec_to_string(v);
    }
    if (first) os << "0";
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Restriction of simplices of a simplicial set to vertex subsets.

// Memoized computation of iterated faces of a nondegenerate simplex: the
// restriction of the i-th nondegenerate d-simplex to a vertex subset of
// {0..d}, obtained by deleting the missing vertices from largest to smallest.
class FaceCache {
public:
    explicit FaceCache(const SimplicialSet& x) : x_(&x) {}

    const SimplicialSet& space() const { return *x_; }

    SimplexRef face_by_mask(int d, std::size_t i, Mask sub) {
        if (sub == 0) throw std::invalid_argument("face_by_mask: empty subset");
        if ((sub & ~full_mask(d)) != 0)
            throw std::invalid_argument("face_by_mask: subset not contained in {0..d}");
        if (sub == full_mask(d)) return nondeg_ref(d, i);
        auto key = std::make_tuple(d, i, sub);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        // Remove the largest missing vertex last, so recurse on sub plus that
        // vertex and take one more face.
        Mask missing = full_mask(d) & ~sub;
        int j = 63 - std::countl_zero(missing);
        SimplexRef parent = face_by_mask(d, i, sub | (Mask{1} << j));
        int rank = std::popcount((sub | (Mask{1} << j)) & (full_mask(j) >> 1));
        SimplexRef res = x_->face(parent, rank);
        memo_.emplace(key, res);
        return res;
    }

    // Restriction of an arbitrary (possibly degenerate) reference of
    // dimension d to a subset of {0..d}: push the subset through the
    // degeneracy word's vertex surjection, restrict the base, and re-apply
    // the degeneracies the subset still sees.
    SimplexRef restrict(const SimplexRef& r, Mask sub) {
        std::vector<int> verts = mask_vertices(sub);
        // Peel the degeneracy word outermost-first: s_j repeats vertex j,
        // i.e. its vertex surjection identifies j and j+1.
        for (std::size_t li = 0; li < r.word.size(); ++li) {
            int j = r.word[li];
            std::vector<int> nv;
            bool seen_pair = false;
            for (std::size_t a = 0; a < verts.size(); ++a) {
                int v = verts[a];
                if (v <= j) {
                    if (v == j && a + 1 < verts.size() && verts[a + 1] == j + 1) seen_pair = true;
                    nv.push_back(v);
                } else if (v == j + 1) {
                    if (!seen_pair) nv.push_back(j);
                } else {
                    nv.push_back(v - 1);
                }
            }
            verts = std::move(nv);
            if (seen_pair) {
                // The subset contains {j, j+1}: the restriction is itself a
                // degeneracy at the position of j within the image subset.
                int pos = 0;
                while (verts[static_cast<std::size_t>(pos)] != j) ++pos;
                SimplexRef rest{std::vector<int>(r.word.begin() + static_cast<std::ptrdiff_t>(li) + 1,
                                                 r.word.end()),
                                r.base_dim, r.base};
                return apply_degeneracy(restrict(rest, mask_from_vertices(verts)), pos);
            }
        }
        return face_by_mask(r.base_dim, r.base, mask_from_vertices(verts));
    }

private:
    const SimplicialSet* x_;
    std::map<std::tuple<int, std::size_t, Mask>, SimplexRef> memo_;
};

// ---------------------------------------------------------------------------
// Simplicial maps into an Eilenberg-MacLane level and the cochain dictionary.

// A simplicial map from a simplicial set into degree-n simplices over the
// target coefficient group: images of the nondegenerate simplices per
// dimension (degenerate ones are determined by equivariance).
struct EmMap {
    int n = 0;
    Coeff coeff;
    std::vector<std::vector<EmSimplex>> images;
};

inline EmSimplex em_map_push(const EmMap& f, const SimplexRef& r) {
    const EmSimplex& base =
        f.images[static_cast<std::size_t>(r.base_dim)][r.base];
    return em_apply_word(base, r.word);
}

inline void validate_em_map(const SimplicialSet& x, const EmMap& f) {
    if (f.images.size() != x.names.size())
        throw std::invalid_argument("em map: image table shape mismatch");
    for (int d = 0; d <= x.top_dim(); ++d) {
        if (f.images[static_cast<std::size_t>(d)].size() != x.count(d))
            throw std::invalid_argument("em map: image table shape mismatch");
        for (std::size_t i = 0; i < x.count(d); ++i) {
            const EmSimplex& img = f.images[static_cast<std::size_t>(d)][i];
            if (img.m != d || img.n != f.n || !(img.coeff == f.coeff))
                throw std::invalid_argument("em map: image has wrong shape at " +
                                            x.name(d, i));
            if (d == 0) continue;
            for (int k = 0; k <= d; ++k) {
                if (em_face(img, k) != em_map_push(f, x.base_face(d, i, k)))
                    throw std::invalid_argument("em map: face " + std::to_string(k) +
                                                " of " + x.name(d, i) +
                                                " does not commute");
            }
        }
    }
}

// An n-cochain z on X determines the map sending a simplex to the pullback
// of z along its vertex restrictions; its value on the full vertex set of an
// n-simplex recovers z.
inline EmMap em_map_from_cochain(FaceCache& fc, const Cochain& z) {
    const SimplicialSet& x = fc.space();
    EmMap f;
    f.n = z.dim;
    f.coeff = z.coeff;
    f.images.resize(static_cast<std::size_t>(x.top_dim()) + 1);
    for (int d = 0; d <= x.top_dim(); ++d) {
        auto& level = f.images[static_cast<std::size_t>(d)];
        level.reserve(x.count(d));
        for (std::size_t i = 0; i < x.count(d); ++i) {
            EmSimplex img = em_zero(d, z.dim, z.coeff);
            for (Mask t : subsets_of_size(d, z.dim + 1))
                em_set(img, t, evaluate(z, fc.restrict(nondeg_ref(d, i), t)));
            level.push_back(std::move(img));
        }
    }
    return f;
}

inline Cochain cochain_from_em_map(const SimplicialSet& x, const EmMap& f) {
    Cochain z = zero_cochain(x, f.n, f.coeff);
    if (f.n >= 0 && f.n <= x.top_dim())
        for (std::size_t i = 0; i < x.count(f.n); ++i)
            z.values[i] = em_top_value(f.images[static_cast<std::size_t>(f.n)][i]);
    return cochain_reduce(z);
}

// ---------------------------------------------------------------------------
// For spaces built as simplicial complexes whose dimension-0 indices are the
// vertex ids (standard_simplex produces these), nondegenerate simplices
// correspond to vertex subsets, giving a dictionary between degree-n
// simplices over Delta^m and n-cochains on the complex.

inline Mask vertex_mask_of(FaceCache& fc, int d, std::size_t i) {
    Mask out = 0;
    for (int j = 0; j <= d; ++j)
        out |= Mask{1} << fc.face_by_mask(d, i, Mask{1} << j).base;
    return out;
}

inline Cochain em_to_standard_cochain(FaceCache& fc, const EmSimplex& s) {
    const SimplicialSet& x = fc.space();
    Cochain z = zero_cochain(x, s.n, s.coeff);
    if (s.n >= 0 && s.n <= x.top_dim())
        for (std::size_t i = 0; i < x.count(s.n); ++i)
            z.values[i] = em_value(s, vertex_mask_of(fc, s.n, i));
    return cochain_reduce(z);
}

inline EmSimplex em_from_standard_cochain(FaceCache& fc, const Cochain& z) {
    const SimplicialSet& x = fc.space();
    EmSimplex s = em_zero(x.top_dim() >= 0 ? static_cast<int>(x.count(0)) - 1 : 0, z.dim,
                          z.coeff);
    if (z.dim >= 0 && z.dim <= x.top_dim())
        for (std::size_t i = 0; i < x.count(z.dim); ++i)
            em_set(s, vertex_mask_of(fc, z.dim, i), z.values[i]);
    return s;
}

// Whether two cocycles classify homotopic maps into K(coeff, n): true exactly
// when their difference is a coboundary, in which case a certifying cochain e
// with delta(e) = z1 - z2 (up to torsion) is returned.
struct EmHomotopyResult {
    bool homotopic = false;
    std::optional<Cochain> witness;
};

inline EmHomotopyResult em_homotopic(const SimplicialSet& x, const Cochain& z1,
                                     const Cochain& z2) {
    if (!is_cocycle(x, z1) || !is_cocycle(x, z2))
        throw std::invalid_argument("em_homotopic: inputs must be cocycles");
    EmHomotopyResult res;
    res.witness = solve_coboundary(x, cochain_sub(z1, z2));
    res.homotopic = res.witness.has_value();
    return res;
}

}  // namespace homcls
