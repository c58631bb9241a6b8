#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "homcls/ints.hpp"

namespace homcls {

// Every simplex of a simplicial set is uniquely a (possibly empty) chain of
// degeneracy operators applied to a nondegenerate simplex.  `word` holds the
// degeneracy indices in normal form: strictly decreasing, outermost first, so
// the ref denotes s_{word[0]} s_{word[1]} ... s_{word.back()} (base).
struct SimplexRef {
    std::vector<int> word;
    int base_dim = 0;
    std::size_t base = 0;

    int dim() const { return base_dim + static_cast<int>(word.size()); }
    bool is_degenerate() const { return !word.empty(); }
    friend bool operator==(const SimplexRef&, const SimplexRef&) = default;
    friend auto operator<=>(const SimplexRef&, const SimplexRef&) = default;
};

inline SimplexRef nondeg_ref(int d, std::size_t i) { return SimplexRef{{}, d, i}; }

inline std::string ref_to_string(const SimplexRef& r) {
    std::string s;
    for (int j : r.word) s += "s" + std::to_string(j) + " ";
    s += "(" + std::to_string(r.base_dim) + "#" + std::to_string(r.base) + ")";
    return s;
}

// s_i applied to x, renormalized with s_i s_j = s_{j+1} s_i for i <= j.
inline SimplexRef apply_degeneracy(SimplexRef x, int i) {
    if (i < 0 || i > x.dim())
        throw std::invalid_argument("apply_degeneracy: index out of range");
    std::vector<int> out;
    out.reserve(x.word.size() + 1);
    int cur = i;
    bool placed = false;
    for (std::size_t p = 0; p < x.word.size(); ++p) {
        int j = x.word[p];
        if (!placed && cur <= j) {
            out.push_back(j + 1);
        } else {
            if (!placed) {
                out.push_back(cur);
                placed = true;
            }
            out.push_back(j);
        }
    }
    if (!placed) out.push_back(cur);
    x.word = std::move(out);
    return x;
}

// The m-fold degenerate simplex over a vertex: s_{m-1} ... s_1 s_0 (vertex).
inline SimplexRef degenerate_point(int m, std::size_t vertex) {
    SimplexRef r{{}, 0, vertex};
    for (int j = m - 1; j >= 0; --j) r.word.push_back(j);
    return r;
}

// A simplicial set given by its nondegenerate simplices and their faces.
// faces[d][i][k] is the k-th face of the i-th nondegenerate d-simplex, as a
// (possibly degenerate) reference; dimension 0 has no face table.
class SimplicialSet {
public:
    std::vector<std::vector<std::string>> names;
    std::vector<std::vector<std::vector<SimplexRef>>> faces;
    std::size_t basepoint = 0;

    int top_dim() const { return static_cast<int>(names.size()) - 1; }

    std::size_t count(int d) const {
        if (d < 0 || d > top_dim()) return 0;
        return names[static_cast<std::size_t>(d)].size();
    }

    const std::string& name(int d, std::size_t i) const {
        return names[static_cast<std::size_t>(d)][i];
    }

    const SimplexRef& base_face(int d, std::size_t i, int k) const {
        return faces[static_cast<std::size_t>(d)][i][static_cast<std::size_t>(k)];
    }

    // The k-th face of an arbitrary simplex, by pushing the face operator
    // through the degeneracy word:
    //   d_k s_j = s_{j-1} d_k     (k < j)
    //   d_k s_j = id              (k = j or k = j+1)
    //   d_k s_j = s_j d_{k-1}     (k > j+1)
    SimplexRef face(const SimplexRef& x, int k) const {
        if (k < 0 || k > x.dim() || x.dim() == 0)
            throw std::invalid_argument("face: index out of range");
        std::vector<int> outer;
        int cur = k;
        for (std::size_t p = 0; p < x.word.size(); ++p) {
            int j = x.word[p];
            if (cur < j) {
                outer.push_back(j - 1);
            } else if (cur == j || cur == j + 1) {
                // Face absorbed; the rest of the word applies unchanged.
                SimplexRef r{{x.word.begin() + static_cast<std::ptrdiff_t>(p) + 1, x.word.end()},
                             x.base_dim, x.base};
                for (auto it = outer.rbegin(); it != outer.rend(); ++it)
                    r = apply_degeneracy(r, *it);
                return r;
            } else {
                outer.push_back(j);
                --cur;
            }
        }
        SimplexRef r = base_face(x.base_dim, x.base, cur);
        for (auto it = outer.rbegin(); it != outer.rend(); ++it) r = apply_degeneracy(r, *it);
        return r;
    }

    // x lies in the image of s_i  iff  s_i(d_{i+1} x) = x.
    bool in_degeneracy_image(const SimplexRef& x, int i) const {
        if (x.dim() == 0) return false;
        return apply_degeneracy(face(x, i + 1), i) == x;
    }
};

// Structural checks: table shapes, normal-form words, and the simplicial
// identity d_i d_j = d_{j-1} d_i (i < j) on every nondegenerate simplex.
inline void validate_simplicial_set(const SimplicialSet& s) {
    if (s.names.empty() || s.names[0].empty())
        throw std::invalid_argument("simplicial set: needs at least one vertex");
    if (s.basepoint >= s.names[0].size())
        throw std::invalid_argument("simplicial set: basepoint out of range");
    if (s.faces.size() != s.names.size())
        throw std::invalid_argument("simplicial set: face table shape mismatch");
    for (int d = 0; d <= s.top_dim(); ++d) {
        const auto& fd = s.faces[static_cast<std::size_t>(d)];
        if (d == 0) {
            if (!fd.empty() && fd.size() != s.count(0))
                throw std::invalid_argument("simplicial set: vertex face table must be empty");
            for (const auto& f : fd)
                if (!f.empty()) throw std::invalid_argument("simplicial set: vertices have no faces");
            continue;
        }
        if (fd.size() != s.count(d))
            throw std::invalid_argument("simplicial set: face table shape mismatch");
        for (std::size_t i = 0; i < fd.size(); ++i) {
            if (fd[i].size() != static_cast<std::size_t>(d) + 1)
                throw std::invalid_argument("simplicial set: a d-simplex needs d+1 faces");
            for (const SimplexRef& f : fd[i]) {
                if (f.dim() != d - 1)
                    throw std::invalid_argument("simplicial set: face dimension mismatch");
                if (f.base_dim < 0 || f.base >= s.count(f.base_dim))
                    throw std::invalid_argument("simplicial set: face reference out of range");
                int prev = f.base_dim + static_cast<int>(f.word.size());
                for (int w : f.word) {
                    // Validity of s_w at its application depth, plus strict decrease.
                    if (w < 0 || w >= prev)
                        throw std::invalid_argument("simplicial set: malformed degeneracy word");
                    prev = w;
                }
            }
        }
    }
    for (int d = 2; d <= s.top_dim(); ++d)
        for (std::size_t i = 0; i < s.count(d); ++i) {
            SimplexRef x = nondeg_ref(d, i);
            for (int j = 1; j <= d; ++j)
                for (int k = 0; k < j; ++k)
                    if (s.face(s.face(x, j), k) != s.face(s.face(x, k), j - 1))
                        throw std::invalid_argument(
                            "simplicial set: simplicial identity fails at " + s.name(d, i));
        }
}

// ---------------------------------------------------------------------------
// Simplicial complexes

// Build a simplicial set from a complex: vertices 0..n-1 (every vertex is
// included as a 0-simplex) and the downward closure of the given facets.
// Nondegenerate simplices are the vertex subsets, ordered lexicographically
// inside each dimension, named by comma-joined vertex names.
inline SimplicialSet simplicial_complex(const std::vector<std::string>& vertex_names,
                                        const std::vector<std::vector<std::size_t>>& facets) {
    const std::size_t nv = vertex_names.size();
    if (nv == 0) throw std::invalid_argument("simplicial complex: no vertices");
    std::vector<std::set<std::vector<std::size_t>>> subsets(1);
    for (std::size_t v = 0; v < nv; ++v) subsets[0].insert({v});
    for (const auto& facet_in : facets) {
        std::vector<std::size_t> facet = facet_in;
        std::sort(facet.begin(), facet.end());
        if (std::adjacent_find(facet.begin(), facet.end()) != facet.end())
            throw std::invalid_argument("simplicial complex: facet repeats a vertex");
        if (facet.empty() || facet.back() >= nv)
            throw std::invalid_argument("simplicial complex: facet vertex out of range");
        const std::size_t m = facet.size();
        if (subsets.size() < m) subsets.resize(m);
        // All nonempty subsets, by bitmask (facets are small).
        for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
            std::vector<std::size_t> sub;
            for (std::size_t b = 0; b < m; ++b)
                if (mask & (std::size_t(1) << b)) sub.push_back(facet[b]);
            subsets[sub.size() - 1].insert(sub);
        }
    }
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(subsets.size());
    SimplicialSet s;
    s.names.resize(subsets.size());
    s.faces.resize(subsets.size());
    for (std::size_t d = 0; d < subsets.size(); ++d) {
        for (const auto& sub : subsets[d]) {
            index[d].emplace(sub, s.names[d].size());
            std::string nm;
            for (std::size_t k = 0; k < sub.size(); ++k)
                nm += (k ? "," : "") + vertex_names[sub[k]];
            s.names[d].push_back(nm);
        }
        if (d == 0) continue;
        for (const auto& sub : subsets[d]) {
            std::vector<SimplexRef> fs;
            for (std::size_t k = 0; k <= d; ++k) {
                std::vector<std::size_t> f = sub;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(k));
                fs.push_back(nondeg_ref(static_cast<int>(d) - 1, index[d - 1].at(f)));
            }
            s.faces[d].push_back(std::move(fs));
        }
    }
    validate_simplicial_set(s);
    return s;
}

inline std::vector<std::string> numbered_vertices(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(std::to_string(i));
    return v;
}

// The standard n-simplex as a complex on vertices 0..n.
inline SimplicialSet standard_simplex(int n) {
    std::vector<std::size_t> all;
    for (int i = 0; i <= n; ++i) all.push_back(static_cast<std::size_t>(i));
    return simplicial_complex(numbered_vertices(static_cast<std::size_t>(n) + 1), {all});
}

// The boundary of the standard n-simplex (a model of the (n-1)-sphere).
inline SimplicialSet boundary_simplex(int n) {
    if (n < 1) throw std::invalid_argument("boundary_simplex: n must be >= 1");
    std::vector<std::vector<std::size_t>> facets;
    for (int omit = 0; omit <= n; ++omit) {
        std::vector<std::size_t> f;
        for (int i = 0; i <= n; ++i)
            if (i != omit) f.push_back(static_cast<std::size_t>(i));
        facets.push_back(std::move(f));
    }
    return simplicial_complex(numbered_vertices(static_cast<std::size_t>(n) + 1), facets);
}

// The n-sphere with one vertex and one nondegenerate n-simplex, all of whose
// faces collapse to the vertex.
inline SimplicialSet minimal_sphere(int n) {
    if (n < 1) throw std::invalid_argument("minimal_sphere: n must be >= 1");
    SimplicialSet s;
    s.names.resize(static_cast<std::size_t>(n) + 1);
    s.faces.resize(static_cast<std::size_t>(n) + 1);
    s.names[0].push_back("pt");
    s.names[static_cast<std::size_t>(n)].push_back("cell");
    s.faces[static_cast<std::size_t>(n)].push_back(
        std::vector<SimplexRef>(static_cast<std::size_t>(n) + 1, degenerate_point(n - 1, 0)));
    validate_simplicial_set(s);
    return s;
}

// Locate a nondegenerate simplex by name.
inline std::optional<std::size_t> find_simplex(const SimplicialSet& s, int d,
                                               const std::string& name) {
    for (std::size_t i = 0; i < s.count(d); ++i)
        if (s.name(d, i) == name) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Simplicial maps

// A map is determined by the images of the nondegenerate simplices;
// images[d][i] is a (possibly degenerate) simplex of the target.
struct SimplicialMap {
    std::vector<std::vector<SimplexRef>> images;
};

inline SimplexRef map_push(const SimplicialMap& f, const SimplexRef& x) {
    SimplexRef r = f.images[static_cast<std::size_t>(x.base_dim)][x.base];
    for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) r = apply_degeneracy(r, *it);
    return r;
}

inline void validate_simplicial_map(const SimplicialSet& x, const SimplicialSet& y,
                                    const SimplicialMap& f) {
    if (f.images.size() != x.names.size())
        throw std::invalid_argument("simplicial map: image table shape mismatch");
    for (int d = 0; d <= x.top_dim(); ++d) {
        if (f.images[static_cast<std::size_t>(d)].size() != x.count(d))
            throw std::invalid_argument("simplicial map: image table shape mismatch");
        for (std::size_t i = 0; i < x.count(d); ++i) {
            const SimplexRef& img = f.images[static_cast<std::size_t>(d)][i];
            if (img.dim() != d)
                throw std::invalid_argument("simplicial map: image dimension mismatch at " +
                                            x.name(d, i));
            if (img.base_dim < 0 || img.base >= y.count(img.base_dim))
                throw std::invalid_argument("simplicial map: image out of range at " + x.name(d, i));
            for (int k = 0; k <= d && d > 0; ++k)
                if (map_push(f, x.face(nondeg_ref(d, i), k)) != y.face(img, k))
                    throw std::invalid_argument(
                        "simplicial map: does not commute with face " + std::to_string(k) +
                        " at " + x.name(d, i));
        }
    }
}

inline SimplicialMap identity_map(const SimplicialSet& x) {
    SimplicialMap f;
    f.images.resize(x.names.size());
    for (int d = 0; d <= x.top_dim(); ++d)
        for (std::size_t i = 0; i < x.count(d); ++i)
            f.images[static_cast<std::size_t>(d)].push_back(nondeg_ref(d, i));
    return f;
}

inline SimplicialMap constant_map(const SimplicialSet& x, std::size_t target_vertex) {
    SimplicialMap f;
    f.images.resize(x.names.size());
    for (int d = 0; d <= x.top_dim(); ++d)
        for (std::size_t i = 0; i < x.count(d); ++i)
            f.images[static_cast<std::size_t>(d)].push_back(degenerate_point(d, target_vertex));
    return f;
}

// ---------------------------------------------------------------------------
// Cone

// The cone CX with the apex joined as the LAST vertex.  Nondegenerate
// m-simplices: first the m-simplices of X (same indices), then cone(t) for
// each nondegenerate (m-1)-simplex t of X; plus the apex vertex at the end of
// dimension 0.  Faces: d_k cone(t) = cone(d_k t) for k <= dim t (with
// cone(s_w b) = s_w cone(b)), and the last face deletes the apex, giving t
// back inside the X block; d_0 cone(v) = apex for a vertex v.
struct ConeSpace {
    SimplicialSet space;
    std::vector<std::size_t> x_count;  // nondegenerate counts of X per dimension
    std::size_t apex = 0;              // vertex index of the apex

    std::size_t x_count_at(int d) const {
        return d >= 0 && d < static_cast<int>(x_count.size()) ? x_count[static_cast<std::size_t>(d)]
                                                             : 0;
    }

    bool in_x_block(int d, std::size_t i) const { return i < x_count_at(d); }

    // X included as the bottom of the cone (indices coincide).
    SimplexRef include(const SimplexRef& x) const { return x; }

    // cone() applied to an arbitrary simplex of X.
    SimplexRef cone_of(const SimplexRef& x) const {
        return SimplexRef{x.word, x.base_dim + 1, x_count_at(x.base_dim + 1) + x.base};
    }
};

inline ConeSpace cone(const SimplicialSet& x) {
    ConeSpace c;
    for (int d = 0; d <= x.top_dim(); ++d) c.x_count.push_back(x.count(d));
    c.apex = x.count(0);
    const int top = x.top_dim() + 1;
    c.space.names.resize(static_cast<std::size_t>(top) + 1);
    c.space.faces.resize(static_cast<std::size_t>(top) + 1);
    c.space.basepoint = x.basepoint;
    for (int d = 0; d <= top; ++d) {
        auto& nm = c.space.names[static_cast<std::size_t>(d)];
        auto& fc = c.space.faces[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < x.count(d); ++i) {
            nm.push_back(x.name(d, i));
            if (d > 0) fc.push_back(x.faces[static_cast<std::size_t>(d)][i]);
        }
        if (d == 0) {
            nm.push_back("*apex*");
            continue;
        }
        for (std::size_t j = 0; j < x.count(d - 1); ++j) {
            nm.push_back("cone(" + x.name(d - 1, j) + ")");
            std::vector<SimplexRef> fs;
            if (d == 1) {
                fs.push_back(nondeg_ref(0, c.apex));
            } else {
                for (int k = 0; k <= d - 1; ++k)
                    fs.push_back(c.cone_of(x.face(nondeg_ref(d - 1, j), k)));
            }
            fs.push_back(nondeg_ref(d - 1, j));
            fc.push_back(std::move(fs));
        }
    }
    validate_simplicial_set(c.space);
    return c;
}

// ---------------------------------------------------------------------------
// Reduced suspension

// SX = CX with the base X and the cone over the basepoint collapsed to a
// single vertex pt.  Nondegenerate cells: pt; one edge per non-basepoint
// vertex of X; one (m+1)-cell per nondegenerate m-simplex of X for m >= 1.
// Collapsing X (which the apex coning makes contractible rel nothing) and
// then the cone over the basepoint changes nothing up to homotopy, so SX is
// a genuine suspension model.
struct SuspensionSpace {
    SimplicialSet space;
    ConeSpace cone_x;          // the cone SX is a quotient of
    SimplicialMap collapse;    // cone_x.space -> space
    std::size_t x_basepoint = 0;
    std::size_t x_vertices = 0;

    // Index in space of the suspension cell over X's nondegenerate (d, i).
    // For d = 0 the basepoint has no cell (it collapses); others give edges.
    std::optional<std::size_t> cell_index(int d, std::size_t i) const {
        if (d == 0) {
            if (i == x_basepoint) return std::nullopt;
            return i < x_basepoint ? i : i - 1;
        }
        return i;
    }

    // Image of an arbitrary simplex of X under x -> class of cone(x).
    SimplexRef susp_of(const SimplexRef& x) const {
        SimplexRef r;
        if (x.base_dim == 0 && x.base == x_basepoint) {
            r = degenerate_point(1, 0);
        } else {
            auto idx = cell_index(x.base_dim, x.base);
            r = nondeg_ref(x.base_dim + 1, *idx);
        }
        for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) r = apply_degeneracy(r, *it);
        return r;
    }
};

inline SuspensionSpace suspension(const SimplicialSet& x) {
    SuspensionSpace s;
    s.cone_x = cone(x);
    s.x_basepoint = x.basepoint;
    s.x_vertices = x.count(0);

    int top = 0;
    for (int d = x.top_dim(); d >= 1; --d)
        if (x.count(d) > 0) {
            top = d + 1;
            break;
        }
    if (top == 0 && x.count(0) > 1) top = 1;

    s.space.names.resize(static_cast<std::size_t>(top) + 1);
    s.space.faces.resize(static_cast<std::size_t>(top) + 1);
    s.space.basepoint = 0;
    s.space.names[0].push_back("pt");
    for (int m = 1; m <= top; ++m) {
        auto& nm = s.space.names[static_cast<std::size_t>(m)];
        auto& fc = s.space.faces[static_cast<std::size_t>(m)];
        if (m == 1) {
            for (std::size_t v = 0; v < x.count(0); ++v) {
                if (v == x.basepoint) continue;
                nm.push_back("susp(" + x.name(0, v) + ")");
                fc.push_back({nondeg_ref(0, 0), nondeg_ref(0, 0)});
            }
            continue;
        }
        for (std::size_t i = 0; i < x.count(m - 1); ++i) {
            nm.push_back("susp(" + x.name(m - 1, i) + ")");
            std::vector<SimplexRef> fs;
            for (int k = 0; k <= m - 1; ++k)
                fs.push_back(s.susp_of(x.face(nondeg_ref(m - 1, i), k)));
            fs.push_back(degenerate_point(m - 1, 0));
            fc.push_back(std::move(fs));
        }
    }
    validate_simplicial_set(s.space);

    // The quotient map from the cone.
    s.collapse.images.resize(s.cone_x.space.names.size());
    for (int d = 0; d <= s.cone_x.space.top_dim(); ++d)
        for (std::size_t i = 0; i < s.cone_x.space.count(d); ++i) {
            SimplexRef img;
            if (d == 0 && i == s.cone_x.apex) img = nondeg_ref(0, 0);
            else if (s.cone_x.in_x_block(d, i)) img = degenerate_point(d, 0);
            else img = s.susp_of(nondeg_ref(d - 1, i - s.cone_x.x_count_at(d)));
            s.collapse.images[static_cast<std::size_t>(d)].push_back(img);
        }
    validate_simplicial_map(s.cone_x.space, s.space, s.collapse);
    return s;
}

}  // namespace homcls
