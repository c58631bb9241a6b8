#pragma once

// Chain-level operators on products: formal integer combinations of ordered
// pairs of simplices, the Alexander-Whitney and shuffle (Eilenberg-Zilber)
// maps, and the standard chain homotopy between their composite and the
// identity.  Everything is generic over an "ops" object providing the
// simplicial structure of the entries:
//
//   E    ops.face(const E&, int)
//   E    ops.degeneracy(const E&, int)
//   bool ops.equal(const E&, const E&)
//   std::string ops.key(const E&)
//
// so the same code drives plain simplex references (for validation against
// the classical identities) and Postnikov-stage simplices (in production).

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "homcls/ints.hpp"

namespace homcls {

template <class E>
struct PairTerm {
    Int coef;
    E first;
    E second;
};

template <class E>
using PairSum = std::vector<PairTerm<E>>;

template <class E>
struct TensorTerm {
    Int coef;
    E left;
    E right;
};

template <class E>
using TensorSum = std::vector<TensorTerm<E>>;

// A pair is degenerate in the product exactly when both entries are
// degeneracies along one common index.
template <class E, class Ops>
bool pair_is_degenerate(const Ops& ops, const E& a, const E& b, int dim) {
    for (int i = 0; i + 1 <= dim; ++i) {
        if (ops.equal(ops.degeneracy(ops.face(a, i + 1), i), a) &&
            ops.equal(ops.degeneracy(ops.face(b, i + 1), i), b))
            return true;
    }
    return false;
}

// Merge equal pairs, drop zero coefficients and degenerate pairs: the normal
// form of a chain in the normalized complex of the product.
template <class E, class Ops>
PairSum<E> combine_pairs(const Ops& ops, const PairSum<E>& z, int dim) {
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    PairSum<E> out;
    for (const PairTerm<E>& t : z) {
        if (t.coef == 0) continue;
        if (pair_is_degenerate(ops, t.first, t.second, dim)) continue;
        auto key = std::make_pair(ops.key(t.first), ops.key(t.second));
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(std::move(key), out.size());
            out.push_back(t);
        } else {
            out[it->second].coef += t.coef;
        }
    }
    PairSum<E> cleaned;
    for (PairTerm<E>& t : out)
        if (t.coef != 0) cleaned.push_back(std::move(t));
    std::sort(cleaned.begin(), cleaned.end(), [&](const PairTerm<E>& a, const PairTerm<E>& b) {
        return std::make_pair(ops.key(a.first), ops.key(a.second)) <
               std::make_pair(ops.key(b.first), ops.key(b.second));
    });
    return cleaned;
}

// The diagonal boundary of the product: sum of (-1)^k (face_k, face_k).
template <class E, class Ops>
PairSum<E> pair_boundary(const Ops& ops, const E& a, const E& b, int dim) {
    PairSum<E> out;
    for (int k = 0; k <= dim; ++k)
        out.push_back({Int(k % 2 == 0 ? 1 : -1), ops.face(a, k), ops.face(b, k)});
    return out;
}

// Ascending subsets of {0..n-1} of the given size.
inline std::vector<std::vector<int>> ascending_subsets(int n, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int v = next; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Number of inversions of the riffle determined by the ascending subset s of
// {0..n-1}: sum of (s[i] - i).
inline int shuffle_signature(const std::vector<int>& s) {
    int sig = 0;
    for (std::size_t i = 0; i < s.size(); ++i) sig += s[i] - static_cast<int>(i);
    return sig;
}

template <class E, class Ops>
E apply_degeneracy_set(const Ops& ops, E x, const std::vector<int>& set_ascending) {
    for (int j : set_ascending) x = ops.degeneracy(x, j);
    return x;
}

// Alexander-Whitney map on a product m-simplex: sum over p of the front
// p-face of the first entry tensor the back (m-p)-face of the second.
template <class E, class Ops>
TensorSum<E> alexander_whitney(const Ops& ops, const E& a, const E& b, int m) {
    TensorSum<E> out;
    for (int p = 0; p <= m; ++p) {
        E front = a;
        for (int k = 0; k < m - p; ++k) front = ops.face(front, m - k);
        E back = b;
        for (int k = 0; k < p; ++k) back = ops.face(back, 0);
        out.push_back({Int(1), std::move(front), std::move(back)});
    }
    return out;
}

// Shuffle (Eilenberg-Zilber) map on x_p tensor y_q: sum over (p,q)-shuffles
// (mu, nu) of {0..p+q-1} of (-1)^{sig(mu)} (s_nu x, s_mu y), where mu (size p)
// collects the degeneracies applied to y and nu (size q) those applied to x,
// each set applied smallest index first.
template <class E, class Ops>
PairSum<E> shuffle_map(const Ops& ops, const E& x, int p, const E& y, int q) {
    PairSum<E> out;
    for (const std::vector<int>& mu : ascending_subsets(p + q, p)) {
        std::vector<int> nu;
        std::size_t at = 0;
        for (int v = 0; v < p + q; ++v) {
            if (at < mu.size() && mu[at] == v)
                ++at;
            else
                nu.push_back(v);
        }
        Int sign = shuffle_signature(mu) % 2 == 0 ? 1 : -1;
        out.push_back({sign, apply_degeneracy_set(ops, x, nu), apply_degeneracy_set(ops, y, mu)});
    }
    return out;
}

// The chain homotopy between the identity of the product complex and the
// composite shuffle_map after alexander_whitney, on a product m-simplex
// (a, b).  Each term, indexed by p, q with p + q <= m - 1 and a
// (p+1, q)-shuffle (alpha, beta) of {0..p+q}, is
//
//   (-1)^{mb + sig(alpha)} ( s_{beta + mb, mb - 1} front-face part of a,
//                            s_{alpha + mb}        middle-face part of b )
//
// with mb = m - p - q: the first entry deletes the last q vertices of a and
// applies the degeneracies {mb - 1} and beta shifted by mb; the second
// deletes vertices mb..m-q-1 of b and applies alpha shifted by mb.  Output
// terms are pairs of (m+1)-simplices; the operator is zero for m = 0.
template <class E, class Ops>
PairSum<E> homotopy_operator(const Ops& ops, const E& a, const E& b, int m) {
    PairSum<E> out;
    for (int q = 0; q <= m - 1; ++q) {
        for (int p = 0; p + q <= m - 1; ++p) {
            int mb = m - p - q;
            E a_faced = a;
            for (int k = 0; k < q; ++k) a_faced = ops.face(a_faced, m - k);
            E b_faced = b;
            for (int v = m - q - 1; v >= mb; --v) b_faced = ops.face(b_faced, v);
            for (const std::vector<int>& alpha : ascending_subsets(p + q + 1, p + 1)) {
                std::vector<int> beta;
                std::size_t at = 0;
                for (int v = 0; v <= p + q; ++v) {
                    if (at < alpha.size() && alpha[at] == v)
                        ++at;
                    else
                        beta.push_back(v);
                }
                std::vector<int> first_set;
                first_set.push_back(mb - 1);
                for (int v : beta) first_set.push_back(v + mb);
                std::vector<int> second_set;
                for (int v : alpha) second_set.push_back(v + mb);
                Int sign = (mb + shuffle_signature(alpha)) % 2 == 0 ? 1 : -1;
                out.push_back({sign, apply_degeneracy_set(ops, a_faced, first_set),
                               apply_degeneracy_set(ops, b_faced, second_set)});
            }
        }
    }
    return out;
}

// Linear extension of the homotopy operator to a chain of product simplices.
template <class E, class Ops>
PairSum<E> homotopy_operator(const Ops& ops, const PairSum<E>& z, int m) {
    PairSum<E> out;
    for (const PairTerm<E>& t : z) {
        PairSum<E> part = homotopy_operator(ops, t.first, t.second, m);
        for (PairTerm<E>& u : part) {
            u.coef *= t.coef;
            out.push_back(std::move(u));
        }
    }
    return out;
}

}  // namespace homcls
