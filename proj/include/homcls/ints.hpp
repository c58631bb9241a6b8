#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace homcls {

// Exact arbitrary-precision integer; all group-theoretic computations are
// carried out over these (overflow is never acceptable).
using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline int sign_int(const Int& a) { return a < 0 ? -1 : (a == 0 ? 0 : 1); }

// Mathematical remainder in [0, m) for m > 0 (cpp_int's % truncates toward
// zero, which yields negative remainders for negative dividends).
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

using IntVec = std::vector<Int>;

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline IntVec vec_neg(const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline IntVec vec_scale(const Int& c, const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool vec_is_zero(const IntVec& a) {
    for (const Int& x : a)
        if (x != 0) return false;
    return true;
}

inline std::string vec_to_string(const IntVec& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ", ";
        s += a[i].str();
    }
    s += ")";
    return s;
}

}  // namespace homcls
