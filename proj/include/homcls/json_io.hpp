#pragma once

// JSON serialization for spaces, cochains, maps, matrices, representatives
// and nullhomotopy certificates, plus the coefficient-group and target-token
// grammars used by the command-line tool.
//
// Schema: every document carries "schema_version" (currently 1); unknown
// versions are rejected.  Integers are emitted as JSON numbers when their
// magnitude stays below 2^53 and as decimal strings otherwise, and both
// forms are accepted on input, so exact arithmetic survives serialization.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "homcls/cochain.hpp"
#include "homcls/homotopy.hpp"
#include "homcls/int_matrix.hpp"
#include "homcls/ints.hpp"
#include "homcls/postnikov.hpp"
#include "homcls/simplicial.hpp"

namespace homcls {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Exact integers.

inline Json int_to_json(const Int& v) {
    static const Int kSafe = Int(1) << 53;
    if (v > -kSafe && v < kSafe) return Json(static_cast<std::int64_t>(v));
    return Json(v.str());
}

inline Int json_to_int(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            return Int(s);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a decimal integer string: " + s);
        }
    }
    throw std::invalid_argument("expected an integer (number or decimal string)");
}

inline Json vec_to_json(const IntVec& v) {
    Json a = Json::array();
    for (const Int& x : v) a.push_back(int_to_json(x));
    return a;
}

inline IntVec json_to_vec(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of integers");
    IntVec v;
    for (const Json& e : j) v.push_back(json_to_int(e));
    return v;
}

// ---------------------------------------------------------------------------
// Schema plumbing.

inline void require_schema(const Json& j, const std::string& what) {
    if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
    if (!j.contains("schema_version"))
        throw std::invalid_argument(what + ": missing schema_version");
    const Json& v = j.at("schema_version");
    if (!v.is_number_integer() || v.get<std::int64_t>() != kSchemaVersion)
        throw std::invalid_argument(what + ": unsupported schema_version (expected " +
                                    std::to_string(kSchemaVersion) + ")");
}

inline const Json& require_field(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(what + ": missing field \"" + key + "\"");
    return j.at(key);
}

// ---------------------------------------------------------------------------
// Coefficient groups: grammar `Z`, `Z/q`, `Z^r`, sums joined with `+`.

inline Coeff parse_coeff(const std::string& text) {
    Coeff c;
    std::size_t pos = 0;
    if (text.empty()) throw std::invalid_argument("coefficient group: empty token");
    while (pos <= text.size()) {
        std::size_t next = text.find('+', pos);
        std::string term = text.substr(pos, next == std::string::npos ? next : next - pos);
        if (term.empty() || term[0] != 'Z')
            throw std::invalid_argument("coefficient group: bad term \"" + term + "\"");
        if (term == "Z") {
            c.free_rank += 1;
        } else if (term[1] == '^') {
            Int r;
            try {
                r = Int(term.substr(2));
            } catch (const std::exception&) {
                throw std::invalid_argument("coefficient group: bad rank in \"" + term + "\"");
            }
            if (r < 0 || r > 1024)
                throw std::invalid_argument("coefficient group: rank out of range");
            c.free_rank += static_cast<std::size_t>(r);
        } else if (term[1] == '/') {
            Int q;
            try {
                q = Int(term.substr(2));
            } catch (const std::exception&) {
                throw std::invalid_argument("coefficient group: bad order in \"" + term + "\"");
            }
            if (q < 2) throw std::invalid_argument("coefficient group: order must be >= 2");
            c.torsion.push_back(q);
        } else {
            throw std::invalid_argument("coefficient group: bad term \"" + term + "\"");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return c;
}

inline std::string coeff_to_string(const Coeff& c) {
    std::string s;
    auto append = [&s](const std::string& term) {
        if (!s.empty()) s += "+";
        s += term;
    };
    if (c.free_rank == 1) append("Z");
    else if (c.free_rank > 1) append("Z^" + std::to_string(c.free_rank));
    for (const Int& q : c.torsion) append("Z/" + q.str());
    return s.empty() ? "Z^0" : s;
}

inline Json coeff_to_json(const Coeff& c) {
    Json torsion = Json::array();
    for (const Int& q : c.torsion) torsion.push_back(int_to_json(q));
    return Json{{"free_rank", c.free_rank}, {"torsion", torsion}};
}

inline Coeff coeff_from_json(const Json& j) {
    Coeff c;
    const Json& r = require_field(j, "free_rank", "coefficient group");
    if (!r.is_number_integer() && !r.is_number_unsigned())
        throw std::invalid_argument("coefficient group: free_rank must be an integer");
    if (r.is_number_integer() && r.get<std::int64_t>() < 0)
        throw std::invalid_argument("coefficient group: free_rank must be >= 0");
    c.free_rank = r.get<std::size_t>();
    for (const Json& q : require_field(j, "torsion", "coefficient group")) {
        c.torsion.push_back(json_to_int(q));
        if (c.torsion.back() < 2)
            throw std::invalid_argument("coefficient group: torsion order must be >= 2");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Targets: `sphere:3` or `em:<coeff>:<n>`.

inline PostnikovData parse_target(const std::string& token) {
    if (token == "sphere:3") return sphere3_data();
    const std::string prefix = "em:";
    if (token.rfind(prefix, 0) == 0) {
        std::size_t last = token.rfind(':');
        if (last <= prefix.size() - 1)
            throw std::invalid_argument("target: expected em:<coeff>:<n>");
        std::string coeff = token.substr(prefix.size(), last - prefix.size());
        std::string dim = token.substr(last + 1);
        int n = 0;
        try {
            n = std::stoi(dim);
        } catch (const std::exception&) {
            throw std::invalid_argument("target: bad dimension \"" + dim + "\"");
        }
        return em_target_data(parse_coeff(coeff), n);
    }
    throw std::invalid_argument("target: unknown token \"" + token +
                                "\" (expected sphere:3 or em:<coeff>:<n>)");
}

// ---------------------------------------------------------------------------
// Spaces.  Two formats:
//   {"format":"simplicial_complex","vertices":[...],"facets":[[...],...]}
//   {"format":"simplicial_set","simplices":{"0":[ids],...},
//    "faces":{"id":[[degeneracy_word, base_id],...],...},"basepoint":id}
// Ids must be globally unique in the simplicial_set format, since faces
// reference them without a dimension.

namespace detail_json {

struct IdTable {
    std::map<std::string, std::pair<int, std::size_t>> at;  // id -> (dim, index)

    std::pair<int, std::size_t> lookup(const std::string& id, const std::string& what) const {
        auto it = at.find(id);
        if (it == at.end())
            throw std::invalid_argument(what + ": unknown simplex id \"" + id + "\"");
        return it->second;
    }
};

inline IdTable id_table(const SimplicialSet& x, const std::string& what) {
    IdTable t;
    for (int d = 0; d <= x.top_dim(); ++d)
        for (std::size_t i = 0; i < x.count(d); ++i)
            if (!t.at.emplace(x.name(d, i), std::make_pair(d, i)).second)
                throw std::invalid_argument(what + ": duplicate simplex id \"" +
                                            x.name(d, i) + "\"");
    return t;
}

}  // namespace detail_json

inline SimplicialSet space_from_json(const Json& j) {
    require_schema(j, "space");
    const std::string format = require_field(j, "format", "space").get<std::string>();
    if (format == "simplicial_complex") {
        std::vector<std::string> vertices;
        for (const Json& v : require_field(j, "vertices", "space")) {
            if (v.is_string()) vertices.push_back(v.get<std::string>());
            else if (v.is_number_integer()) vertices.push_back(std::to_string(v.get<std::int64_t>()));
            else throw std::invalid_argument("space: vertex names must be strings");
        }
        std::vector<std::vector<std::size_t>> facets;
        for (const Json& f : require_field(j, "facets", "space")) {
            std::vector<std::size_t> facet;
            for (const Json& v : f) {
                Int idx = json_to_int(v);
                if (idx < 0 || idx >= Int(vertices.size()))
                    throw std::invalid_argument("space: facet vertex index out of range");
                facet.push_back(static_cast<std::size_t>(idx));
            }
            facets.push_back(std::move(facet));
        }
        return simplicial_complex(vertices, facets);
    }
    if (format == "simplicial_set") {
        const Json& simplices = require_field(j, "simplices", "space");
        SimplicialSet s;
        std::map<std::string, std::pair<int, std::size_t>> ids;
        int top = -1;
        for (auto it = simplices.begin(); it != simplices.end(); ++it) {
            int d = 0;
            try {
                d = std::stoi(it.key());
            } catch (const std::exception&) {
                throw std::invalid_argument("space: bad dimension key \"" + it.key() + "\"");
            }
            if (d < 0) throw std::invalid_argument("space: negative dimension");
            top = std::max(top, d);
        }
        if (top < 0) throw std::invalid_argument("space: no simplices");
        s.names.resize(static_cast<std::size_t>(top) + 1);
        s.faces.resize(static_cast<std::size_t>(top) + 1);
        for (int d = 0; d <= top; ++d) {
            const std::string key = std::to_string(d);
            if (!simplices.contains(key)) continue;
            for (const Json& id : simplices.at(key)) {
                const std::string name = id.get<std::string>();
                if (!ids.emplace(name, std::make_pair(d, s.names[static_cast<std::size_t>(d)].size()))
                         .second)
                    throw std::invalid_argument("space: duplicate simplex id \"" + name + "\"");
                s.names[static_cast<std::size_t>(d)].push_back(name);
            }
        }
        const Json& faces = require_field(j, "faces", "space");
        auto parse_ref = [&ids](const Json& rj, int face_dim) {
            if (!rj.is_array() || rj.size() != 2)
                throw std::invalid_argument("space: face must be [degeneracy_word, base_id]");
            SimplexRef r;
            for (const Json& w : rj.at(0)) {
                Int v = json_to_int(w);
                if (v < 0) throw std::invalid_argument("space: negative degeneracy index");
                r.word.push_back(static_cast<int>(v));
            }
            const std::string base = rj.at(1).get<std::string>();
            auto it = ids.find(base);
            if (it == ids.end())
                throw std::invalid_argument("space: face references unknown id \"" + base + "\"");
            r.base_dim = it->second.first;
            r.base = it->second.second;
            if (r.dim() != face_dim)
                throw std::invalid_argument("space: face of wrong dimension under id \"" + base +
                                            "\"");
            return r;
        };
        for (int d = 1; d <= top; ++d) {
            for (std::size_t i = 0; i < s.names[static_cast<std::size_t>(d)].size(); ++i) {
                const std::string& name = s.names[static_cast<std::size_t>(d)][i];
                if (!faces.contains(name))
                    throw std::invalid_argument("space: missing faces for \"" + name + "\"");
                const Json& list = faces.at(name);
                if (!list.is_array() || list.size() != static_cast<std::size_t>(d) + 1)
                    throw std::invalid_argument("space: \"" + name + "\" needs " +
                                                std::to_string(d + 1) + " faces");
                std::vector<SimplexRef> fs;
                for (const Json& rj : list) fs.push_back(parse_ref(rj, d - 1));
                s.faces[static_cast<std::size_t>(d)].push_back(std::move(fs));
            }
        }
        if (j.contains("basepoint")) {
            const std::string bp = j.at("basepoint").get<std::string>();
            auto it = ids.find(bp);
            if (it == ids.end() || it->second.first != 0)
                throw std::invalid_argument("space: basepoint must name a vertex");
            s.basepoint = it->second.second;
        }
        validate_simplicial_set(s);
        return s;
    }
    throw std::invalid_argument("space: unknown format \"" + format + "\"");
}

inline Json space_to_json(const SimplicialSet& x) {
    detail_json::IdTable ids = detail_json::id_table(x, "space");
    Json simplices = Json::object();
    Json faces = Json::object();
    for (int d = 0; d <= x.top_dim(); ++d) {
        if (x.count(d) == 0) continue;
        Json list = Json::array();
        for (std::size_t i = 0; i < x.count(d); ++i) list.push_back(x.name(d, i));
        simplices[std::to_string(d)] = std::move(list);
        if (d == 0) continue;
        for (std::size_t i = 0; i < x.count(d); ++i) {
            Json fl = Json::array();
            for (int k = 0; k <= d; ++k) {
                const SimplexRef& r = x.faces[static_cast<std::size_t>(d)][i][static_cast<std::size_t>(k)];
                Json word = Json::array();
                for (int w : r.word) word.push_back(w);
                fl.push_back(Json::array({word, x.name(r.base_dim, r.base)}));
            }
            faces[x.name(d, i)] = std::move(fl);
        }
    }
    return Json{{"schema_version", kSchemaVersion},
                {"format", "simplicial_set"},
                {"simplices", simplices},
                {"faces", faces},
                {"basepoint", x.name(0, x.basepoint)}};
}

// ---------------------------------------------------------------------------
// Cochains: {"dim":n,"coeff":{...},"values":{"simplex_id":[ints]}}.
// Absent ids are zero.

inline Cochain cochain_from_json(const SimplicialSet& x, const Json& j) {
    const Json& dj = require_field(j, "dim", "cochain");
    if (!dj.is_number_integer() || dj.get<std::int64_t>() < 0)
        throw std::invalid_argument("cochain: dim must be a nonnegative integer");
    const int dim = dj.get<int>();
    Coeff coeff = coeff_from_json(require_field(j, "coeff", "cochain"));
    Cochain c = zero_cochain(x, dim, coeff);
    if (j.contains("values")) {
        const Json& values = j.at("values");
        if (!values.is_object()) throw std::invalid_argument("cochain: values must be an object");
        for (auto it = values.begin(); it != values.end(); ++it) {
            auto idx = find_simplex(x, dim, it.key());
            if (!idx)
                throw std::invalid_argument("cochain: no " + std::to_string(dim) +
                                            "-simplex named \"" + it.key() + "\"");
            IntVec v = json_to_vec(it.value());
            if (v.size() != coeff.width())
                throw std::invalid_argument("cochain: value for \"" + it.key() +
                                            "\" has wrong width");
            c.values[*idx] = std::move(v);
        }
    }
    return cochain_reduce(c);
}

inline Json cochain_to_json(const SimplicialSet& x, const Cochain& c) {
    Json values = Json::object();
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (!vec_is_zero(c.values[i])) values[x.name(c.dim, i)] = vec_to_json(c.values[i]);
    return Json{{"dim", c.dim}, {"coeff", coeff_to_json(c.coeff)}, {"values", values}};
}

// ---------------------------------------------------------------------------
// Simplicial maps into a stored target model:
//   {"assignments": {"simplex_id": spec}}
// where spec is "*" (the basepoint degeneracy of matching dimension), the
// name of a nondegenerate target simplex of the same dimension, or
// [degeneracy_word, base_name] for a general degenerate image.  Simplices of
// the domain without an assignment default to "*".

inline SimplicialMap map_from_json(const SimplicialSet& x, const SimplicialSet& y,
                                   const Json& j) {
    require_schema(j, "map");
    detail_json::IdTable xids = detail_json::id_table(x, "map domain");
    SimplicialMap f;
    f.images.resize(x.names.size());
    for (int d = 0; d <= x.top_dim(); ++d)
        f.images[static_cast<std::size_t>(d)]
            .assign(x.count(d), degenerate_point(d, y.basepoint));
    const Json& assignments = require_field(j, "assignments", "map");
    if (!assignments.is_object())
        throw std::invalid_argument("map: assignments must be an object");
    for (auto it = assignments.begin(); it != assignments.end(); ++it) {
        auto [d, i] = xids.lookup(it.key(), "map");
        const Json& spec = it.value();
        SimplexRef img;
        if (spec.is_string()) {
            const std::string name = spec.get<std::string>();
            if (name == "*") continue;  // basepoint degeneracy: the default
            auto idx = find_simplex(y, d, name);
            if (!idx)
                throw std::invalid_argument("map: target has no " + std::to_string(d) +
                                            "-simplex named \"" + name + "\"");
            img = nondeg_ref(d, *idx);
        } else if (spec.is_array() && spec.size() == 2) {
            SimplexRef r;
            for (const Json& w : spec.at(0)) {
                Int v = json_to_int(w);
                if (v < 0) throw std::invalid_argument("map: negative degeneracy index");
                r.word.push_back(static_cast<int>(v));
            }
            r.base_dim = d - static_cast<int>(r.word.size());
            if (r.base_dim < 0)
                throw std::invalid_argument("map: degeneracy word longer than dimension");
            const std::string base = spec.at(1).get<std::string>();
            auto idx = find_simplex(y, r.base_dim, base);
            if (!idx)
                throw std::invalid_argument("map: target has no " + std::to_string(r.base_dim) +
                                            "-simplex named \"" + base + "\"");
            r.base = *idx;
            img = r;
        } else {
            throw std::invalid_argument("map: assignment for \"" + it.key() +
                                        "\" must be \"*\", a simplex name, or "
                                        "[degeneracy_word, base_name]");
        }
        f.images[static_cast<std::size_t>(d)][i] = img;
    }
    validate_simplicial_map(x, y, f);
    return f;
}

inline Json map_to_json(const SimplicialSet& x, const SimplicialSet& y, const SimplicialMap& f) {
    Json assignments = Json::object();
    for (int d = 0; d <= x.top_dim(); ++d)
        for (std::size_t i = 0; i < x.count(d); ++i) {
            const SimplexRef& r = f.images[static_cast<std::size_t>(d)][i];
            if (r == degenerate_point(d, y.basepoint)) continue;
            if (!r.is_degenerate()) {
                assignments[x.name(d, i)] = y.name(r.base_dim, r.base);
            } else {
                Json word = Json::array();
                for (int w : r.word) word.push_back(w);
                assignments[x.name(d, i)] =
                    Json::array({word, y.name(r.base_dim, r.base)});
            }
        }
    return Json{{"schema_version", kSchemaVersion}, {"assignments", assignments}};
}

// ---------------------------------------------------------------------------
// Group reports: {"free_rank": r, "torsion": [q1,...]}.

inline Json group_to_json(std::size_t free_rank, const std::vector<Int>& torsion) {
    Json t = Json::array();
    for (const Int& q : torsion) t.push_back(int_to_json(q));
    return Json{{"schema_version", kSchemaVersion}, {"free_rank", free_rank}, {"torsion", t}};
}

inline Json group_to_json(const FullyEffectiveGroup& g) {
    return group_to_json(g.free_rank(), g.torsion());
}

// ---------------------------------------------------------------------------
// Map representatives and nullhomotopy certificates.  The space the
// components live on (the domain or its cone) is identified by the "space"
// field and must be supplied again when parsing.

inline Json rep_to_json(const SimplicialSet& space, const std::string& space_label,
                        const std::string& target, const std::string& kind, const MapRep& m) {
    Json comps = Json::array();
    for (const Cochain& c : m.comps) comps.push_back(cochain_to_json(space, c));
    return Json{{"schema_version", kSchemaVersion}, {"kind", kind},
                {"space", space_label},            {"target", target},
                {"base_dim", m.d},                 {"stage", m.stage},
                {"components", comps}};
}

inline Json certificate_to_json(const HomotopyEngine& engine, const ConeMapRep& cert) {
    return rep_to_json(engine.cone_space(), "cone", engine.tower().target_name(),
                       "cone_map_rep", cert.rep);
}

// Parse the component list of an emitted representative against the given
// space (the base space for kind "map_rep", its cone for "cone_map_rep").
inline std::vector<Cochain> rep_components_from_json(const SimplicialSet& space, const Json& j,
                                                     const std::string& kind) {
    require_schema(j, kind);
    if (require_field(j, "kind", kind).get<std::string>() != kind)
        throw std::invalid_argument(kind + ": wrong document kind");
    std::vector<Cochain> comps;
    for (const Json& c : require_field(j, "components", kind))
        comps.push_back(cochain_from_json(space, c));
    return comps;
}

// ---------------------------------------------------------------------------
// Matrices for the debug SNF tool: a bare JSON array of rows.

inline IntMatrix matrix_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("matrix: expected an array of rows");
    std::vector<IntVec> rows;
    std::size_t cols = 0;
    for (const Json& r : j) {
        rows.push_back(json_to_vec(r));
        if (rows.size() == 1) cols = rows.back().size();
        else if (rows.back().size() != cols)
            throw std::invalid_argument("matrix: ragged rows");
    }
    return IntMatrix::from_rows(rows, cols);
}

inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t jx = 0; jx < m.cols(); ++jx) r.push_back(int_to_json(m(i, jx)));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace homcls
