#pragma once

// JSON round trip for the objects the command line handles. Format 1 files
// carry a group as its full multiplication table and group ring entries as
// length |pi| integer coefficient arrays, so a differential is an array of
// rows, each row an array of such entries. Structural problems (shapes,
// ranges, missing keys) throw; mathematical invariants are left to
// validate_complex and friends so the caller can report them separately.

#include <kinv/chain_complex.hpp>
#include <kinv/pi_module.hpp>

#include <json.hpp>

#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace kinv::jsonio {

using nlohmann::json;

inline long long int_to_ll(const Int& v) {
    static const Int lo = std::numeric_limits<long long>::min();
    static const Int hi = std::numeric_limits<long long>::max();
    if (v < lo || v > hi) throw Error("json: integer too large to serialize");
    return v.convert_to<long long>();
}

inline Int int_from_json(const json& j) {
    if (!j.is_number_integer()) throw Error("json: expected an integer");
    return Int(j.get<long long>());
}

inline json int_matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (long i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < m.cols(); ++j) row.push_back(int_to_ll(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix int_matrix_from_json(const json& j, long rows, long cols) {
    if (!j.is_array() || (long)j.size() != rows) throw Error("json: matrix row count mismatch");
    IntMatrix m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!j[i].is_array() || (long)j[i].size() != cols)
            throw Error("json: matrix column count mismatch");
        for (long c = 0; c < cols; ++c) m.at(i, c) = int_from_json(j[i][c]);
    }
    return m;
}

inline json group_to_json(const GroupPtr& g) {
    json j;
    j["order"] = g->order;
    j["mul"] = g->mul;
    return j;
}

inline GroupPtr group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("mul"))
        throw Error("json: group needs order and mul");
    auto order = j.at("order").get<long>();
    auto mul = j.at("mul").get<std::vector<std::vector<long>>>();
    return group_from_table(order, mul);
}

inline json gr_matrix_to_json(const GroupRingMatrix& m) {
    json rows = json::array();
    for (long i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (long j = 0; j < m.cols; ++j) {
            json entry = json::array();
            for (const auto& c : m.at(i, j).c) entry.push_back(int_to_ll(c));
            row.push_back(std::move(entry));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline GroupRingMatrix gr_matrix_from_json(const json& j, const GroupPtr& g, long rows, long cols) {
    if (!j.is_array() || (long)j.size() != rows)
        throw Error("json: group ring matrix row count mismatch");
    auto m = GroupRingMatrix::zero(g, rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!j[i].is_array() || (long)j[i].size() != cols)
            throw Error("json: group ring matrix column count mismatch");
        for (long c = 0; c < cols; ++c) {
            const auto& entry = j[i][c];
            if (!entry.is_array() || (long)entry.size() != g->order)
                throw Error("json: ring entry must list one coefficient per group element");
            for (long s = 0; s < g->order; ++s) m.at(i, c).c[s] = int_from_json(entry[s]);
        }
    }
    return m;
}

inline json marker_to_json(const SubcomplexMarker& m) {
    json j = json::array();
    for (const auto& degree : m.marked) j.push_back(degree);
    return j;
}

inline SubcomplexMarker marker_from_json(const json& j) {
    const json& arr = j.is_object() && j.contains("sub") ? j.at("sub") : j;
    if (!arr.is_array()) throw Error("json: marker must be an array per degree");
    SubcomplexMarker m;
    for (const auto& degree : arr) m.marked.push_back(degree.get<std::vector<long>>());
    return m;
}

inline json complex_to_json(const ChainComplex& k, const SubcomplexMarker* sub = nullptr) {
    json j;
    j["format"] = 1;
    j["group"] = group_to_json(k.g);
    j["ranks"] = k.ranks;
    json ds = json::array();
    for (long i = 1; i <= k.top(); ++i) ds.push_back(gr_matrix_to_json(k.d[i]));
    j["differentials"] = std::move(ds);
    if (k.has_aug) {
        json a = json::array();
        for (const auto& v : k.aug) a.push_back(int_to_ll(v));
        j["aug"] = std::move(a);
    }
    if (sub) j["sub"] = marker_to_json(*sub);
    return j;
}

struct ParsedComplex {
    ChainComplex k;
    std::optional<SubcomplexMarker> sub;
};

inline ParsedComplex complex_from_json(const json& j) {
    if (!j.is_object()) throw Error("json: complex file must be an object");
    if (!j.contains("format") || j.at("format") != 1)
        throw Error("json: unsupported or missing format, expected 1");
    ParsedComplex out;
    out.k.g = group_from_json(j.at("group"));
    out.k.ranks = j.at("ranks").get<std::vector<long>>();
    if (out.k.ranks.empty()) throw Error("json: ranks must be nonempty");
    for (long r : out.k.ranks)
        if (r < 0) throw Error("json: negative rank");
    const auto& ds = j.at("differentials");
    if (!ds.is_array() || (long)ds.size() != out.k.top())
        throw Error("json: need one differential per positive degree");
    out.k.d.resize(out.k.top() + 1, GroupRingMatrix::zero(out.k.g, 0, 0));
    for (long i = 1; i <= out.k.top(); ++i)
        out.k.d[i] = gr_matrix_from_json(ds[i - 1], out.k.g, out.k.rank(i - 1), out.k.rank(i));
    if (j.contains("aug")) {
        out.k.has_aug = true;
        if (!j.at("aug").is_array()) throw Error("json: aug must be an array");
        for (const auto& v : j.at("aug")) out.k.aug.push_back(int_from_json(v));
    }
    if (j.contains("sub")) out.sub = marker_from_json(j.at("sub"));
    return out;
}

// Component matrices only; endpoints come from context. An optional iso
// entry names a group isomorphism for problems joining different groups.
inline json chain_map_to_json(const ChainMapData& f) {
    json j;
    j["format"] = 1;
    json ms = json::array();
    for (const auto& m : f.f) ms.push_back(gr_matrix_to_json(m));
    j["maps"] = std::move(ms);
    return j;
}

inline ChainMapData chain_map_from_json(const json& j, const ChainComplex& src,
                                        const ChainComplex& tgt) {
    if (!j.is_object() || !j.contains("maps")) throw Error("json: chain map needs a maps array");
    const auto& ms = j.at("maps");
    if (!ms.is_array()) throw Error("json: maps must be an array per degree");
    ChainMapData f;
    f.source = src;
    f.target = tgt;
    for (long i = 0; i < (long)ms.size(); ++i)
        f.f.push_back(gr_matrix_from_json(ms[i], src.g, tgt.rank(i), src.rank(i)));
    return f;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return json::parse(in);
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(1) << '\n';
}

} // namespace kinv::jsonio
