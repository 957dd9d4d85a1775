#pragma once

#include <kinv/int_matrix.hpp>

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

namespace kinv {

// Finite group given by its full multiplication table. Index 0 is always the
// identity; group_from_table rejects anything else.
struct FiniteGroup {
    long order = 0;
    std::vector<std::vector<long>> mul;
    std::vector<long> inv;
    long identity = 0;

    long op(long a, long b) const { return mul[a][b]; }
    long inverse(long a) const { return inv[a]; }
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr group_from_table(long order, const std::vector<std::vector<long>>& mul) {
    if (order <= 0) throw Error("group: order must be positive");
    if ((long)mul.size() != order) throw Error("group: table has wrong number of rows");
    for (const auto& row : mul) {
        if ((long)row.size() != order) throw Error("group: table has wrong number of columns");
        for (long v : row)
            if (v < 0 || v >= order) throw Error("group: table entry out of range");
    }
    for (long a = 0; a < order; ++a)
        if (mul[0][a] != a || mul[a][0] != a)
            throw Error("group: index 0 is not a two-sided identity");
    for (long a = 0; a < order; ++a)
        for (long b = 0; b < order; ++b)
            for (long c = 0; c < order; ++c)
                if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
                    throw Error("group: table is not associative");
    auto g = std::make_shared<FiniteGroup>();
    g->order = order;
    g->mul = mul;
    g->inv.assign(order, -1);
    for (long a = 0; a < order; ++a) {
        for (long b = 0; b < order; ++b)
            if (mul[a][b] == 0 && mul[b][a] == 0) {
                g->inv[a] = b;
                break;
            }
        if (g->inv[a] < 0) throw Error("group: element " + std::to_string(a) + " has no inverse");
    }
    return g;
}

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->order == b->order && a->mul == b->mul;
}

// Isomorphism of finite groups as an index relabeling.
struct GroupIso {
    GroupPtr source, target;
    std::vector<long> map;

    long operator()(long a) const { return map[a]; }

    GroupIso inverse_iso() const {
        GroupIso r;
        r.source = target;
        r.target = source;
        r.map.assign(map.size(), 0);
        for (long a = 0; a < (long)map.size(); ++a) r.map[map[a]] = a;
        return r;
    }
};

inline GroupIso make_group_iso(const GroupPtr& src, const GroupPtr& tgt, std::vector<long> map) {
    if (src->order != tgt->order) throw Error("iso: order mismatch");
    if ((long)map.size() != src->order) throw Error("iso: map has wrong length");
    std::vector<bool> seen(src->order, false);
    for (long v : map) {
        if (v < 0 || v >= src->order || seen[v]) throw Error("iso: map is not a bijection");
        seen[v] = true;
    }
    if (map[0] != 0) throw Error("iso: identity is not preserved");
    for (long a = 0; a < src->order; ++a)
        for (long b = 0; b < src->order; ++b)
            if (map[src->op(a, b)] != tgt->op(map[a], map[b]))
                throw Error("iso: map is not multiplicative");
    GroupIso u;
    u.source = src;
    u.target = tgt;
    u.map = std::move(map);
    return u;
}

// Exhaustive search; fine for the small orders this engine targets.
inline std::vector<GroupIso> all_isomorphisms(const GroupPtr& src, const GroupPtr& tgt) {
    std::vector<GroupIso> out;
    if (src->order != tgt->order) return out;
    std::vector<long> perm(src->order - 1);
    std::iota(perm.begin(), perm.end(), 1);
    do {
        std::vector<long> map(src->order);
        for (long i = 1; i < src->order; ++i) map[i] = perm[i - 1];
        bool ok = true;
        for (long a = 0; a < src->order && ok; ++a)
            for (long b = 0; b < src->order && ok; ++b)
                ok = map[src->op(a, b)] == tgt->op(map[a], map[b]);
        if (ok) {
            GroupIso u;
            u.source = src;
            u.target = tgt;
            u.map = map;
            out.push_back(std::move(u));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace kinv
