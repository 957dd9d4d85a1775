#pragma once

#include <kinv/group_ring.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace kinv {

// Nonnegatively graded complex of finitely generated free left Z[pi]-modules.
// d[i]: C_i -> C_{i-1} for 1 <= i <= top; aug is an integer row on the degree
// zero basis, extended equivariantly (aug(gamma e_j) = aug_j).
struct ChainComplex {
    GroupPtr g;
    std::vector<long> ranks;
    std::vector<GroupRingMatrix> d; // index 0 unused
    bool has_aug = false;
    std::vector<Int> aug;

    long top() const { return (long)ranks.size() - 1; }
    long rank(long i) const { return (i >= 0 && i <= top()) ? ranks[i] : 0; }

    // zero-shaped outside the stored range so cones and shifts are uniform
    GroupRingMatrix diff(long i) const {
        if (i >= 1 && i <= top()) return d[i];
        return GroupRingMatrix::zero(g, rank(i - 1), rank(i));
    }

    // augmentation as a 1 x (rank0 * |pi|) integer row
    IntMatrix aug_row() const {
        IntMatrix r(1, rank(0) * g->order);
        if (!has_aug) throw Error("complex: not augmented");
        for (long j = 0; j < rank(0); ++j)
            for (long s = 0; s < g->order; ++s) r.at(0, j * g->order + s) = aug[j];
        return r;
    }

    Int aug_of_element(const GroupRingElement& z, long basis_index) const {
        return aug[basis_index] * z.aug();
    }
};

inline std::vector<std::string> validate_complex(const ChainComplex& k) {
    std::vector<std::string> issues;
    if (!k.g) return {"complex: missing group"};
    if (k.ranks.empty()) issues.push_back("complex: no degrees");
    for (long r : k.ranks)
        if (r < 0) issues.push_back("complex: negative rank");
    if ((long)k.d.size() < (long)k.ranks.size())
        issues.push_back("complex: missing differential storage");
    if (!issues.empty()) return issues;
    for (long i = 1; i <= k.top(); ++i) {
        const auto& di = k.d[i];
        if (!same_group(di.g, k.g)) issues.push_back("complex: differential over a different group");
        if (di.rows != k.rank(i - 1) || di.cols != k.rank(i))
            issues.push_back("complex: differential " + std::to_string(i) + " has shape " +
                             std::to_string(di.rows) + "x" + std::to_string(di.cols) +
                             ", expected " + std::to_string(k.rank(i - 1)) + "x" +
                             std::to_string(k.rank(i)));
    }
    if (!issues.empty()) return issues;
    for (long i = 2; i <= k.top(); ++i)
        if (!gr_compose(k.d[i - 1], k.d[i]).is_zero())
            issues.push_back("complex: d" + std::to_string(i - 1) + " o d" + std::to_string(i) +
                             " is nonzero");
    if (k.has_aug) {
        if ((long)k.aug.size() != k.rank(0))
            issues.push_back("complex: augmentation length mismatch");
        else {
            Int g = 0;
            for (const auto& v : k.aug) g = gcd_int(g, v);
            if (g != 1) issues.push_back("complex: augmentation is not surjective");
            if (k.top() >= 1) {
                for (long j = 0; j < k.rank(1); ++j) {
                    Int s = 0;
                    for (long i = 0; i < k.rank(0); ++i)
                        s += k.aug_of_element(k.d[1].at(i, j), i);
                    if (s != 0) {
                        issues.push_back("complex: augmentation does not kill d1");
                        break;
                    }
                }
            }
        }
    }
    return issues;
}

inline void require_valid(const ChainComplex& k, const char* what = "complex") {
    auto issues = validate_complex(k);
    if (!issues.empty()) throw Error(std::string(what) + ": " + issues.front());
}

// Marked basis indices per degree; the marked span must be closed under d.
struct SubcomplexMarker {
    std::vector<std::vector<long>> marked;

    long count(long i) const {
        return (i >= 0 && i < (long)marked.size()) ? (long)marked[i].size() : 0;
    }
    std::vector<long> at(long i) const {
        return (i >= 0 && i < (long)marked.size()) ? marked[i] : std::vector<long>{};
    }
    bool contains(long degree, long index) const {
        for (long v : at(degree))
            if (v == index) return true;
        return false;
    }

    static SubcomplexMarker none() { return SubcomplexMarker{}; }

    static SubcomplexMarker skeleton(const ChainComplex& k, long j) {
        SubcomplexMarker m;
        for (long i = 0; i <= std::min(j, k.top()); ++i) {
            std::vector<long> all(k.rank(i));
            for (long v = 0; v < k.rank(i); ++v) all[v] = v;
            m.marked.push_back(all);
        }
        return m;
    }

    static SubcomplexMarker full(const ChainComplex& k) { return skeleton(k, k.top()); }
};

inline std::vector<std::string> validate_marker(const ChainComplex& k, const SubcomplexMarker& m) {
    std::vector<std::string> issues;
    if ((long)m.marked.size() > (long)k.ranks.size())
        issues.push_back("marker: more degrees than the complex");
    for (long i = 0; i < (long)m.marked.size() && i <= k.top(); ++i) {
        long prev = -1;
        for (long v : m.marked[i]) {
            if (v < 0 || v >= k.rank(i))
                issues.push_back("marker: index out of range in degree " + std::to_string(i));
            else if (v <= prev)
                issues.push_back("marker: indices not strictly increasing in degree " +
                                 std::to_string(i));
            prev = v;
        }
    }
    if (!issues.empty()) return issues;
    for (long i = 1; i <= k.top(); ++i) {
        for (long j : m.at(i)) {
            for (long r = 0; r < k.rank(i - 1); ++r) {
                if (k.d[i].at(r, j).is_zero()) continue;
                if (!m.contains(i - 1, r)) {
                    issues.push_back("marker: boundary of marked cell " + std::to_string(j) +
                                     " in degree " + std::to_string(i) +
                                     " leaves the marked span");
                    break;
                }
            }
        }
    }
    return issues;
}

inline ChainComplex subcomplex(const ChainComplex& k, const SubcomplexMarker& m) {
    ChainComplex l;
    l.g = k.g;
    long mtop = -1;
    for (long i = 0; i <= k.top(); ++i)
        if (m.count(i) > 0) mtop = i;
    if (mtop < 0) {
        l.ranks = {0};
        l.d.resize(1, GroupRingMatrix::zero(k.g, 0, 0));
        return l;
    }
    for (long i = 0; i <= mtop; ++i) l.ranks.push_back(m.count(i));
    l.d.resize(mtop + 1, GroupRingMatrix::zero(k.g, 0, 0));
    for (long i = 1; i <= mtop; ++i) {
        auto rows = m.at(i - 1);
        auto cols = m.at(i);
        auto sub = GroupRingMatrix::zero(k.g, (long)rows.size(), (long)cols.size());
        for (long a = 0; a < (long)rows.size(); ++a)
            for (long b = 0; b < (long)cols.size(); ++b) sub.at(a, b) = k.d[i].at(rows[a], cols[b]);
        l.d[i] = sub;
    }
    return l;
}

inline GroupRingMatrix inclusion_matrix(const ChainComplex& k, const SubcomplexMarker& m, long i) {
    auto idx = m.at(i);
    auto inc = GroupRingMatrix::zero(k.g, k.rank(i), (long)idx.size());
    for (long j = 0; j < (long)idx.size(); ++j)
        inc.at(idx[j], j) = GroupRingElement::basis(k.g, k.g->identity);
    return inc;
}

// Chain map on degrees 0..bound between stored complexes.
struct ChainMapData {
    ChainComplex source, target;
    std::vector<GroupRingMatrix> f;

    long bound() const { return (long)f.size() - 1; }
    GroupRingMatrix map(long i) const {
        if (i >= 0 && i <= bound()) return f[i];
        return GroupRingMatrix::zero(target.g, target.rank(i), source.rank(i));
    }
};

inline ChainMapData identity_chain_map(const ChainComplex& k) {
    ChainMapData m;
    m.source = k;
    m.target = k;
    for (long i = 0; i <= k.top(); ++i) m.f.push_back(GroupRingMatrix::identity(k.g, k.rank(i)));
    return m;
}

inline ChainMapData inclusion_chain_map(const ChainComplex& k, const SubcomplexMarker& m) {
    ChainMapData inc;
    inc.source = subcomplex(k, m);
    inc.target = k;
    for (long i = 0; i <= inc.source.top(); ++i) inc.f.push_back(inclusion_matrix(k, m, i));
    return inc;
}

// Inclusion between the subcomplexes cut out by two nested markers; every
// cell marked by inner must also be marked by outer.
inline ChainMapData nested_inclusion_chain_map(const ChainComplex& k, const SubcomplexMarker& inner,
                                               const SubcomplexMarker& outer) {
    ChainMapData inc;
    inc.source = subcomplex(k, inner);
    inc.target = subcomplex(k, outer);
    for (long i = 0; i <= inc.source.top(); ++i) {
        auto in = inner.at(i);
        auto out = outer.at(i);
        auto m = GroupRingMatrix::zero(k.g, (long)out.size(), (long)in.size());
        for (long c = 0; c < (long)in.size(); ++c) {
            auto pos = std::find(out.begin(), out.end(), in[c]);
            if (pos == out.end()) throw Error("nested inclusion: inner marker leaves the outer one");
            m.at(pos - out.begin(), c) = GroupRingElement::basis(k.g, k.g->identity);
        }
        inc.f.push_back(m);
    }
    return inc;
}

inline std::vector<std::string> validate_chain_map(const ChainMapData& f, bool check_aug) {
    std::vector<std::string> issues;
    if (!same_group(f.source.g, f.target.g)) issues.push_back("map: groups differ");
    for (long i = 0; i <= f.bound(); ++i) {
        if (f.f[i].rows != f.target.rank(i) || f.f[i].cols != f.source.rank(i))
            issues.push_back("map: degree " + std::to_string(i) + " has the wrong shape");
    }
    if (!issues.empty()) return issues;
    for (long i = 1; i <= f.bound(); ++i) {
        auto lhs = gr_compose(f.target.diff(i), f.f[i]);
        auto rhs = gr_compose(f.map(i - 1), f.source.diff(i));
        if (lhs != rhs) issues.push_back("map: square at degree " + std::to_string(i) +
                                         " does not commute");
    }
    if (check_aug) {
        if (!f.source.has_aug || !f.target.has_aug) {
            issues.push_back("map: augmentation requested but a side is not augmented");
            return issues;
        }
        for (long j = 0; j < f.source.rank(0); ++j) {
            Int s = 0;
            for (long i = 0; i < f.target.rank(0); ++i)
                s += f.target.aug_of_element(f.f[0].at(i, j), i);
            if (s != f.source.aug[j]) {
                issues.push_back("map: augmentation not preserved");
                break;
            }
        }
    }
    return issues;
}

// h[i]: source_i -> target_{i+1}
struct ChainHomotopyData {
    std::vector<GroupRingMatrix> h;

    long bound() const { return (long)h.size() - 1; }
    GroupRingMatrix map(long i, const ChainComplex& src, const ChainComplex& tgt) const {
        if (i >= 0 && i <= bound()) return h[i];
        return GroupRingMatrix::zero(tgt.g, tgt.rank(i + 1), src.rank(i));
    }
};

// witnesses f - g = d h + h d on degrees 0..range
inline std::vector<std::string> validate_homotopy(const ChainMapData& f, const ChainMapData& g,
                                                  const ChainHomotopyData& h, long range) {
    std::vector<std::string> issues;
    for (long i = 0; i <= range; ++i) {
        auto lhs = f.map(i) - g.map(i);
        auto rhs = gr_compose(f.target.diff(i + 1), h.map(i, f.source, f.target));
        if (i >= 1)
            rhs = rhs + gr_compose(h.map(i - 1, f.source, f.target), f.source.diff(i));
        if (lhs != rhs)
            issues.push_back("homotopy: law fails at degree " + std::to_string(i));
    }
    return issues;
}

// Cone(f)_n = target_n (+) source_{n-1} with differential [[d, f],[0, -d]].
struct MappingCone {
    ChainComplex cone;
    std::vector<GroupRingMatrix> incl; // target_n -> cone_n
    std::vector<GroupRingMatrix> proj; // cone_n -> source_{n-1}
};

inline MappingCone mapping_cone(const ChainMapData& f) {
    const auto& L = f.source;
    const auto& K = f.target;
    if (!same_group(L.g, K.g)) throw Error("mapping_cone: groups differ");
    MappingCone c;
    c.cone.g = K.g;
    long top = std::max(K.top(), L.top() + 1);
    for (long n = 0; n <= top; ++n) c.cone.ranks.push_back(K.rank(n) + L.rank(n - 1));
    c.cone.d.resize(top + 1, GroupRingMatrix::zero(K.g, 0, 0));
    for (long n = 1; n <= top; ++n) {
        auto dn = GroupRingMatrix::zero(K.g, c.cone.rank(n - 1), c.cone.rank(n));
        auto dk = K.diff(n);
        auto fl = f.map(n - 1);
        auto dl = L.diff(n - 1);
        for (long i = 0; i < K.rank(n - 1); ++i) {
            for (long j = 0; j < K.rank(n); ++j) dn.at(i, j) = dk.at(i, j);
            for (long j = 0; j < L.rank(n - 1); ++j) dn.at(i, K.rank(n) + j) = fl.at(i, j);
        }
        for (long i = 0; i < L.rank(n - 2); ++i)
            for (long j = 0; j < L.rank(n - 1); ++j)
                dn.at(K.rank(n - 1) + i, K.rank(n) + j) = -dl.at(i, j);
        c.cone.d[n] = dn;
    }
    for (long n = 0; n <= top; ++n) {
        auto inc = GroupRingMatrix::zero(K.g, c.cone.rank(n), K.rank(n));
        for (long i = 0; i < K.rank(n); ++i)
            inc.at(i, i) = GroupRingElement::basis(K.g, K.g->identity);
        c.incl.push_back(inc);
        auto pr = GroupRingMatrix::zero(K.g, L.rank(n - 1), c.cone.rank(n));
        for (long i = 0; i < L.rank(n - 1); ++i)
            pr.at(i, K.rank(n) + i) = GroupRingElement::basis(K.g, K.g->identity);
        c.proj.push_back(pr);
    }
    require_valid(c.cone, "mapping_cone");
    return c;
}

// Cyl(t)_n = target_n (+) source_n (+) source_{n-1},
// d(a, b, c) = (d a + t c, d b - c, -d c).
struct MappingCylinder {
    ChainComplex cyl;
    ChainMapData source_inclusion; // source -> cyl, middle block
    ChainMapData target_inclusion; // target -> cyl, first block
    ChainMapData retraction;       // cyl -> target, (a,b,c) -> a + t b
    SubcomplexMarker source_marker;
};

inline MappingCylinder algebraic_mapping_cylinder(const ChainMapData& t) {
    const auto& K = t.source;
    const auto& P = t.target;
    if (!same_group(K.g, P.g)) throw Error("cylinder: groups differ");
    auto issues = validate_chain_map(t, false);
    if (!issues.empty()) throw Error("cylinder: " + issues.front());
    MappingCylinder c;
    c.cyl.g = K.g;
    long top = std::max(P.top(), K.top() + 1);
    for (long n = 0; n <= top; ++n)
        c.cyl.ranks.push_back(P.rank(n) + K.rank(n) + K.rank(n - 1));
    c.cyl.d.resize(top + 1, GroupRingMatrix::zero(K.g, 0, 0));
    auto ident = GroupRingElement::basis(K.g, K.g->identity);
    for (long n = 1; n <= top; ++n) {
        long r0 = P.rank(n - 1), r1 = K.rank(n - 1), c0 = P.rank(n), c1 = K.rank(n);
        auto dn = GroupRingMatrix::zero(K.g, c.cyl.rank(n - 1), c.cyl.rank(n));
        auto dp = P.diff(n);
        auto dk = K.diff(n);
        auto dk1 = K.diff(n - 1);
        auto tn1 = t.map(n - 1);
        for (long i = 0; i < r0; ++i) {
            for (long j = 0; j < c0; ++j) dn.at(i, j) = dp.at(i, j);
            for (long j = 0; j < K.rank(n - 1); ++j) dn.at(i, c0 + c1 + j) = tn1.at(i, j);
        }
        for (long i = 0; i < r1; ++i) {
            for (long j = 0; j < c1; ++j) dn.at(r0 + i, c0 + j) = dk.at(i, j);
            if (i < K.rank(n - 1)) dn.at(r0 + i, c0 + c1 + i) = -ident;
        }
        for (long i = 0; i < K.rank(n - 2); ++i)
            for (long j = 0; j < K.rank(n - 1); ++j)
                dn.at(r0 + r1 + i, c0 + c1 + j) = -dk1.at(i, j);
        c.cyl.d[n] = dn;
    }
    if (P.has_aug && K.has_aug) {
        c.cyl.has_aug = true;
        c.cyl.aug = P.aug;
        c.cyl.aug.insert(c.cyl.aug.end(), K.aug.begin(), K.aug.end());
    }

    c.source_inclusion.source = K;
    c.source_inclusion.target = c.cyl;
    c.target_inclusion.source = P;
    c.target_inclusion.target = c.cyl;
    c.retraction.source = c.cyl;
    c.retraction.target = P;
    for (long n = 0; n <= K.top(); ++n) {
        auto inc = GroupRingMatrix::zero(K.g, c.cyl.rank(n), K.rank(n));
        for (long i = 0; i < K.rank(n); ++i) inc.at(P.rank(n) + i, i) = ident;
        c.source_inclusion.f.push_back(inc);
    }
    for (long n = 0; n <= P.top(); ++n) {
        auto inc = GroupRingMatrix::zero(K.g, c.cyl.rank(n), P.rank(n));
        for (long i = 0; i < P.rank(n); ++i) inc.at(i, i) = ident;
        c.target_inclusion.f.push_back(inc);
    }
    for (long n = 0; n <= top; ++n) {
        auto r = GroupRingMatrix::zero(K.g, P.rank(n), c.cyl.rank(n));
        for (long i = 0; i < P.rank(n); ++i) r.at(i, i) = ident;
        auto tn = t.map(n);
        for (long i = 0; i < P.rank(n); ++i)
            for (long j = 0; j < K.rank(n); ++j) r.at(i, P.rank(n) + j) = tn.at(i, j);
        c.retraction.f.push_back(r);
    }
    for (long n = 0; n <= K.top(); ++n) {
        std::vector<long> idx(K.rank(n));
        for (long i = 0; i < K.rank(n); ++i) idx[i] = P.rank(n) + i;
        c.source_marker.marked.push_back(idx);
    }
    require_valid(c.cyl, "cylinder");
    return c;
}

inline ChainComplex quotient_complex(const ChainComplex& k, const SubcomplexMarker& m) {
    {
        auto issues = validate_marker(k, m);
        if (!issues.empty()) throw Error("quotient: " + issues.front());
    }
    ChainComplex q;
    q.g = k.g;
    std::vector<std::vector<long>> keep(k.top() + 1);
    for (long i = 0; i <= k.top(); ++i) {
        for (long v = 0; v < k.rank(i); ++v)
            if (!m.contains(i, v)) keep[i].push_back(v);
        q.ranks.push_back((long)keep[i].size());
    }
    q.d.resize(k.top() + 1, GroupRingMatrix::zero(k.g, 0, 0));
    for (long i = 1; i <= k.top(); ++i) {
        auto sub = GroupRingMatrix::zero(k.g, (long)keep[i - 1].size(), (long)keep[i].size());
        for (long a = 0; a < (long)keep[i - 1].size(); ++a)
            for (long b = 0; b < (long)keep[i].size(); ++b)
                sub.at(a, b) = k.d[i].at(keep[i - 1][a], keep[i][b]);
        q.d[i] = sub;
    }
    require_valid(q, "quotient");
    return q;
}

// Free resolution shadow of a group presentation: one 0-cell, a 1-cell per
// generator with d1 = g - 1, a 2-cell per relator with the Fox jacobian.
// Relator words list letters as +-(index+1).
inline ChainComplex presentation_complex(const GroupPtr& g, const std::vector<long>& images,
                                         const std::vector<std::vector<long>>& relators) {
    for (long v : images)
        if (v < 0 || v >= g->order) throw Error("presentation: generator image out of range");
    ChainComplex k;
    k.g = g;
    k.ranks = {1, (long)images.size(), (long)relators.size()};
    k.d.resize(3, GroupRingMatrix::zero(g, 0, 0));
    k.has_aug = true;
    k.aug = {Int(1)};

    auto d1 = GroupRingMatrix::zero(g, 1, (long)images.size());
    for (long j = 0; j < (long)images.size(); ++j) {
        d1.at(0, j).c[images[j]] += 1;
        d1.at(0, j).c[g->identity] -= 1;
    }
    k.d[1] = d1;

    auto d2 = GroupRingMatrix::zero(g, (long)images.size(), (long)relators.size());
    for (long r = 0; r < (long)relators.size(); ++r) {
        long prefix = g->identity;
        for (long letter : relators[r]) {
            long j = letter > 0 ? letter - 1 : -letter - 1;
            if (letter == 0 || j >= (long)images.size())
                throw Error("presentation: bad letter in relator");
            if (letter > 0) {
                d2.at(j, r).c[prefix] += 1;
                prefix = g->op(prefix, images[j]);
            } else {
                prefix = g->op(prefix, g->inverse(images[j]));
                d2.at(j, r).c[prefix] -= 1;
            }
        }
        if (prefix != g->identity)
            throw Error("presentation: relator " + std::to_string(r) +
                        " does not evaluate to the identity");
    }
    k.d[2] = d2;
    require_valid(k, "presentation");
    return k;
}

// Re-index a complex over the source of u; entries pull back along u.
inline GroupRingElement restrict_scalars_element(const GroupIso& u, const GroupRingElement& z) {
    auto r = GroupRingElement::zero(u.source);
    for (long s = 0; s < u.source->order; ++s) r.c[s] = z.c[u.map[s]];
    return r;
}

inline GroupRingMatrix restrict_scalars_matrix(const GroupIso& u, const GroupRingMatrix& m) {
    auto r = GroupRingMatrix::zero(u.source, m.rows, m.cols);
    for (long i = 0; i < m.rows; ++i)
        for (long j = 0; j < m.cols; ++j) r.at(i, j) = restrict_scalars_element(u, m.at(i, j));
    return r;
}

inline ChainComplex restrict_scalars_complex(const GroupIso& u, const ChainComplex& k) {
    if (!same_group(u.target, k.g)) throw Error("restrict_scalars: group mismatch");
    ChainComplex r = k;
    r.g = u.source;
    for (long i = 1; i <= k.top(); ++i) r.d[i] = restrict_scalars_matrix(u, k.d[i]);
    return r;
}

inline ChainMapData restrict_scalars_chain_map(const GroupIso& u, const ChainMapData& f) {
    ChainMapData r;
    r.source = restrict_scalars_complex(u, f.source);
    r.target = restrict_scalars_complex(u, f.target);
    for (const auto& m : f.f) r.f.push_back(restrict_scalars_matrix(u, m));
    return r;
}

} // namespace kinv
