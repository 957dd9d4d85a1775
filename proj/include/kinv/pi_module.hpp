#pragma once

#include <kinv/group_ring.hpp>

#include <string>
#include <vector>

namespace kinv {

// Finitely presented module over Z[pi]: coker of the relation matrix as an
// abelian group, with one integer matrix per group element for the action.
struct PiModule {
    GroupPtr g;
    long gens = 0;
    IntMatrix relations;            // gens x nrel, columns are relators
    std::vector<IntMatrix> action;  // indexed by group element

    static PiModule zero(const GroupPtr& g) {
        PiModule m;
        m.g = g;
        m.gens = 0;
        m.relations = IntMatrix(0, 0);
        m.action.assign(g->order, IntMatrix(0, 0));
        return m;
    }

    // Z with the trivial action
    static PiModule integers(const GroupPtr& g) {
        PiModule m;
        m.g = g;
        m.gens = 1;
        m.relations = IntMatrix(1, 0);
        m.action.assign(g->order, IntMatrix::identity(1));
        return m;
    }

    bool is_zero_element(const std::vector<Int>& x) const {
        if ((long)x.size() != gens) throw Error("PiModule: element length mismatch");
        IntMatrix xm(gens, 1);
        for (long i = 0; i < gens; ++i) xm.at(i, 0) = x[i];
        return solve_integer_system(relations, xm).has_value();
    }

    bool elements_equal(const std::vector<Int>& x, const std::vector<Int>& y) const {
        std::vector<Int> d(x.size());
        for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
        return is_zero_element(d);
    }

    // every column of m must die in the quotient
    bool is_zero_matrix(const IntMatrix& m) const {
        if (m.rows() != gens) throw Error("PiModule: matrix height mismatch");
        return solve_integer_system(relations, m).has_value();
    }

    IntMatrix action_of(const GroupRingElement& z) const {
        IntMatrix a(gens, gens);
        for (long s = 0; s < g->order; ++s)
            if (z.c[s] != 0) a = a + action[s] * z.c[s];
        return a;
    }
};

inline bool module_is_trivial(const PiModule& m) {
    if (m.gens == 0) return true;
    return cokernel_presentation(m.relations).is_trivial();
}

inline std::vector<std::string> validate_pi_module(const PiModule& m) {
    std::vector<std::string> issues;
    if (!m.g) return {"module: missing group"};
    if ((long)m.action.size() != m.g->order) {
        issues.push_back("module: action table length differs from group order");
        return issues;
    }
    if (m.relations.rows() != m.gens) issues.push_back("module: relation matrix height mismatch");
    for (long s = 0; s < m.g->order; ++s)
        if (m.action[s].rows() != m.gens || m.action[s].cols() != m.gens)
            issues.push_back("module: action of element " + std::to_string(s) + " has wrong shape");
    if (!issues.empty()) return issues;
    if (m.action[m.g->identity] != IntMatrix::identity(m.gens))
        issues.push_back("module: identity does not act as the identity matrix");
    // relations must be stable under the action
    for (long s = 0; s < m.g->order; ++s)
        if (!m.is_zero_matrix(m.action[s] * m.relations))
            issues.push_back("module: action of element " + std::to_string(s) +
                             " does not preserve the relation lattice");
    if (!issues.empty()) return issues;
    for (long a = 0; a < m.g->order; ++a)
        for (long b = 0; b < m.g->order; ++b)
            if (!m.is_zero_matrix(m.action[a] * m.action[b] - m.action[m.g->op(a, b)]))
                issues.push_back("module: action violates the group law at (" + std::to_string(a) +
                                 "," + std::to_string(b) + ")");
    return issues;
}

// Module map given on generators; optionally twisted by a group isomorphism u,
// meaning F(gamma x) = u(gamma) F(x).
struct PiModuleHom {
    PiModule source, target;
    IntMatrix matrix; // target.gens x source.gens
    std::optional<GroupIso> twist;

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if ((long)x.size() != source.gens) throw Error("PiModuleHom: element length mismatch");
        std::vector<Int> y(target.gens, 0);
        for (long i = 0; i < target.gens; ++i)
            for (long j = 0; j < source.gens; ++j) y[i] += matrix.at(i, j) * x[j];
        return y;
    }
};

inline std::vector<std::string> validate_pi_module_hom(const PiModuleHom& f) {
    std::vector<std::string> issues;
    if (f.matrix.rows() != f.target.gens || f.matrix.cols() != f.source.gens)
        return {"hom: matrix shape mismatch"};
    if (f.twist) {
        if (!same_group(f.twist->source, f.source.g) || !same_group(f.twist->target, f.target.g))
            issues.push_back("hom: twist endpoints do not match the modules");
    } else if (!same_group(f.source.g, f.target.g)) {
        issues.push_back("hom: modules live over different groups and no twist was given");
    }
    if (!issues.empty()) return issues;
    if (!f.target.is_zero_matrix(f.matrix * f.source.relations))
        issues.push_back("hom: relations of the source do not map into the target lattice");
    for (long s = 0; s < f.source.g->order; ++s) {
        long s2 = f.twist ? f.twist->map[s] : s;
        if (!f.target.is_zero_matrix(f.matrix * f.source.action[s] - f.target.action[s2] * f.matrix))
            issues.push_back("hom: not equivariant at element " + std::to_string(s));
    }
    return issues;
}

inline PiModuleHom identity_hom(const PiModule& m) {
    PiModuleHom f;
    f.source = m;
    f.target = m;
    f.matrix = IntMatrix::identity(m.gens);
    return f;
}

inline PiModuleHom zero_hom(const PiModule& src, const PiModule& tgt) {
    PiModuleHom f;
    f.source = src;
    f.target = tgt;
    f.matrix = IntMatrix(tgt.gens, src.gens);
    return f;
}

// Restriction of scalars along u: source-group module structure on a module
// over the target group.
inline PiModule restrict_scalars_module(const GroupIso& u, const PiModule& m) {
    if (!same_group(u.target, m.g)) throw Error("restrict_scalars: group mismatch");
    PiModule r = m;
    r.g = u.source;
    r.action.assign(u.source->order, IntMatrix());
    for (long s = 0; s < u.source->order; ++s) r.action[s] = m.action[u.map[s]];
    return r;
}

} // namespace kinv
