#pragma once

#include <kinv/chain_complex.hpp>
#include <kinv/pi_module.hpp>

namespace kinv {

// Homology in one degree along with the data needed to project cycles onto
// generator coordinates. cycle_basis columns are a saturated basis of the
// flattened cycle lattice; the module relations express the boundary image.
struct HomologyData {
    long degree = 0;
    PiModule module;
    IntMatrix cycle_basis;

    std::vector<Int> project(const std::vector<Int>& flat_cycle) const {
        if ((long)flat_cycle.size() != cycle_basis.rows())
            throw Error("homology: cycle length mismatch");
        IntMatrix b((long)flat_cycle.size(), 1);
        for (long i = 0; i < b.rows(); ++i) b.at(i, 0) = flat_cycle[i];
        auto y = solve_integer_system(cycle_basis, b);
        if (!y) throw Error("homology: vector is not a cycle");
        return y->col(0);
    }

    IntMatrix project_columns(const IntMatrix& cycles) const {
        auto y = solve_integer_system(cycle_basis, cycles);
        if (!y) throw Error("homology: columns are not cycles");
        return *y;
    }
};

inline HomologyData homology(const ChainComplex& k, long degree, bool reduced = false) {
    if (degree < 0) throw Error("homology: negative degree");
    const long n = k.g->order;
    HomologyData h;
    h.degree = degree;

    IntMatrix z;
    if (degree == 0) {
        if (reduced) {
            if (!k.has_aug) throw Error("homology: reduced degree zero needs an augmentation");
            z = kernel_basis(k.aug_row());
        } else {
            z = IntMatrix::identity(k.rank(0) * n);
        }
    } else {
        z = kernel_basis(flatten(k.diff(degree)));
    }
    IntMatrix b = flatten(k.diff(degree + 1));

    h.cycle_basis = z;
    h.module.g = k.g;
    h.module.gens = z.cols();
    auto w = solve_integer_system(z, b);
    if (!w) throw Error("homology: boundaries do not lie in the cycle lattice");
    h.module.relations = *w;
    h.module.action.assign(n, IntMatrix());
    h.module.action[k.g->identity] = IntMatrix::identity(z.cols());
    for (long s = 0; s < n; ++s) {
        if (s == k.g->identity) continue;
        auto p = regular_action(k.g, GroupRingElement::basis(k.g, s), k.rank(degree));
        auto a = solve_integer_system(z, p * z);
        if (!a) throw Error("homology: cycle lattice is not stable under the action");
        h.module.action[s] = *a;
    }
    return h;
}

inline bool is_acyclic_below(const ChainComplex& k, long q) {
    if (!k.has_aug) throw Error("is_acyclic_below: needs an augmented complex");
    for (long i = 0; i < q; ++i)
        if (!module_is_trivial(homology(k, i, i == 0).module)) return false;
    return true;
}

// ---- equivariant cochains ----
//
// A cochain on C_n with values in the module M assigns to each basis element a
// vector over M's generators; the value matrix is M.gens x rank. Equivariant
// extension is implicit: c(z e_j) = action(z) c(e_j).

// value matrix of c o m for m: D -> C and c a cochain on C
inline IntMatrix compose_cochain(const IntMatrix& cvals, const GroupRingMatrix& m,
                                 const PiModule& mod) {
    if (cvals.cols() != m.rows) throw Error("compose_cochain: rank mismatch");
    IntMatrix out(cvals.rows(), m.cols);
    for (long k = 0; k < m.cols; ++k)
        for (long j = 0; j < m.rows; ++j) {
            const auto& z = m.at(j, k);
            if (z.is_zero()) continue;
            auto a = mod.action_of(z);
            for (long i = 0; i < cvals.rows(); ++i) {
                Int s = 0;
                for (long l = 0; l < cvals.rows(); ++l) s += a.at(i, l) * cvals.at(l, j);
                out.at(i, k) += s;
            }
        }
    return out;
}

// column-major vectorization used by the cochain lattice computations
inline std::vector<Int> cochain_to_vector(const IntMatrix& vals) {
    std::vector<Int> v(vals.rows() * vals.cols());
    for (long j = 0; j < vals.cols(); ++j)
        for (long i = 0; i < vals.rows(); ++i) v[j * vals.rows() + i] = vals.at(i, j);
    return v;
}

inline IntMatrix cochain_from_vector(const std::vector<Int>& v, long gens, long rank) {
    if ((long)v.size() != gens * rank) throw Error("cochain: vector length mismatch");
    IntMatrix m(gens, rank);
    for (long j = 0; j < rank; ++j)
        for (long i = 0; i < gens; ++i) m.at(i, j) = v[j * gens + i];
    return m;
}

// matrix of precomposition with m: cochains on C (rank m.rows) -> cochains on
// D (rank m.cols), both vectorized column-major with g = mod.gens
inline IntMatrix precomposition_matrix(const GroupRingMatrix& m, const PiModule& mod) {
    const long g = mod.gens;
    IntMatrix t(g * m.cols, g * m.rows);
    for (long k = 0; k < m.cols; ++k)
        for (long j = 0; j < m.rows; ++j) {
            const auto& z = m.at(j, k);
            if (z.is_zero()) continue;
            auto a = mod.action_of(z);
            for (long i = 0; i < g; ++i)
                for (long l = 0; l < g; ++l) t.at(k * g + i, j * g + l) = t.at(k * g + i, j * g + l) + a.at(i, l);
        }
    return t;
}

// block diagonal embedding of the relation lattice at every basis position
inline IntMatrix relation_block(const PiModule& mod, long rank) {
    const long g = mod.gens, r = mod.relations.cols();
    IntMatrix big(g * rank, r * rank);
    for (long p = 0; p < rank; ++p)
        for (long i = 0; i < g; ++i)
            for (long j = 0; j < r; ++j) big.at(p * g + i, p * r + j) = mod.relations.at(i, j);
    return big;
}

// H^n(C; M) for equivariant cochains. factors lists the invariant factor of
// each generator (0 = infinite order); generators carry representative value
// matrices for the factors != 1.
struct CohomologyGroup {
    std::vector<Int> factors;
    std::vector<IntMatrix> generators;
    std::vector<Int> nontrivial_factors() const {
        std::vector<Int> out;
        for (const auto& f : factors)
            if (f != 1) out.push_back(f);
        return out;
    }
};

inline CohomologyGroup cohomology_of_complex(const ChainComplex& k, long n, const PiModule& mod) {
    const long g = mod.gens;
    const long rn = k.rank(n);
    // cocycles: kernel of (precompose with d_{n+1}) modulo relations
    auto t = precomposition_matrix(k.diff(n + 1), mod);
    auto rel_up = relation_block(mod, k.rank(n + 1));
    auto zc_full = kernel_basis(IntMatrix::hstack(t, rel_up));
    // keep only the cochain block of each kernel vector; those columns generate
    // the cocycle lattice but need not be independent, so extract a basis of
    // the lattice they span (not its saturation) from an SNF
    IntMatrix cand(g * rn, zc_full.cols());
    for (long j = 0; j < zc_full.cols(); ++j)
        for (long i = 0; i < g * rn; ++i) cand.at(i, j) = zc_full.at(i, j);
    auto dec = smith_normal_form(cand);
    IntMatrix zbasis(g * rn, dec.rank);
    {
        // U^{-1} columns scaled by the diagonal span the image lattice
        auto uinv = solve_integer_system(dec.U, IntMatrix::identity(dec.U.rows()));
        if (!uinv) throw Error("cohomology: U not invertible");
        for (long r = 0; r < dec.rank; ++r)
            for (long i = 0; i < g * rn; ++i) zbasis.at(i, r) = uinv->at(i, r) * dec.S.at(r, r);
    }
    // coboundaries (and relation shifts) expressed in that basis
    auto s = precomposition_matrix(k.diff(n), mod);
    auto rel_here = relation_block(mod, rn);
    auto cob = IntMatrix::hstack(s, rel_here);
    auto w = solve_integer_system(zbasis, cob);
    if (!w) throw Error("cohomology: coboundaries are not cocycles");
    auto pres = cokernel_presentation(*w);
    CohomologyGroup out;
    auto uinv = solve_integer_system(pres.projection, IntMatrix::identity(pres.projection.rows()));
    if (!uinv) throw Error("cohomology: projection not invertible");
    for (long i = 0; i < (long)pres.factors.size(); ++i) {
        if (pres.factors[i] == 1) continue;
        out.factors.push_back(pres.factors[i]);
        std::vector<Int> coords = uinv->col(i);
        std::vector<Int> flat(g * rn, 0);
        for (long j = 0; j < zbasis.cols(); ++j)
            for (long r = 0; r < g * rn; ++r) flat[r] += zbasis.at(r, j) * coords[j];
        out.generators.push_back(cochain_from_vector(flat, g, rn));
    }
    return out;
}

} // namespace kinv
