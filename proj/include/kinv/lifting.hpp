#pragma once

// Lifting machinery over exact complexes: free resolutions, lifts of
// augmentation preserving maps, and homotopies relative to a marked
// subcomplex. Every routine either returns data satisfying its contract or
// throws; callers never need to re-verify.

#include <kinv/chain_complex.hpp>
#include <kinv/homology.hpp>

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace kinv {

inline GroupRingMatrix gr_select_columns(const GroupRingMatrix& m, const std::vector<long>& idx) {
    auto r = GroupRingMatrix::zero(m.g, m.rows, (long)idx.size());
    for (long j = 0; j < (long)idx.size(); ++j)
        for (long i = 0; i < m.rows; ++i) r.at(i, j) = m.at(i, idx[j]);
    return r;
}

namespace detail {

// Translate of a flattened module vector by a group element on the left.
inline IntMatrix translate_flat_column(const GroupPtr& g, long rank, const IntMatrix& col,
                                       long gamma) {
    const long n = g->order;
    IntMatrix out(rank * n, 1);
    for (long j = 0; j < rank; ++j)
        for (long s = 0; s < n; ++s) {
            const Int& v = col.at(j * n + s, 0);
            if (v != 0) out.at(j * n + g->op(gamma, s), 0) += v;
        }
    return out;
}

} // namespace detail

// Free resolution of the integers over Z[pi] through the requested degree.
// Kernels are computed integrally; a greedy pass keeps a kernel vector only
// when it is not already in the Z-span of the orbits of the vectors kept so
// far. That pruning is what keeps ranks small for nonabelian groups.
inline ChainComplex build_resolution(const GroupPtr& g, long top) {
    if (top < 0) throw Error("build_resolution: negative top degree");
    const long n = g->order;
    ChainComplex res;
    res.g = g;
    res.ranks = {1};
    res.d.resize(1, GroupRingMatrix::zero(g, 0, 0));
    res.has_aug = true;
    res.aug = {Int(1)};
    for (long i = 1; i <= top; ++i) {
        IntMatrix bdry = (i == 1) ? res.aug_row() : flatten(res.d[i - 1]);
        auto z = kernel_basis(bdry);
        IntMatrix span(z.rows(), 0);
        IntMatrix chosen(z.rows(), 0);
        for (long j = 0; j < z.cols(); ++j) {
            auto v = z.col_matrix(j);
            if (solve_integer_system(span, v)) continue;
            chosen = IntMatrix::hstack(chosen, v);
            for (long gamma = 0; gamma < n; ++gamma)
                span = IntMatrix::hstack(
                    span, detail::translate_flat_column(g, res.rank(i - 1), v, gamma));
        }
        res.d.push_back(
            group_ring_matrix_from_basis_columns(g, res.rank(i - 1), chosen.cols(), chosen));
        res.ranks.push_back(chosen.cols());
    }
    require_valid(res, "build_resolution");
    return res;
}

// Lift of the identity on Z through augmented complexes: f0 solves
// aug' o f0 = aug, and degree i+1 solves d' o f = f o d. Solvable whenever
// the target is exact strictly below the bound; throws otherwise. A supplied
// generator randomizes each choice within its solution lattice.
inline ChainMapData lift_augmented_map(const ChainComplex& src, const ChainComplex& tgt,
                                       long qbound, std::mt19937_64* rng = nullptr,
                                       long amplitude = 2) {
    if (!same_group(src.g, tgt.g)) throw Error("lift: groups differ");
    if (!src.has_aug || !tgt.has_aug) throw Error("lift: both complexes must be augmented");
    if (qbound < 0) throw Error("lift: negative bound");
    ChainMapData t;
    t.source = src;
    t.target = tgt;

    auto augrow = tgt.aug_row();
    IntMatrix rhs(1, src.rank(0));
    for (long j = 0; j < src.rank(0); ++j) rhs.at(0, j) = src.aug[j];
    auto y = solve_integer_system(augrow, rhs);
    if (!y) throw Error("lift: target augmentation is not surjective enough");
    if (rng) {
        auto ker = kernel_basis(augrow);
        std::uniform_int_distribution<long> coef(-amplitude, amplitude);
        for (long j = 0; j < y->cols(); ++j)
            for (long k = 0; k < ker.cols(); ++k) {
                Int c = coef(*rng);
                if (c == 0) continue;
                for (long i = 0; i < y->rows(); ++i) y->at(i, j) += c * ker.at(i, k);
            }
    }
    t.f.push_back(group_ring_matrix_from_basis_columns(src.g, tgt.rank(0), src.rank(0), *y));

    for (long i = 1; i <= qbound; ++i) {
        auto b = gr_compose(t.f[i - 1], src.diff(i));
        auto x = rng ? solve_equivariant_random(tgt.diff(i), b, *rng, amplitude)
                     : solve_equivariant(tgt.diff(i), b);
        if (!x)
            throw Error("lift: no solution in degree " + std::to_string(i) +
                        "; target is not acyclic enough");
        t.f.push_back(*x);
    }
    return t;
}

// Homotopy between two maps a, b with common source and target, witnessing
// a - b = d h + h d on degrees 0..qbound, with the columns over marked source
// cells pinned to the supplied values. Requires the target to be exact in the
// relevant degrees; throws when a prescribed column violates the law or a
// free column has no solution.
inline ChainHomotopyData relative_homotopy(const ChainMapData& a, const ChainMapData& b,
                                           const SubcomplexMarker& marker,
                                           const std::vector<GroupRingMatrix>& prescribed,
                                           long qbound, std::mt19937_64* rng = nullptr,
                                           long amplitude = 2) {
    if (!same_group(a.target.g, b.target.g) || !same_group(a.source.g, b.source.g))
        throw Error("relative_homotopy: groups differ");
    const auto& src = a.source;
    const auto& tgt = a.target;
    ChainHomotopyData h;
    for (long i = 0; i <= qbound; ++i) {
        auto e = a.map(i) - b.map(i);
        if (i >= 1) e = e - gr_compose(h.h[i - 1], src.diff(i));
        auto marked = marker.at(i);
        auto di = tgt.diff(i + 1);
        auto hi = GroupRingMatrix::zero(tgt.g, tgt.rank(i + 1), src.rank(i));
        if (!marked.empty()) {
            if (i >= (long)prescribed.size())
                throw Error("relative_homotopy: no prescribed block for degree " +
                            std::to_string(i));
            const auto& psi = prescribed[i];
            if (psi.rows != tgt.rank(i + 1) || psi.cols != (long)marked.size())
                throw Error("relative_homotopy: prescribed block has the wrong shape");
            if (gr_compose(di, psi) != gr_select_columns(e, marked))
                throw Error("relative_homotopy: prescribed columns violate the law in degree " +
                            std::to_string(i));
            for (long j = 0; j < (long)marked.size(); ++j)
                for (long r = 0; r < tgt.rank(i + 1); ++r) hi.at(r, marked[j]) = psi.at(r, j);
        }
        std::vector<long> free;
        for (long j = 0; j < src.rank(i); ++j)
            if (!marker.contains(i, j)) free.push_back(j);
        if (!free.empty()) {
            auto efree = gr_select_columns(e, free);
            auto x = rng ? solve_equivariant_random(di, efree, *rng, amplitude)
                         : solve_equivariant(di, efree);
            if (!x)
                throw Error("relative_homotopy: no homotopy in degree " + std::to_string(i));
            for (long j = 0; j < (long)free.size(); ++j)
                for (long r = 0; r < tgt.rank(i + 1); ++r) hi.at(r, free[j]) = x->at(r, j);
        }
        h.h.push_back(hi);
    }
    return h;
}

// Decide whether a - b = d h + h d admits any solution on degrees 0..range,
// with no exactness assumption on the target. All blocks h_0..h_range are
// solved in one integer system: degreewise greedy choices can paint
// themselves into a corner when the target has homology.
inline std::optional<ChainHomotopyData> solve_chain_homotopy(const ChainMapData& a,
                                                             const ChainMapData& b, long range) {
    if (!same_group(a.target.g, b.target.g) || !same_group(a.source.g, b.source.g))
        throw Error("solve_chain_homotopy: groups differ");
    const auto& src = a.source;
    const auto& tgt = a.target;
    const long n = tgt.g->order;

    std::vector<long> colsize(range + 1), offset(range + 2, 0);
    for (long i = 0; i <= range; ++i) {
        colsize[i] = tgt.rank(i + 1) * n;
        offset[i + 1] = offset[i] + src.rank(i) * colsize[i];
    }
    std::vector<long> rowoff(range + 2, 0);
    for (long i = 0; i <= range; ++i) rowoff[i + 1] = rowoff[i] + src.rank(i) * tgt.rank(i) * n;

    IntMatrix sys(rowoff[range + 1], offset[range + 1]);
    IntMatrix rhs(rowoff[range + 1], 1);
    for (long i = 0; i <= range; ++i) {
        const long rows = tgt.rank(i) * n;
        auto e = basis_columns(a.map(i) - b.map(i));
        auto dflat = flatten(tgt.diff(i + 1));
        auto dsrc = src.diff(i);
        for (long k = 0; k < src.rank(i); ++k) {
            const long r0 = rowoff[i] + k * rows;
            for (long r = 0; r < rows; ++r) rhs.at(r0 + r, 0) = e.at(r, k);
            for (long c = 0; c < colsize[i]; ++c)
                for (long r = 0; r < rows; ++r)
                    sys.at(r0 + r, offset[i] + k * colsize[i] + c) = dflat.at(r, c);
            if (i >= 1) {
                for (long j = 0; j < src.rank(i - 1); ++j) {
                    const auto& z = dsrc.at(j, k);
                    if (z.is_zero()) continue;
                    auto act = regular_action(tgt.g, z, tgt.rank(i));
                    for (long c = 0; c < colsize[i - 1]; ++c)
                        for (long r = 0; r < rows; ++r)
                            sys.at(r0 + r, offset[i - 1] + j * colsize[i - 1] + c) += act.at(r, c);
                }
            }
        }
    }
    auto sol = solve_integer_system(sys, rhs);
    if (!sol) return std::nullopt;

    ChainHomotopyData h;
    for (long i = 0; i <= range; ++i) {
        IntMatrix block(colsize[i], src.rank(i));
        for (long k = 0; k < src.rank(i); ++k)
            for (long r = 0; r < colsize[i]; ++r)
                block.at(r, k) = sol->at(offset[i] + k * colsize[i] + r, 0);
        h.h.push_back(
            group_ring_matrix_from_basis_columns(tgt.g, tgt.rank(i + 1), src.rank(i), block));
    }
    auto issues = validate_homotopy(a, b, h, range);
    if (!issues.empty()) throw Error("solve_chain_homotopy: " + issues.front());
    return h;
}

// Comparison data between a complex and a resolution shadow of it: a lift
// alpha back from the resolution, the degree two defect phi over the marked
// subcomplex, and the partial homotopy dl with
//   alpha t i_L - i_L = d dl + dl d     (degrees 0 and 1)
//   alpha2 t2 i_L - i_L = phi + dl1 d2  (degree two, phi a 2-cycle block)
struct AlphaPhi {
    ChainMapData alpha;
    GroupRingMatrix phi;
    ChainHomotopyData dl;
};

inline AlphaPhi alpha_phi(const ChainComplex& k, const SubcomplexMarker& marker,
                          const ChainMapData& t, const ChainMapData* alpha_given = nullptr,
                          std::mt19937_64* rng = nullptr, long amplitude = 2) {
    if (t.bound() < 2) throw Error("alpha_phi: t must be defined through degree 2");
    ChainMapData alpha =
        alpha_given ? *alpha_given : lift_augmented_map(t.target, k, 2, rng, amplitude);
    if (alpha.bound() < 2) throw Error("alpha_phi: alpha must be defined through degree 2");

    auto l = subcomplex(k, marker);
    std::vector<GroupRingMatrix> incl, tl;
    for (long i = 0; i <= 2; ++i) {
        incl.push_back(inclusion_matrix(k, marker, i));
        tl.push_back(gr_compose(t.f[i], incl[i]));
    }

    auto r0 = gr_compose(alpha.f[0], tl[0]) - incl[0];
    auto d0 = rng ? solve_equivariant_random(k.diff(1), r0, *rng, amplitude)
                  : solve_equivariant(k.diff(1), r0);
    if (!d0) throw Error("alpha_phi: complex is not exact at degree 0");

    auto r1 = gr_compose(alpha.f[1], tl[1]) - incl[1] - gr_compose(*d0, l.diff(1));
    auto d1 = rng ? solve_equivariant_random(k.diff(2), r1, *rng, amplitude)
                  : solve_equivariant(k.diff(2), r1);
    if (!d1) throw Error("alpha_phi: complex is not exact at degree 1");

    auto phi = gr_compose(alpha.f[2], tl[2]) - incl[2] - gr_compose(*d1, l.diff(2));
    if (!gr_compose(k.diff(2), phi).is_zero())
        throw Error("alpha_phi: defect is not a cycle");

    AlphaPhi out{std::move(alpha), std::move(phi), {}};
    out.dl.h = {*d0, *d1};
    return out;
}

} // namespace kinv
