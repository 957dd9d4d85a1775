#pragma once

// The obstruction class machinery: the degree three cocycle theta on the cone
// of t restricted to a marked subcomplex, the class it represents, equality of
// classes as an integer decision, and the functorial moves (pullback along
// cone maps, coefficient pushforward, restriction of scalars, transport
// between resolutions).

#include <kinv/chain_complex.hpp>
#include <kinv/homology.hpp>
#include <kinv/lifting.hpp>

#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace kinv {

// Everything a degree three class needs to know about where it lives.
struct ConeDatum {
    ChainComplex k;          // ambient complex, acyclic below degree 2
    SubcomplexMarker marker; // picks L inside k
    ChainComplex l;
    ChainComplex cpi;        // resolution, exact through at least degree 4
    ChainMapData t;          // k -> cpi, augmentation preserving
    ChainMapData tl;         // t restricted to L
    MappingCone cone;        // cone of tl; degree n is cpi_n (+) L_{n-1}
};

// Equivariant cochain on the cone, determined by its value matrix on basis
// elements (one column per cone basis vector, coordinates in the module).
struct ConeCochain {
    PiModule target;
    IntMatrix values;
    long degree = 3;
};

struct CohomologyClass {
    std::shared_ptr<const ConeDatum> datum;
    PiModule coeff;
    IntMatrix values; // coeff.gens x cone rank 3
};

namespace detail {

inline bool complexes_identical(const ChainComplex& a, const ChainComplex& b) {
    if (!same_group(a.g, b.g) || a.ranks != b.ranks) return false;
    for (long i = 1; i <= a.top(); ++i)
        if (a.d[i] != b.d[i]) return false;
    if (a.has_aug != b.has_aug || a.aug != b.aug) return false;
    return true;
}

inline bool modules_identical(const PiModule& a, const PiModule& b) {
    if (!same_group(a.g, b.g) || a.gens != b.gens) return false;
    if (!(a.relations == b.relations)) return false;
    for (long s = 0; s < a.g->order; ++s)
        if (!(a.action[s] == b.action[s])) return false;
    return true;
}

inline GroupRingMatrix psi_at(const std::vector<GroupRingMatrix>& psi, long i,
                              const ChainComplex& cpi, const ChainComplex& l) {
    if (i >= 0 && i < (long)psi.size()) return psi[i];
    return GroupRingMatrix::zero(cpi.g, cpi.rank(i + 1), l.rank(i));
}

} // namespace detail

inline ConeDatum make_cone_datum(const ChainComplex& k, const SubcomplexMarker& marker,
                                 const ChainMapData& t) {
    {
        auto issues = validate_marker(k, marker);
        if (!issues.empty()) throw Error("cone_datum: " + issues.front());
    }
    if (!detail::complexes_identical(t.source, k))
        throw Error("cone_datum: t does not start at the given complex");
    {
        auto issues = validate_chain_map(t, true);
        if (!issues.empty()) throw Error("cone_datum: " + issues.front());
    }
    if (t.target.top() < 4)
        throw Error("cone_datum: resolution must be available through degree 4");
    ConeDatum d;
    d.k = k;
    d.marker = marker;
    d.l = subcomplex(k, marker);
    d.cpi = t.target;
    d.t = t;
    d.tl.source = d.l;
    d.tl.target = d.cpi;
    for (long i = 0; i <= d.l.top(); ++i) {
        if (d.l.rank(i) > 0 && t.bound() < i)
            throw Error("cone_datum: t is not defined on all marked degrees");
        d.tl.f.push_back(gr_compose(t.map(i), inclusion_matrix(k, marker, i)));
    }
    d.cone = mapping_cone(d.tl);
    return d;
}

// theta = (project o alpha_2 o d3, project o phi) on cone degree 3.
// The cocycle property is verified against the cone differential.
inline ConeCochain theta(const ConeDatum& datum, const HomologyData& h2, const AlphaPhi& ap) {
    if (h2.degree != 2) throw Error("theta: coefficient data is not degree two homology");
    if (ap.phi.rows != datum.k.rank(2) || ap.phi.cols != datum.l.rank(2))
        throw Error("theta: phi has the wrong shape");
    auto vc = h2.project_columns(basis_columns(gr_compose(ap.alpha.f[2], datum.cpi.diff(3))));
    auto vl = h2.project_columns(basis_columns(ap.phi));
    ConeCochain th;
    th.target = h2.module;
    th.values = IntMatrix::hstack(vc, vl);
    th.degree = 3;
    auto rem = compose_cochain(th.values, datum.cone.cone.diff(4), th.target);
    if (!th.target.is_zero_matrix(rem)) throw Error("theta: cocycle check failed");
    return th;
}

inline CohomologyClass k_invariant(const ChainComplex& k, const SubcomplexMarker& marker,
                                   const ChainMapData& t, std::mt19937_64* rng = nullptr,
                                   long amplitude = 2) {
    if (!is_acyclic_below(k, 2)) throw Error("k_invariant: complex is not acyclic below degree 2");
    auto datum = std::make_shared<ConeDatum>(make_cone_datum(k, marker, t));
    auto h2 = homology(k, 2);
    auto ap = alpha_phi(k, marker, t, nullptr, rng, amplitude);
    auto th = theta(*datum, h2, ap);
    return CohomologyClass{datum, th.target, th.values};
}

inline CohomologyClass zero_class(const CohomologyClass& like) {
    CohomologyClass z = like;
    z.values = IntMatrix(like.coeff.gens, like.datum->cone.cone.rank(3));
    return z;
}

// Cochain gamma on cone degree 2 with a - b = gamma o d3 modulo the relation
// lattice in every column, found as one integer system with relation slack.
// Its existence is exactly equality of the classes.
inline std::optional<IntMatrix> solve_cobounding_cochain(const CohomologyClass& a,
                                                         const CohomologyClass& b) {
    if (!detail::complexes_identical(a.datum->cone.cone, b.datum->cone.cone) ||
        !detail::modules_identical(a.coeff, b.coeff))
        throw Error("classes_equal: classes live on different cones or coefficients");
    const auto& cone = a.datum->cone.cone;
    const long rank3 = cone.rank(3);
    const long rank2 = cone.rank(2);
    const long g = a.coeff.gens;
    if (a.values.rows() != g || a.values.cols() != rank3 || b.values.rows() != g ||
        b.values.cols() != rank3)
        throw Error("classes_equal: value matrix shape mismatch");
    if (g == 0 || rank3 == 0) return IntMatrix(g, rank2);
    auto diff = a.values - b.values;
    auto sys = IntMatrix::hstack(precomposition_matrix(cone.diff(3), a.coeff),
                                 relation_block(a.coeff, rank3));
    auto v = cochain_to_vector(diff);
    IntMatrix rhs((long)v.size(), 1);
    for (size_t i = 0; i < v.size(); ++i) rhs.at((long)i, 0) = v[i];
    auto sol = solve_integer_system(sys, rhs);
    if (!sol) return std::nullopt;
    std::vector<Int> head(g * rank2);
    for (long i = 0; i < g * rank2; ++i) head[i] = sol->at(i, 0);
    return cochain_from_vector(head, g, rank2);
}

inline bool classes_equal(const CohomologyClass& a, const CohomologyClass& b) {
    return solve_cobounding_cochain(a, b).has_value();
}

// Pull back along the cone map [[id, psi],[0, h]] from Cone(t_L) into the cone
// of c's datum, where h: L -> L' and psi witnesses t_L - t'_{L'} h = d psi +
// psi d through degree 2.
inline CohomologyClass pullback_class(const CohomologyClass& c, const ConeDatum& nd,
                                      const ChainMapData& h,
                                      const std::vector<GroupRingMatrix>& psi) {
    const auto& od = *c.datum;
    if (!detail::complexes_identical(nd.cpi, od.cpi))
        throw Error("pullback_class: resolutions differ");
    if (!detail::complexes_identical(h.source, nd.l) || !detail::complexes_identical(h.target, od.l))
        throw Error("pullback_class: h does not map the new subcomplex into the old one");
    {
        auto issues = validate_chain_map(h, false);
        if (!issues.empty()) throw Error("pullback_class: " + issues.front());
    }
    for (long i = 0; i <= 2; ++i) {
        auto lhs = nd.tl.map(i) - gr_compose(od.tl.map(i), h.map(i));
        auto rhs = gr_compose(nd.cpi.diff(i + 1), detail::psi_at(psi, i, nd.cpi, nd.l));
        if (i >= 1) rhs = rhs + gr_compose(detail::psi_at(psi, i - 1, nd.cpi, nd.l), nd.l.diff(i));
        if (lhs != rhs)
            throw Error("pullback_class: psi is not a homotopy at degree " + std::to_string(i));
    }
    const long nc = od.cpi.rank(3);
    IntMatrix vcpart(c.coeff.gens, nc), vlpart(c.coeff.gens, od.l.rank(2));
    for (long i = 0; i < c.coeff.gens; ++i) {
        for (long j = 0; j < nc; ++j) vcpart.at(i, j) = c.values.at(i, j);
        for (long j = 0; j < od.l.rank(2); ++j) vlpart.at(i, j) = c.values.at(i, nc + j);
    }
    auto vl = compose_cochain(vcpart, detail::psi_at(psi, 2, nd.cpi, nd.l), c.coeff) +
              compose_cochain(vlpart, h.map(2), c.coeff);
    CohomologyClass out;
    out.datum = std::make_shared<ConeDatum>(nd);
    out.coeff = c.coeff;
    out.values = IntMatrix::hstack(vcpart, vl);
    return out;
}

inline ConeDatum restrict_scalars_datum(const GroupIso& u, const ConeDatum& d) {
    ConeDatum r;
    r.k = restrict_scalars_complex(u, d.k);
    r.marker = d.marker;
    r.l = restrict_scalars_complex(u, d.l);
    r.cpi = restrict_scalars_complex(u, d.cpi);
    r.t = restrict_scalars_chain_map(u, d.t);
    r.tl = restrict_scalars_chain_map(u, d.tl);
    r.cone.cone = restrict_scalars_complex(u, d.cone.cone);
    for (const auto& m : d.cone.incl) r.cone.incl.push_back(restrict_scalars_matrix(u, m));
    for (const auto& m : d.cone.proj) r.cone.proj.push_back(restrict_scalars_matrix(u, m));
    return r;
}

inline CohomologyClass restrict_scalars_class(const GroupIso& u, const CohomologyClass& c) {
    if (!same_group(u.target, c.datum->k.g)) throw Error("restrict_scalars_class: group mismatch");
    CohomologyClass out;
    out.datum = std::make_shared<ConeDatum>(restrict_scalars_datum(u, *c.datum));
    out.coeff = restrict_scalars_module(u, c.coeff);
    out.values = c.values;
    return out;
}

// Postcompose the representative with a module map. A twisted map lands over
// the other group, so the cone is re-indexed along the inverse twist.
inline CohomologyClass pushforward_coeff(const CohomologyClass& c, const PiModuleHom& f) {
    {
        auto issues = validate_pi_module_hom(f);
        if (!issues.empty()) throw Error("pushforward_coeff: " + issues.front());
    }
    if (!detail::modules_identical(f.source, c.coeff))
        throw Error("pushforward_coeff: map does not start at the class coefficients");
    CohomologyClass out;
    if (f.twist) {
        out.datum = std::make_shared<ConeDatum>(
            restrict_scalars_datum(f.twist->inverse_iso(), *c.datum));
    } else {
        out.datum = c.datum;
    }
    out.coeff = f.target;
    out.values = f.matrix * c.values;
    return out;
}

// Move a class between resolutions of the same pair (K, L): lift a comparison
// map g from the target resolution into the source one, close it up over L
// with a homotopy, and pull back along [[g, psi],[0, id]].
inline CohomologyClass transport_class(const CohomologyClass& c, const ConeDatum& nd,
                                       std::mt19937_64* rng = nullptr, long amplitude = 2) {
    const auto& od = *c.datum;
    if (!detail::complexes_identical(nd.k, od.k) || !detail::complexes_identical(nd.l, od.l))
        throw Error("transport_class: data describe different pairs");
    auto g = lift_augmented_map(nd.cpi, od.cpi, 3, rng, amplitude);
    ChainMapData comp;
    comp.source = nd.l;
    comp.target = od.cpi;
    for (long i = 0; i <= 2; ++i) comp.f.push_back(gr_compose(g.map(i), nd.tl.map(i)));
    auto psi = relative_homotopy(comp, od.tl, SubcomplexMarker::none(), {}, 2, rng, amplitude);

    const long nb = od.cpi.rank(3);
    IntMatrix vcpart(c.coeff.gens, nb), vlpart(c.coeff.gens, od.l.rank(2));
    for (long i = 0; i < c.coeff.gens; ++i) {
        for (long j = 0; j < nb; ++j) vcpart.at(i, j) = c.values.at(i, j);
        for (long j = 0; j < od.l.rank(2); ++j) vlpart.at(i, j) = c.values.at(i, nb + j);
    }
    auto vc = compose_cochain(vcpart, g.map(3), c.coeff);
    auto vl = compose_cochain(vcpart, psi.h[2], c.coeff) + vlpart;
    CohomologyClass out;
    out.datum = std::make_shared<ConeDatum>(nd);
    out.coeff = c.coeff;
    out.values = IntMatrix::hstack(vc, vl);
    return out;
}

// Entry point for cell structures: lift t into a built resolution unless a
// map nu into a user supplied resolution is given.
inline CohomologyClass cw_k_invariant(const ChainComplex& x, const SubcomplexMarker& y,
                                      const ChainMapData* nu = nullptr,
                                      std::mt19937_64* rng = nullptr, long amplitude = 2) {
    if (!is_acyclic_below(x, 2))
        throw Error("cw_k_invariant: complex is not acyclic below degree 2");
    if (nu) return k_invariant(x, y, *nu, rng, amplitude);
    auto cpi = build_resolution(x.g, 5);
    auto t = lift_augmented_map(x, cpi, 3, rng, amplitude);
    return k_invariant(x, y, t, rng, amplitude);
}

// Value of an equivariant cochain on one flattened chain vector.
inline std::vector<Int> evaluate_cochain(const IntMatrix& vals, const PiModule& mod,
                                         const GroupPtr& g, const std::vector<Int>& flat) {
    const long n = g->order;
    if ((long)flat.size() != vals.cols() * n)
        throw Error("evaluate_cochain: vector length mismatch");
    std::vector<Int> out(vals.rows(), 0);
    for (long j = 0; j < vals.cols(); ++j)
        for (long gamma = 0; gamma < n; ++gamma) {
            const Int& cf = flat[j * n + gamma];
            if (cf == 0) continue;
            for (long i = 0; i < mod.gens; ++i) {
                Int acc = 0;
                for (long r = 0; r < mod.gens; ++r)
                    acc += mod.action[gamma].at(i, r) * vals.at(r, j);
                out[i] += cf * acc;
            }
        }
    return out;
}

// When degrees 0 and 1 are fully marked, the class pushed into the homology
// of the quotient pair must die.
inline bool boundary_vanishing_check(const ChainComplex& x, const SubcomplexMarker& y,
                                     std::mt19937_64* rng = nullptr) {
    {
        auto issues = validate_marker(x, y);
        if (!issues.empty()) throw Error("boundary_vanishing: " + issues.front());
    }
    if (y.count(0) != x.rank(0) || y.count(1) != x.rank(1))
        throw Error("boundary_vanishing: degrees 0 and 1 must be fully marked");
    auto cls = cw_k_invariant(x, y, nullptr, rng);
    auto q = quotient_complex(x, y);
    auto relh2 = homology(q, 2);
    const long n = x.g->order;
    std::vector<long> keep;
    for (long j = 0; j < x.rank(2); ++j)
        if (!y.contains(2, j)) keep.push_back(j);

    IntMatrix mat(relh2.module.gens, cls.coeff.gens);
    auto h2 = homology(x, 2);
    for (long i = 0; i < cls.coeff.gens; ++i) {
        std::vector<Int> cut((long)keep.size() * n, 0);
        for (long p = 0; p < (long)keep.size(); ++p)
            for (long s = 0; s < n; ++s) cut[p * n + s] = h2.cycle_basis.at(keep[p] * n + s, i);
        auto coords = relh2.project(cut);
        for (long r = 0; r < relh2.module.gens; ++r) mat.at(r, i) = coords[r];
    }
    PiModuleHom j{h2.module, relh2.module, mat, std::nullopt};
    {
        auto issues = validate_pi_module_hom(j);
        if (!issues.empty()) throw Error("boundary_vanishing: " + issues.front());
    }
    auto pushed = pushforward_coeff(cls, j);
    return classes_equal(pushed, zero_class(pushed));
}

// For every generator phi2 of H^2(X; A): pushing the (X, X) class along the
// map H_2 -> A induced by phi2 agrees with the class of (0, -phi2).
inline bool phi_ev_delta_check(const ChainComplex& x, const PiModule& a,
                               std::mt19937_64* rng = nullptr) {
    if (!same_group(x.g, a.g)) throw Error("phi_ev_delta: module over a different group");
    {
        auto issues = validate_pi_module(a);
        if (!issues.empty()) throw Error("phi_ev_delta: " + issues.front());
    }
    auto cls = cw_k_invariant(x, SubcomplexMarker::full(x), nullptr, rng);
    auto h2 = homology(x, 2);
    auto coh = cohomology_of_complex(x, 2, a);
    for (const auto& vals : coh.generators) {
        IntMatrix evmat(a.gens, h2.module.gens);
        for (long i = 0; i < h2.module.gens; ++i) {
            auto v = evaluate_cochain(vals, a, x.g, h2.cycle_basis.col(i));
            for (long r = 0; r < a.gens; ++r) evmat.at(r, i) = v[r];
        }
        PiModuleHom ev{h2.module, a, evmat, std::nullopt};
        {
            auto issues = validate_pi_module_hom(ev);
            if (!issues.empty()) throw Error("phi_ev_delta: " + issues.front());
        }
        auto lhs = pushforward_coeff(cls, ev);
        CohomologyClass rhs;
        rhs.datum = cls.datum;
        rhs.coeff = a;
        rhs.values = IntMatrix::hstack(IntMatrix(a.gens, cls.datum->cpi.rank(3)), -vals);
        if (!classes_equal(lhs, rhs)) return false;
    }
    return true;
}

} // namespace kinv
