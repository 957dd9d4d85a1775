#pragma once

// Randomized property suites shared by the check command and the acceptance
// run. Each suite returns the empty string when every trial passes, or a
// short description of the first counterexample.

#include <kinv/extension.hpp>
#include <kinv/models.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace kinv::checks {

namespace detail {

inline std::string describe(const models::RandomInstance& inst, long trial, const char* what) {
    std::ostringstream os;
    os << what << " failed on trial " << trial << ": group order " << inst.x.g->order << ", ranks";
    for (long r : inst.x.ranks) os << ' ' << r;
    os << ", marked counts";
    for (long i = 0; i <= inst.x.top(); ++i) os << ' ' << inst.marker.count(i);
    return os.str();
}

inline ChainMapData instance_lift(const ChainComplex& x, std::mt19937_64* rng = nullptr) {
    auto res = build_resolution(x.g, 5);
    return lift_augmented_map(x, res, 3, rng);
}

inline ExtensionData self_problem(const ChainComplex& x, const SubcomplexMarker& m,
                                  const ChainMapData& t, const PiModuleHom& F) {
    ExtensionData in;
    in.k = x;
    in.lmark = m;
    in.t = t;
    in.kp = x;
    in.lpmark = m;
    in.tp = t;
    auto l = subcomplex(x, m);
    in.h = identity_chain_map(l);
    std::vector<GroupRingMatrix> zeros;
    for (long i = 0; i <= 2; ++i)
        zeros.push_back(GroupRingMatrix::zero(x.g, t.target.rank(i + 1), l.rank(i)));
    in.psi = zeros;
    in.F = F;
    return in;
}

// Bounded random search for an extension of an obstructed problem: sample
// augmented chain maps (lifts with randomized slack) and test the three map
// conditions. The class comparison is left out on purpose, it would reject
// every candidate without exercising f.
inline bool some_candidate_extends(const ExtensionData& in, std::mt19937_64& rng, long samples) {
    for (long s = 0; s < samples; ++s) {
        ChainMapData f;
        try {
            f = lift_augmented_map(in.k, in.kp, 3, &rng, (long)(rng() % 3));
        } catch (const Error&) {
            continue;
        }
        if (verify_extension_map(in, f).ok) return true;
    }
    return false;
}

} // namespace detail

// Re-running the construction with randomized interior choices never moves
// the class.
inline std::string well_defined(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        auto inst = models::random_instance(rng);
        auto t = detail::instance_lift(inst.x);
        auto base = k_invariant(inst.x, inst.marker, t);
        for (long rerun = 0; rerun < 20; ++rerun) {
            auto again = k_invariant(inst.x, inst.marker, t, &rng, 2 + (long)(rng() % 2));
            if (!classes_equal(base, again)) return detail::describe(inst, trial, "well-definedness");
        }
    }
    return {};
}

// Classes computed against independent lifts into different resolutions
// match after transport along a comparison map.
inline std::string independence_of_t(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        auto inst = models::random_instance(rng);
        auto res1 = build_resolution(inst.x.g, 5);
        auto res2 = build_resolution(inst.x.g, 6);
        auto t1 = lift_augmented_map(inst.x, res1, 3, &rng);
        auto t2 = lift_augmented_map(inst.x, res2, 3, &rng);
        auto c1 = k_invariant(inst.x, inst.marker, t1);
        auto c2 = k_invariant(inst.x, inst.marker, t2);
        auto moved = transport_class(c1, *c2.datum, &rng);
        if (!classes_equal(moved, c2)) return detail::describe(inst, trial, "transport");
    }
    return {};
}

// Pulling back along nested inclusions agrees with the directly computed
// class and composes transitively through an intermediate subcomplex.
inline std::string nested_pullback(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        models::RandomInstance inst;
        inst.x = models::random_presentation_complex(rng);
        inst.marker = models::random_marker(inst.x, rng);
        auto full = SubcomplexMarker::full(inst.x);
        auto t = detail::instance_lift(inst.x, &rng);
        auto cfull = k_invariant(inst.x, full, t);
        auto cinner = k_invariant(inst.x, inst.marker, t);
        auto hdir = nested_inclusion_chain_map(inst.x, inst.marker, full);
        auto pdir = pullback_class(cfull, *cinner.datum, hdir, {});
        if (!classes_equal(pdir, cinner)) return detail::describe(inst, trial, "nested pullback");
        if (inst.marker.count(2) == 0 && inst.x.rank(2) > 0) {
            auto mid = SubcomplexMarker::skeleton(inst.x, 1);
            auto cmid = k_invariant(inst.x, mid, t);
            auto pmid = pullback_class(cfull, *cmid.datum,
                                       nested_inclusion_chain_map(inst.x, mid, full), {});
            auto via = pullback_class(pmid, *cinner.datum,
                                      nested_inclusion_chain_map(inst.x, inst.marker, mid), {});
            if (!classes_equal(via, pdir))
                return detail::describe(inst, trial, "pullback transitivity");
        }
    }
    return {};
}

// With degrees zero and one fully marked, the image of the class in the
// quotient pair homology dies.
inline std::string boundary_vanishing(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        auto inst = models::random_instance(rng, true);
        if (!boundary_vanishing_check(inst.x, inst.marker, &rng))
            return detail::describe(inst, trial, "boundary vanishing");
    }
    return {};
}

// Evaluation against degree two cohomology intertwines the class with the
// coboundary, both for integer coefficients and for the homology module
// itself.
inline std::string phi_ev_delta(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        auto inst = models::random_instance(rng);
        if (!phi_ev_delta_check(inst.x, PiModule::integers(inst.x.g), &rng))
            return detail::describe(inst, trial, "phi-ev-delta over the integers");
        if (!phi_ev_delta_check(inst.x, homology(inst.x, 2).module, &rng))
            return detail::describe(inst, trial, "phi-ev-delta over the homology module");
    }
    return {};
}

// decide_extension and verify_extension agree: produced maps verify, the
// identity problem always extends, and obstructed problems admit no map in a
// bounded random search.
inline std::string round_trip(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        auto inst = models::random_instance(rng);
        auto t = detail::instance_lift(inst.x, &rng);
        auto h2 = homology(inst.x, 2);
        for (int which = 0; which < 2; ++which) {
            auto F = which == 0 ? identity_hom(h2.module) : zero_hom(h2.module, h2.module);
            auto in = detail::self_problem(inst.x, inst.marker, t, F);
            auto rep = decide_extension(in, &rng);
            if (which == 0 && !rep.exists)
                return detail::describe(inst, trial, "identity extension");
            if (rep.exists) {
                if (!verify_extension(in, rep.f, &rng).ok)
                    return detail::describe(inst, trial, "round trip verification");
            } else if (detail::some_candidate_extends(in, rng, 25)) {
                return detail::describe(inst, trial, "obstructed problem admitted a map");
            }
        }
    }
    return {};
}

// The cylinder criterion for vanishing matches the direct coboundary test,
// and its witness maps verify.
inline std::string vanishing_criterion(unsigned long seed, long trials) {
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        auto inst = models::random_instance(rng);
        auto t = detail::instance_lift(inst.x, &rng);
        auto cls = k_invariant(inst.x, inst.marker, t);
        bool direct = classes_equal(cls, zero_class(cls));
        auto probe = vanishing_probe(inst.x, inst.marker, t, &rng);
        if (probe.report.exists != direct)
            return detail::describe(inst, trial, "vanishing criterion");
        if (probe.report.exists && !verify_extension(probe.problem, probe.report.f, &rng).ok)
            return detail::describe(inst, trial, "vanishing witness verification");
    }
    return {};
}

struct Suite {
    const char* name;
    std::string (*run)(unsigned long seed, long trials);
};

inline const std::vector<Suite>& suites() {
    static const std::vector<Suite> table = {
        {"well-defined", well_defined},
        {"independence-of-t", independence_of_t},
        {"nested-pullback", nested_pullback},
        {"boundary-vanishing", boundary_vanishing},
        {"phi-ev-delta", phi_ev_delta},
        {"round-trip", round_trip},
        {"vanishing-criterion", vanishing_criterion},
    };
    return table;
}

} // namespace kinv::checks
