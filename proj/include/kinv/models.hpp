#pragma once

// Small bundled groups, cell structures, and hand rolled resolutions.
// Tests and the command line fixtures lean on these.

#include <kinv/chain_complex.hpp>
#include <kinv/smith.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

namespace kinv::models {

inline GroupPtr trivial_group() { return group_from_table(1, {{0}}); }

inline GroupPtr cyclic_group(long n) {
    std::vector<std::vector<long>> mul(n, std::vector<long>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) mul[i][j] = (i + j) % n;
    return group_from_table((long)mul.size(), mul);
}

inline GroupPtr klein_group() {
    std::vector<std::vector<long>> mul(4, std::vector<long>(4));
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j) mul[i][j] = i ^ j;
    return group_from_table((long)mul.size(), mul);
}

// Permutations of three letters in lexicographic order, identity first.
inline GroupPtr sym3_group() {
    std::vector<std::array<long, 3>> perms;
    std::array<long, 3> p = {0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    auto index_of = [&](const std::array<long, 3>& q) {
        for (size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == q) return (long)i;
        throw Error("sym3: lookup failed");
    };
    std::vector<std::vector<long>> mul(6, std::vector<long>(6));
    for (long a = 0; a < 6; ++a)
        for (long b = 0; b < 6; ++b) {
            std::array<long, 3> q;
            for (long x = 0; x < 3; ++x) q[x] = perms[a][perms[b][x]];
            mul[a][b] = index_of(q);
        }
    return group_from_table((long)mul.size(), mul);
}

// One 0-cell and one 2-cell over the trivial group.
inline ChainComplex sphere_complex() {
    auto g = trivial_group();
    ChainComplex k;
    k.g = g;
    k.ranks = {1, 0, 1};
    k.d.resize(3, GroupRingMatrix::zero(g, 0, 0));
    k.d[1] = GroupRingMatrix::zero(g, 1, 0);
    k.d[2] = GroupRingMatrix::zero(g, 0, 1);
    k.has_aug = true;
    k.aug = {Int(1)};
    require_valid(k, "sphere");
    return k;
}

// Presentation shadow of <x | x^2> over the group of order two.
inline ChainComplex rp2_complex() {
    return presentation_complex(cyclic_group(2), {1}, {{1, 1}});
}

// Sum of all group elements.
inline GroupRingElement norm_element(const GroupPtr& g) {
    auto z = GroupRingElement::zero(g);
    for (long s = 0; s < g->order; ++s) z.c[s] = 1;
    return z;
}

// Three dimensional lens shaped complex over the cyclic group of order m:
// d1 = t - 1, d2 = norm, d3 = t - 1. For m = 2 this is real projective
// 3-space.
inline ChainComplex lens_complex(long m) {
    auto g = cyclic_group(m);
    auto t = GroupRingElement::basis(g, 1 % m);
    auto one = GroupRingElement::basis(g, 0);
    ChainComplex k;
    k.g = g;
    k.ranks = {1, 1, 1, 1};
    k.d.resize(4, GroupRingMatrix::zero(g, 0, 0));
    for (long i : {1, 3}) {
        k.d[i] = GroupRingMatrix::zero(g, 1, 1);
        k.d[i].at(0, 0) = t - one;
    }
    k.d[2] = GroupRingMatrix::zero(g, 1, 1);
    k.d[2].at(0, 0) = norm_element(g);
    k.has_aug = true;
    k.aug = {Int(1)};
    require_valid(k, "lens");
    return k;
}

// Randomized example instances for the property suites. Each draw starts
// from the standard presentation of a small fixed group and may add a
// conjugated copy of a relator, a spherical 2-cell (empty relator word), or
// a free 3-cell attached along a kernel chain of d2. All draws stay acyclic
// below degree two because the presentations are genuine.

struct RandomInstance {
    ChainComplex x;
    SubcomplexMarker marker;
};

inline ChainComplex random_presentation_complex(std::mt19937_64& rng) {
    auto pick = [&](long n) { return (long)(rng() % (unsigned long)n); };
    GroupPtr g;
    std::vector<long> images;
    std::vector<std::vector<long>> relators;
    switch (pick(4)) {
        case 0: g = cyclic_group(2); images = {1}; relators = {{1, 1}}; break;
        case 1: g = cyclic_group(3); images = {1}; relators = {{1, 1, 1}}; break;
        case 2: g = cyclic_group(4); images = {1}; relators = {{1, 1, 1, 1}}; break;
        default:
            g = klein_group();
            images = {1, 2};
            relators = {{1, 1}, {2, 2}, {1, 2, 1, 2}};
            break;
    }
    if (pick(2) == 0) {
        auto base = relators[pick((long)relators.size())];
        long letter = 1 + pick((long)images.size());
        long sign = pick(2) == 0 ? 1 : -1;
        std::vector<long> w;
        w.push_back(sign * letter);
        w.insert(w.end(), base.begin(), base.end());
        w.push_back(-sign * letter);
        relators.push_back(w);
    }
    if (pick(3) == 0) relators.push_back({});
    auto x = presentation_complex(g, images, relators);
    if (pick(2) == 0) {
        auto ker = kernel_basis(flatten(x.d[2]));
        IntMatrix col(ker.rows(), 1);
        for (long j = 0; j < ker.cols(); ++j) {
            long c = pick(3) - 1;
            if (c == 0) continue;
            for (long i = 0; i < ker.rows(); ++i) col.at(i, 0) += c * ker.at(i, j);
        }
        x.ranks.push_back(1);
        x.d.push_back(group_ring_matrix_from_basis_columns(g, x.rank(2), 1, col));
        require_valid(x, "random instance");
    }
    return x;
}

// When low_degrees_full is set the draw marks degrees zero and one
// completely, as the boundary vanishing statement requires.
inline SubcomplexMarker random_marker(const ChainComplex& x, std::mt19937_64& rng,
                                      bool low_degrees_full = false) {
    auto pick = [&](long n) { return (long)(rng() % (unsigned long)n); };
    long kind = low_degrees_full ? 2 + pick(3) : pick(5);
    switch (kind) {
        case 0: return SubcomplexMarker::none();
        case 1: return SubcomplexMarker::skeleton(x, 0);
        case 2: return SubcomplexMarker::skeleton(x, 1);
        case 3: return SubcomplexMarker::full(x);
        default: {
            auto m = SubcomplexMarker::skeleton(x, 1);
            std::vector<long> two;
            for (long j = 0; j < x.rank(2); ++j)
                if (pick(2) == 0) two.push_back(j);
            m.marked.push_back(two);
            return m;
        }
    }
}

inline RandomInstance random_instance(std::mt19937_64& rng, bool low_degrees_full = false) {
    RandomInstance inst;
    inst.x = random_presentation_complex(rng);
    inst.marker = random_marker(inst.x, rng, low_degrees_full);
    return inst;
}

// The standard rank one periodic resolution for a cyclic group:
// odd differentials t - 1, even differentials the norm.
inline ChainComplex periodic_resolution(long n, long top) {
    auto g = cyclic_group(n);
    auto t = GroupRingElement::basis(g, 1 % n);
    auto one = GroupRingElement::basis(g, 0);
    ChainComplex res;
    res.g = g;
    res.ranks.assign(top + 1, 1);
    res.d.resize(top + 1, GroupRingMatrix::zero(g, 0, 0));
    for (long i = 1; i <= top; ++i) {
        res.d[i] = GroupRingMatrix::zero(g, 1, 1);
        res.d[i].at(0, 0) = (i % 2 == 1) ? (t - one) : norm_element(g);
    }
    res.has_aug = true;
    res.aug = {Int(1)};
    require_valid(res, "periodic resolution");
    return res;
}

} // namespace kinv::models
