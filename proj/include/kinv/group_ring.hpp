#pragma once

#include <kinv/group.hpp>
#include <kinv/smith.hpp>

#include <optional>
#include <random>

namespace kinv {

struct GroupRingElement {
    GroupPtr g;
    std::vector<Int> c; // coefficient per group element index

    static GroupRingElement zero(const GroupPtr& g) {
        GroupRingElement e;
        e.g = g;
        e.c.assign(g->order, 0);
        return e;
    }
    static GroupRingElement basis(const GroupPtr& g, long idx) {
        auto e = zero(g);
        e.c.at(idx) = 1;
        return e;
    }

    bool is_zero() const {
        for (const auto& v : c)
            if (v != 0) return false;
        return true;
    }

    Int aug() const {
        Int s = 0;
        for (const auto& v : c) s += v;
        return s;
    }

    GroupRingElement operator+(const GroupRingElement& o) const {
        auto r = *this;
        for (long k = 0; k < g->order; ++k) r.c[k] += o.c[k];
        return r;
    }
    GroupRingElement operator-(const GroupRingElement& o) const {
        auto r = *this;
        for (long k = 0; k < g->order; ++k) r.c[k] -= o.c[k];
        return r;
    }
    GroupRingElement operator-() const {
        auto r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }
    GroupRingElement operator*(const GroupRingElement& o) const {
        auto r = zero(g);
        for (long a = 0; a < g->order; ++a) {
            if (c[a] == 0) continue;
            for (long b = 0; b < g->order; ++b)
                if (o.c[b] != 0) r.c[g->op(a, b)] += c[a] * o.c[b];
        }
        return r;
    }
    GroupRingElement operator*(const Int& s) const {
        auto r = *this;
        for (auto& v : r.c) v *= s;
        return r;
    }
    bool operator==(const GroupRingElement& o) const { return c == o.c; }
    bool operator!=(const GroupRingElement& o) const { return c != o.c; }
};

// Matrix over Z[pi] encoding a homomorphism of free left modules
// Z[pi]^cols -> Z[pi]^rows. Column j is the image of basis vector e_j; since
// scalars act on the left, entries multiply images on the right and composites
// pick up entries in reversed order (see gr_compose).
struct GroupRingMatrix {
    GroupPtr g;
    long rows = 0, cols = 0;
    std::vector<GroupRingElement> e; // row major

    static GroupRingMatrix zero(const GroupPtr& g, long rows, long cols) {
        GroupRingMatrix m;
        m.g = g;
        m.rows = rows;
        m.cols = cols;
        m.e.assign(rows * cols, GroupRingElement::zero(g));
        return m;
    }
    static GroupRingMatrix identity(const GroupPtr& g, long n) {
        auto m = zero(g, n, n);
        for (long i = 0; i < n; ++i) m.at(i, i) = GroupRingElement::basis(g, g->identity);
        return m;
    }

    GroupRingElement& at(long i, long j) {
        range_check(i, j);
        return e[i * cols + j];
    }
    const GroupRingElement& at(long i, long j) const {
        range_check(i, j);
        return e[i * cols + j];
    }

    bool is_zero() const {
        for (const auto& v : e)
            if (!v.is_zero()) return false;
        return true;
    }

    GroupRingMatrix operator+(const GroupRingMatrix& o) const {
        shape_check(o);
        auto r = *this;
        for (size_t k = 0; k < e.size(); ++k) r.e[k] = e[k] + o.e[k];
        return r;
    }
    GroupRingMatrix operator-(const GroupRingMatrix& o) const {
        shape_check(o);
        auto r = *this;
        for (size_t k = 0; k < e.size(); ++k) r.e[k] = e[k] - o.e[k];
        return r;
    }
    GroupRingMatrix operator-() const {
        auto r = *this;
        for (auto& v : r.e) v = -v;
        return r;
    }
    bool operator==(const GroupRingMatrix& o) const {
        return rows == o.rows && cols == o.cols && e == o.e;
    }
    bool operator!=(const GroupRingMatrix& o) const { return !(*this == o); }

    void range_check(long i, long j) const {
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw Error("GroupRingMatrix: index out of range");
    }
    void shape_check(const GroupRingMatrix& o) const {
        if (rows != o.rows || cols != o.cols || !same_group(g, o.g))
            throw Error("GroupRingMatrix: shape or group mismatch");
    }
};

// Composite "a after b": (a o b)_ik = sum_j b_jk * a_ij.
inline GroupRingMatrix gr_compose(const GroupRingMatrix& a, const GroupRingMatrix& b) {
    if (a.cols != b.rows || !same_group(a.g, b.g))
        throw Error("gr_compose: shape or group mismatch");
    auto r = GroupRingMatrix::zero(a.g, a.rows, b.cols);
    for (long i = 0; i < a.rows; ++i)
        for (long k = 0; k < b.cols; ++k) {
            auto acc = GroupRingElement::zero(a.g);
            for (long j = 0; j < a.cols; ++j) {
                if (b.at(j, k).is_zero() || a.at(i, j).is_zero()) continue;
                acc = acc + b.at(j, k) * a.at(i, j);
            }
            r.at(i, k) = acc;
        }
    return r;
}

// Regular representation: basis element gamma*e_j gets flat index j*|pi| + gamma.
// flatten(m)[(i,delta),(j,gamma)] is the delta coefficient of gamma * m_ij.
inline IntMatrix flatten(const GroupRingMatrix& m) {
    const long n = m.g->order;
    IntMatrix f(m.rows * n, m.cols * n);
    for (long i = 0; i < m.rows; ++i)
        for (long j = 0; j < m.cols; ++j) {
            const auto& z = m.at(i, j);
            for (long gamma = 0; gamma < n; ++gamma)
                for (long s = 0; s < n; ++s) {
                    if (z.c[s] == 0) continue;
                    f.at(i * n + m.g->op(gamma, s), j * n + gamma) = z.c[s];
                }
        }
    return f;
}

// Only the images of the module basis vectors e_j (the gamma = identity
// columns of flatten); these columns determine the matrix.
inline IntMatrix basis_columns(const GroupRingMatrix& m) {
    const long n = m.g->order;
    IntMatrix f(m.rows * n, m.cols);
    for (long i = 0; i < m.rows; ++i)
        for (long j = 0; j < m.cols; ++j)
            for (long s = 0; s < n; ++s) f.at(i * n + s, j) = m.at(i, j).c[s];
    return f;
}

inline GroupRingMatrix group_ring_matrix_from_basis_columns(const GroupPtr& g, long rows, long cols,
                                                            const IntMatrix& f) {
    if (f.rows() != rows * g->order || f.cols() != cols)
        throw Error("from_basis_columns: shape mismatch");
    auto m = GroupRingMatrix::zero(g, rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            for (long s = 0; s < g->order; ++s) m.at(i, j).c[s] = f.at(i * g->order + s, j);
    return m;
}

// Z-linear action of a ring element on a flattened rank-r module vector.
inline IntMatrix regular_action(const GroupPtr& g, const GroupRingElement& z, long rank) {
    const long n = g->order;
    IntMatrix p(rank * n, rank * n);
    for (long j = 0; j < rank; ++j)
        for (long gamma = 0; gamma < n; ++gamma)
            for (long s = 0; s < n; ++s)
                if (z.c[s] != 0) p.at(j * n + g->op(s, gamma), j * n + gamma) = z.c[s];
    return p;
}

// Solve a o x = b for an equivariant x. Flattening reduces this to an integer
// system over the basis-image columns; any integer solution re-bundles into a
// group ring matrix because those columns determine an equivariant map.
inline std::optional<GroupRingMatrix> solve_equivariant(const GroupRingMatrix& a,
                                                        const GroupRingMatrix& b) {
    if (a.rows != b.rows || !same_group(a.g, b.g))
        throw Error("solve_equivariant: shape or group mismatch");
    auto y = solve_integer_system(flatten(a), basis_columns(b));
    if (!y) return std::nullopt;
    auto x = group_ring_matrix_from_basis_columns(a.g, a.cols, b.cols, *y);
    if (gr_compose(a, x) != b) throw Error("solve_equivariant: re-bundled solution fails");
    return x;
}

// Same, but the particular solution is shifted by a random kernel element of
// the flattened system; used to exercise choice independence.
inline std::optional<GroupRingMatrix> solve_equivariant_random(const GroupRingMatrix& a,
                                                               const GroupRingMatrix& b,
                                                               std::mt19937_64& rng,
                                                               long amplitude) {
    if (a.rows != b.rows || !same_group(a.g, b.g))
        throw Error("solve_equivariant: shape or group mismatch");
    auto fa = flatten(a);
    auto y = solve_integer_system(fa, basis_columns(b));
    if (!y) return std::nullopt;
    auto ker = kernel_basis(fa);
    std::uniform_int_distribution<long> coef(-amplitude, amplitude);
    for (long j = 0; j < y->cols(); ++j)
        for (long k = 0; k < ker.cols(); ++k) {
            Int c = coef(rng);
            if (c == 0) continue;
            for (long i = 0; i < y->rows(); ++i) y->at(i, j) += c * ker.at(i, k);
        }
    auto x = group_ring_matrix_from_basis_columns(a.g, a.cols, b.cols, *y);
    if (gr_compose(a, x) != b) throw Error("solve_equivariant: randomized solution fails");
    return x;
}

} // namespace kinv
