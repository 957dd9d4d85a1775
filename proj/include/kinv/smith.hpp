#pragma once

#include <kinv/int_matrix.hpp>

#include <optional>

namespace kinv {

// U * M * V == S with U, V unimodular, S diagonal, nonnegative,
// d1 | d2 | ... and zeros trailing.
struct SmithDecomposition {
    IntMatrix U, S, V;
    long rank = 0;

    std::vector<Int> diagonal() const {
        std::vector<Int> d(std::min(S.rows(), S.cols()));
        for (long i = 0; i < (long)d.size(); ++i) d[i] = S.at(i, i);
        return d;
    }
};

namespace detail {

// euclidean quotient: a - q*b in [0, |b|)
inline Int eucl_quot(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (r < 0) q += (b > 0 ? -1 : 1);
    return q;
}

} // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
    SmithDecomposition d;
    d.S = m;
    d.U = IntMatrix::identity(m.rows());
    d.V = IntMatrix::identity(m.cols());
    IntMatrix& S = d.S;
    const long n = std::min(m.rows(), m.cols());

    for (long t = 0; t < n; ++t) {
        for (;;) {
            // deterministic pivot: smallest |value|, ties broken by lowest (row, col)
            long pi = -1, pj = -1;
            for (long i = t; i < S.rows(); ++i)
                for (long j = t; j < S.cols(); ++j) {
                    if (S.at(i, j) == 0) continue;
                    if (pi < 0 || abs_int(S.at(i, j)) < abs_int(S.at(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) break; // submatrix zero
            if (pi != t) { S.swap_rows(t, pi); d.U.swap_rows(t, pi); }
            if (pj != t) { S.swap_cols(t, pj); d.V.swap_cols(t, pj); }

            bool dirty = false;
            for (long i = t + 1; i < S.rows(); ++i) {
                if (S.at(i, t) == 0) continue;
                Int q = detail::eucl_quot(S.at(i, t), S.at(t, t));
                S.row_axpy(i, t, q);
                d.U.row_axpy(i, t, q);
                if (S.at(i, t) != 0) dirty = true;
            }
            if (dirty) continue;
            for (long j = t + 1; j < S.cols(); ++j) {
                if (S.at(t, j) == 0) continue;
                Int q = detail::eucl_quot(S.at(t, j), S.at(t, t));
                S.col_axpy(j, t, q);
                d.V.col_axpy(j, t, q);
                if (S.at(t, j) != 0) dirty = true;
            }
            if (dirty) continue;
            // enforce divisibility of the remaining submatrix by the pivot
            long bi = -1, bj = -1;
            for (long i = t + 1; i < S.rows() && bi < 0; ++i)
                for (long j = t + 1; j < S.cols(); ++j)
                    if (S.at(i, j) % S.at(t, t) != 0) { bi = i; bj = j; break; }
            if (bi >= 0) {
                S.row_axpy(t, bi, Int(-1));
                d.U.row_axpy(t, bi, Int(-1));
                continue;
            }
            break;
        }
        if (t < S.rows() && t < S.cols() && S.at(t, t) < 0) {
            S.negate_row(t);
            d.U.negate_row(t);
        }
        if (t < S.rows() && t < S.cols() && S.at(t, t) == 0) break;
    }

    for (long i = 0; i < n; ++i)
        if (S.at(i, i) != 0) ++d.rank;

    if (d.U * m * d.V != S) throw Error("smith_normal_form: decomposition identity violated");
    return d;
}

// Particular solution of A X = B with free coordinates pinned to zero,
// so the output is canonical for the given decomposition.
inline std::optional<IntMatrix> solve_integer_system(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw Error("solve_integer_system: row mismatch");
    auto d = smith_normal_form(a);
    IntMatrix c = d.U * b;
    IntMatrix y(a.cols(), b.cols());
    const long n = std::min(a.rows(), a.cols());
    for (long k = 0; k < b.cols(); ++k) {
        for (long i = 0; i < a.rows(); ++i) {
            if (i < n && d.S.at(i, i) != 0) {
                if (c.at(i, k) % d.S.at(i, i) != 0) return std::nullopt;
                y.at(i, k) = c.at(i, k) / d.S.at(i, i);
            } else if (c.at(i, k) != 0) {
                return std::nullopt;
            }
        }
    }
    return d.V * y;
}

// Saturated kernel lattice basis: columns span ker(A) over Z exactly.
inline IntMatrix kernel_basis(const IntMatrix& a) {
    auto d = smith_normal_form(a);
    return d.V.col_range(d.rank, a.cols());
}

// coker(A) = Z^rows / column span. factors has length rows: the invariant
// factor chain padded with zeros for the free part; projection rewrites an
// ambient vector in quotient generator coordinates.
struct CokernelPresentation {
    std::vector<Int> factors;
    IntMatrix projection;

    bool is_trivial() const {
        for (const auto& f : factors)
            if (f != 1) return false;
        return true;
    }
};

inline CokernelPresentation cokernel_presentation(const IntMatrix& a) {
    auto d = smith_normal_form(a);
    CokernelPresentation p;
    p.factors.resize(a.rows());
    const long n = std::min(a.rows(), a.cols());
    for (long i = 0; i < a.rows(); ++i) p.factors[i] = i < n ? d.S.at(i, i) : Int(0);
    p.projection = d.U;
    return p;
}

} // namespace kinv
