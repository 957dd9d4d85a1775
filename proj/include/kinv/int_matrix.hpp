#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinv {

using Int = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int gcd_int(const Int& a, const Int& b) {
    Int g = boost::multiprecision::gcd(a, b);
    return g < 0 ? Int(-g) : g;
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// Dense integer matrix, row major. All arithmetic is exact.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(long rows, long cols) : rows_(rows), cols_(cols), a_(rows * cols) {
        if (rows < 0 || cols < 0) throw Error("IntMatrix: negative dimension");
    }

    static IntMatrix identity(long n) {
        IntMatrix m(n, n);
        for (long i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        long r = (long)rows.size();
        long c = r == 0 ? 0 : (long)rows.begin()->size();
        IntMatrix m(r, c);
        long i = 0;
        for (const auto& row : rows) {
            if ((long)row.size() != c) throw Error("IntMatrix: ragged rows");
            long j = 0;
            for (long v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    Int& at(long i, long j) {
        check(i, j);
        return a_[i * cols_ + j];
    }
    const Int& at(long i, long j) const {
        check(i, j);
        return a_[i * cols_ + j];
    }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw Error("IntMatrix: shape mismatch in product");
        IntMatrix r(rows_, o.cols_);
        for (long i = 0; i < rows_; ++i)
            for (long k = 0; k < cols_; ++k) {
                const Int& v = a_[i * cols_ + k];
                if (v == 0) continue;
                for (long j = 0; j < o.cols_; ++j) {
                    const Int& w = o.a_[k * o.cols_ + j];
                    if (w != 0) r.a_[i * o.cols_ + j] += v * w;
                }
            }
        return r;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("IntMatrix: shape mismatch in sum");
        IntMatrix r(rows_, cols_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("IntMatrix: shape mismatch in difference");
        IntMatrix r(rows_, cols_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    IntMatrix operator-() const {
        IntMatrix r(rows_, cols_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
        return r;
    }

    IntMatrix operator*(const Int& c) const {
        IntMatrix r(rows_, cols_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * c;
        return r;
    }

    IntMatrix transpose() const {
        IntMatrix r(cols_, rows_);
        for (long i = 0; i < rows_; ++i)
            for (long j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    std::vector<Int> col(long j) const {
        std::vector<Int> v(rows_);
        for (long i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    IntMatrix col_matrix(long j) const {
        IntMatrix m(rows_, 1);
        for (long i = 0; i < rows_; ++i) m.at(i, 0) = at(i, j);
        return m;
    }

    void set_col(long j, const std::vector<Int>& v) {
        if ((long)v.size() != rows_) throw Error("IntMatrix: column length mismatch");
        for (long i = 0; i < rows_; ++i) at(i, j) = v[i];
    }

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if ((long)x.size() != cols_) throw Error("IntMatrix: vector length mismatch");
        std::vector<Int> y(rows_);
        for (long i = 0; i < rows_; ++i) {
            Int s = 0;
            for (long j = 0; j < cols_; ++j)
                if (a_[i * cols_ + j] != 0 && x[j] != 0) s += a_[i * cols_ + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    // columns [j0, j1)
    IntMatrix col_range(long j0, long j1) const {
        if (j0 < 0 || j1 < j0 || j1 > cols_) throw Error("IntMatrix: bad column range");
        IntMatrix m(rows_, j1 - j0);
        for (long i = 0; i < rows_; ++i)
            for (long j = j0; j < j1; ++j) m.at(i, j - j0) = at(i, j);
        return m;
    }

    static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows() != b.rows()) throw Error("IntMatrix: hstack row mismatch");
        IntMatrix m(a.rows(), a.cols() + b.cols());
        for (long i = 0; i < a.rows(); ++i) {
            for (long j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
            for (long j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
        }
        return m;
    }

    static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols() != b.cols()) throw Error("IntMatrix: vstack column mismatch");
        IntMatrix m(a.rows() + b.rows(), a.cols());
        for (long i = 0; i < a.rows(); ++i)
            for (long j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (long i = 0; i < b.rows(); ++i)
            for (long j = 0; j < a.cols(); ++j) m.at(a.rows() + i, j) = b.at(i, j);
        return m;
    }

    void swap_rows(long i, long k) {
        for (long j = 0; j < cols_; ++j) std::swap(at(i, j), at(k, j));
    }
    void swap_cols(long j, long k) {
        for (long i = 0; i < rows_; ++i) std::swap(at(i, j), at(i, k));
    }
    // row i -= q * row k
    void row_axpy(long i, long k, const Int& q) {
        if (q == 0) return;
        for (long j = 0; j < cols_; ++j) at(i, j) -= q * at(k, j);
    }
    void col_axpy(long j, long k, const Int& q) {
        if (q == 0) return;
        for (long i = 0; i < rows_; ++i) at(i, j) -= q * at(i, k);
    }
    void negate_row(long i) {
        for (long j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
    }

private:
    void check(long i, long j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw Error("IntMatrix: index (" + std::to_string(i) + "," + std::to_string(j) +
                        ") out of range for " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    long rows_, cols_;
    std::vector<Int> a_;
};

// Fraction-free Gaussian elimination (Bareiss); exact divisions throughout.
inline Int det(IntMatrix a) {
    if (a.rows() != a.cols()) throw Error("det: matrix not square");
    const long n = a.rows();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (long k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            long p = -1;
            for (long i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (long i = k + 1; i < n; ++i) {
            for (long j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

} // namespace kinv
