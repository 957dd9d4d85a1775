#include <catch2/catch_amalgamated.hpp>

#include <kinv/smith.hpp>

#include <functional>
#include <random>

using namespace kinv;

namespace {

// Independent oracle: determinantal divisors. d_1*...*d_k equals the gcd of
// all k x k minors, so the SNF diagonal can be cross-checked without running
// any elimination.
Int minor_det(const IntMatrix& m, const std::vector<long>& ri, const std::vector<long>& ci) {
    const long k = (long)ri.size();
    if (k == 0) return 1;
    Int acc = 0;
    std::vector<long> sub(ci.begin() + 1, ci.end());
    for (long p = 0; p < k; ++p) {
        std::vector<long> rr;
        for (long q = 0; q < k; ++q)
            if (q != p) rr.push_back(ri[q]);
        Int c = m.at(ri[p], ci[0]) * minor_det(m, rr, sub);
        if (p % 2 == 0) acc += c; else acc -= c;
    }
    return acc;
}

void all_subsets(long n, long k, std::vector<std::vector<long>>& out) {
    std::vector<long> cur;
    std::function<void(long)> rec = [&](long start) {
        if ((long)cur.size() == k) { out.push_back(cur); return; }
        for (long i = start; i <= n - (k - (long)cur.size()); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

std::vector<Int> determinantal_divisor_diagonal(const IntMatrix& m) {
    const long r = std::min(m.rows(), m.cols());
    std::vector<Int> g(r + 1);
    g[0] = 1;
    for (long k = 1; k <= r; ++k) {
        std::vector<std::vector<long>> rs, cs;
        all_subsets(m.rows(), k, rs);
        all_subsets(m.cols(), k, cs);
        Int acc = 0;
        for (const auto& ri : rs)
            for (const auto& ci : cs) {
                Int d = minor_det(m, ri, ci);
                acc = gcd_int(acc, d);
            }
        g[k] = acc;
    }
    std::vector<Int> diag(r);
    for (long k = 1; k <= r; ++k) {
        if (g[k] == 0) diag[k - 1] = 0;
        else diag[k - 1] = g[k] / g[k - 1];
    }
    return diag;
}

IntMatrix random_matrix(std::mt19937_64& rng, long maxdim, long maxabs) {
    std::uniform_int_distribution<long> dim(0, maxdim);
    long r = dim(rng), c = dim(rng);
    std::uniform_int_distribution<long> val(-maxabs, maxabs);
    IntMatrix m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j)
            m.at(i, j) = val(rng);
    return m;
}

// Brute-force solution search for A x = b over a coefficient box.
bool box_has_solution(const IntMatrix& a, const std::vector<Int>& b, long box) {
    const long n = a.cols();
    std::vector<Int> x(n, -box);
    if (n == 0) {
        for (const auto& v : b)
            if (v != 0) return false;
        return true;
    }
    while (true) {
        bool ok = true;
        for (long i = 0; i < a.rows() && ok; ++i) {
            Int s = 0;
            for (long j = 0; j < n; ++j) s += a.at(i, j) * x[j];
            ok = (s == b[i]);
        }
        if (ok) return true;
        long j = 0;
        while (j < n && x[j] == box) { x[j] = -box; ++j; }
        if (j == n) return false;
        ++x[j];
    }
}

} // namespace

TEST_CASE("smith normal form on pinned inputs") {
    SECTION("empty") {
        auto d = smith_normal_form(IntMatrix(0, 0));
        CHECK(d.S.rows() == 0);
        CHECK(d.S.cols() == 0);
        CHECK(d.rank == 0);
    }
    SECTION("identity") {
        auto d = smith_normal_form(IntMatrix::identity(3));
        CHECK(d.S == IntMatrix::identity(3));
        CHECK(d.rank == 3);
    }
    SECTION("2x2 full rank") {
        auto m = IntMatrix::from_rows({{2, 4}, {6, 8}});
        auto d = smith_normal_form(m);
        CHECK(d.S.at(0, 0) == 2);
        CHECK(d.S.at(1, 1) == 4);
        CHECK(d.U * m * d.V == d.S);
        CHECK(det(d.U) * det(d.U) == 1);
        CHECK(det(d.V) * det(d.V) == 1);
    }
    SECTION("divisibility normalization") {
        auto d = smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}));
        CHECK(d.S.at(0, 0) == 1);
        CHECK(d.S.at(1, 1) == 6);
    }
    SECTION("rank deficient") {
        auto d = smith_normal_form(IntMatrix::from_rows({{1, 2}, {2, 4}}));
        CHECK(d.S.at(0, 0) == 1);
        CHECK(d.S.at(1, 1) == 0);
        CHECK(d.rank == 1);
    }
    SECTION("zero matrix") {
        auto d = smith_normal_form(IntMatrix(2, 3));
        CHECK(d.S == IntMatrix(2, 3));
        CHECK(d.rank == 0);
    }
    SECTION("negative pivot made nonnegative") {
        auto d = smith_normal_form(IntMatrix::from_rows({{-2}}));
        CHECK(d.S.at(0, 0) == 2);
    }
    SECTION("large entries stay exact") {
        IntMatrix m(2, 2);
        Int big = Int(1) << 40;
        m.at(0, 0) = big;
        m.at(0, 1) = 1;
        m.at(1, 0) = 1;
        m.at(1, 1) = big;
        auto d = smith_normal_form(m);
        CHECK(d.S.at(0, 0) == 1);
        CHECK(d.S.at(1, 1) == (big * big - 1));
    }
    SECTION("deterministic") {
        auto m = IntMatrix::from_rows({{3, 1, -4}, {0, 2, 7}});
        auto d1 = smith_normal_form(m);
        auto d2 = smith_normal_form(m);
        CHECK(d1.U == d2.U);
        CHECK(d1.S == d2.S);
        CHECK(d1.V == d2.V);
    }
}

TEST_CASE("smith normal form vs determinantal divisors") {
    std::mt19937_64 rng(20260813);
    for (int trial = 0; trial < 60; ++trial) {
        auto m = random_matrix(rng, 4, 6);
        auto d = smith_normal_form(m);
        INFO("trial " << trial << " dims " << m.rows() << "x" << m.cols());
        CHECK(d.U * m * d.V == d.S);
        if (d.U.rows() > 0) CHECK(det(d.U) * det(d.U) == 1);
        if (d.V.rows() > 0) CHECK(det(d.V) * det(d.V) == 1);
        auto oracle = determinantal_divisor_diagonal(m);
        for (long k = 0; k < (long)oracle.size(); ++k)
            CHECK(d.S.at(k, k) == oracle[k]);
        // chain condition and trailing zeros
        for (long k = 0; k + 1 < std::min(m.rows(), m.cols()); ++k) {
            if (d.S.at(k, k) == 0) CHECK(d.S.at(k + 1, k + 1) == 0);
            else if (d.S.at(k + 1, k + 1) != 0) CHECK(d.S.at(k + 1, k + 1) % d.S.at(k, k) == 0);
        }
    }
}

TEST_CASE("integer system solving") {
    SECTION("unique") {
        auto x = solve_integer_system(IntMatrix::from_rows({{6}}), IntMatrix::from_rows({{12}}));
        REQUIRE(x.has_value());
        CHECK(x->at(0, 0) == 2);
    }
    SECTION("indivisible") {
        CHECK_FALSE(solve_integer_system(IntMatrix::from_rows({{6}}), IntMatrix::from_rows({{4}})).has_value());
    }
    SECTION("underdetermined is canonical and deterministic") {
        auto a = IntMatrix::from_rows({{1, 2}, {2, 4}});
        auto b = IntMatrix::from_rows({{1}, {2}});
        auto x1 = solve_integer_system(a, b);
        auto x2 = solve_integer_system(a, b);
        REQUIRE(x1.has_value());
        CHECK(a * *x1 == b);
        CHECK(*x1 == *x2);
    }
    SECTION("inconsistent") {
        auto a = IntMatrix::from_rows({{1, 2}, {2, 4}});
        auto b = IntMatrix::from_rows({{1}, {3}});
        CHECK_FALSE(solve_integer_system(a, b).has_value());
    }
    SECTION("multi column right hand side") {
        auto a = IntMatrix::from_rows({{2, 0}, {0, 3}});
        auto b = IntMatrix::from_rows({{4, -2}, {9, 0}});
        auto x = solve_integer_system(a, b);
        REQUIRE(x.has_value());
        CHECK(a * *x == b);
    }
    SECTION("zero columns") {
        auto a = IntMatrix(2, 0);
        CHECK(solve_integer_system(a, IntMatrix(2, 1)).has_value());
        auto b = IntMatrix::from_rows({{1}, {0}});
        CHECK_FALSE(solve_integer_system(a, b).has_value());
    }
}

TEST_CASE("integer solving vs box search") {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<long> val(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_matrix(rng, 3, 3);
        std::vector<Int> b(a.rows());
        IntMatrix bm(a.rows(), 1);
        for (long i = 0; i < a.rows(); ++i) {
            b[i] = val(rng);
            bm.at(i, 0) = b[i];
        }
        auto x = solve_integer_system(a, bm);
        INFO("trial " << trial);
        if (x.has_value()) {
            CHECK(a * *x == bm);
        } else {
            CHECK_FALSE(box_has_solution(a, b, 4));
        }
    }
}

TEST_CASE("kernel basis") {
    SECTION("full rank square has empty kernel") {
        auto k = kernel_basis(IntMatrix::from_rows({{2, 0}, {0, 3}}));
        CHECK(k.rows() == 2);
        CHECK(k.cols() == 0);
    }
    SECTION("rank one") {
        auto a = IntMatrix::from_rows({{1, 2}, {2, 4}});
        auto k = kernel_basis(a);
        REQUIRE(k.cols() == 1);
        CHECK((a * k).is_zero());
        // saturation: (2,-1) generates the kernel lattice, so it must be
        // an integer multiple of the basis column (and vice versa).
        IntMatrix target(2, 1);
        target.at(0, 0) = 2;
        target.at(1, 0) = -1;
        auto c = solve_integer_system(k, target);
        REQUIRE(c.has_value());
        CHECK((c->at(0, 0) == 1 || c->at(0, 0) == -1));
    }
    SECTION("zero map") {
        auto k = kernel_basis(IntMatrix(0, 3));
        CHECK(k.cols() == 3);
        CHECK(k.rows() == 3);
    }
    SECTION("zero columns") {
        auto k = kernel_basis(IntMatrix(3, 0));
        CHECK(k.rows() == 0);
        CHECK(k.cols() == 0);
    }
}

TEST_CASE("kernel saturation vs box search") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_matrix(rng, 3, 4);
        auto k = kernel_basis(a);
        CHECK((a * k).is_zero());
        // every boxed kernel vector must be an integer combination of the basis
        const long n = a.cols();
        if (n == 0 || n > 3) continue;
        std::vector<Int> x(n, -2);
        while (true) {
            bool inker = true;
            for (long i = 0; i < a.rows() && inker; ++i) {
                Int s = 0;
                for (long j = 0; j < n; ++j) s += a.at(i, j) * x[j];
                inker = (s == 0);
            }
            if (inker) {
                IntMatrix xm(n, 1);
                for (long j = 0; j < n; ++j) xm.at(j, 0) = x[j];
                auto c = solve_integer_system(k, xm);
                INFO("trial " << trial);
                CHECK(c.has_value());
            }
            long j = 0;
            while (j < n && x[j] == 2) { x[j] = -2; ++j; }
            if (j == n) break;
            ++x[j];
        }
    }
}

TEST_CASE("cokernel presentation") {
    SECTION("finite quotient with normalization") {
        auto p = cokernel_presentation(IntMatrix::from_rows({{2, 0}, {0, 3}}));
        REQUIRE(p.factors.size() == 2);
        CHECK(p.factors[0] == 1);
        CHECK(p.factors[1] == 6);
    }
    SECTION("cyclic") {
        auto p = cokernel_presentation(IntMatrix::from_rows({{2}}));
        REQUIRE(p.factors.size() == 1);
        CHECK(p.factors[0] == 2);
    }
    SECTION("free") {
        auto p = cokernel_presentation(IntMatrix(2, 3));
        REQUIRE(p.factors.size() == 2);
        CHECK(p.factors[0] == 0);
        CHECK(p.factors[1] == 0);
    }
    SECTION("mixed") {
        auto p = cokernel_presentation(IntMatrix::from_rows({{1, 2}, {2, 4}}));
        REQUIRE(p.factors.size() == 2);
        CHECK(p.factors[0] == 1);
        CHECK(p.factors[1] == 0);
    }
    SECTION("projection maps ambient vectors to quotient coordinates") {
        auto a = IntMatrix::from_rows({{2, 0}, {0, 3}});
        auto p = cokernel_presentation(a);
        // image columns must die in the quotient
        for (long j = 0; j < a.cols(); ++j) {
            auto v = p.projection * a.col_matrix(j);
            for (long i = 0; i < v.rows(); ++i) {
                if (p.factors[i] == 0) CHECK(v.at(i, 0) == 0);
                else CHECK(v.at(i, 0) % p.factors[i] == 0);
            }
        }
    }
}

TEST_CASE("determinant") {
    CHECK(det(IntMatrix::identity(4)) == 1);
    CHECK(det(IntMatrix::from_rows({{2, 4}, {6, 8}})) == -8);
    CHECK(det(IntMatrix(0, 0)) == 1);
    CHECK(det(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 0);
}
