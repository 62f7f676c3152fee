#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace legendre {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

struct LLLResult {
    IntMatrix basis;     // reduced rows
    IntMatrix transform; // unimodular, basis = transform * input
    std::vector<Real> gso_norms;
};

namespace detail {

inline void check_shape(const IntMatrix& B)
{
    if (B.empty())
        throw input_error("lll: empty basis");
    for (const auto& r : B)
        if (r.size() != B[0].size())
            throw input_error("lll: rows of unequal length");
}

} // namespace detail

// Fraction-free Gaussian elimination.
inline int exact_rank(IntMatrix A)
{
    detail::check_shape(A);
    const std::size_t n = A.size(), m = A[0].size();
    Integer prev(1);
    int rank = 0;
    for (std::size_t col = 0; col < m && static_cast<std::size_t>(rank) < n; ++col) {
        std::size_t piv = rank;
        while (piv < n && A[piv][col] == 0)
            ++piv;
        if (piv == n)
            continue;
        std::swap(A[piv], A[rank]);
        for (std::size_t i = rank + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j < m; ++j)
                A[i][j] = (A[rank][col] * A[i][j] - A[i][col] * A[rank][j]) / prev;
            A[i][col] = 0;
        }
        prev = A[rank][col];
        ++rank;
    }
    return rank;
}

inline Integer dot(const IntVector& a, const IntVector& b)
{
    Integer s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline Integer determinant(IntMatrix A)
{
    const std::size_t n = A.size();
    if (n == 0 || A[0].size() != n)
        throw input_error("determinant: matrix must be square");
    Integer prev(1);
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && A[piv][k] == 0)
            ++piv;
        if (piv == n)
            return Integer(0);
        if (piv != k) {
            std::swap(A[piv], A[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]) / prev;
            A[i][k] = 0;
        }
        prev = A[k][k];
    }
    return sign * A[n - 1][n - 1];
}

// LLL with an exact integer basis and Gram matrix and floating Gram-Schmidt
// data (Schnorr-Euchner), Lovasz parameter delta.
inline LLLResult lll_reduce(const IntMatrix& B0, double delta = 0.99)
{
    detail::check_shape(B0);
    const std::size_t n = B0.size();
    if (exact_rank(B0) < static_cast<int>(n))
        throw rank_error("lll: rows are linearly dependent");

    std::size_t maxbits = 1;
    for (const auto& r : B0)
        for (const auto& x : r)
            if (x != 0)
                maxbits = std::max<std::size_t>(maxbits, bmp::msb(bmp::abs(x)) + 1);
    const unsigned prec10 = static_cast<unsigned>(
        std::max<std::size_t>(precision::digits(), (2 * maxbits + 4 * n + 64) * 30103 / 100000 + 1));
    auto mk = [&](long v) {
        Real r(0, prec10);
        mpfr_set_si(r.backend().data(), v, MPFR_RNDN);
        return r;
    };
    auto from_int = [&](const Integer& z) {
        Real r(0, prec10);
        mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
        return r;
    };
    auto to_int = [&](const Real& x) {
        Integer z;
        mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDN);
        return z;
    };

    LLLResult res;
    IntMatrix& b = res.basis;
    IntMatrix& U = res.transform;
    b = B0;
    U.assign(n, IntVector(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i)
        U[i][i] = 1;

    std::vector<std::vector<Real>> mu(n, std::vector<Real>(n, mk(0))), r(n, std::vector<Real>(n, mk(0)));
    std::vector<Real> Bs(n, mk(0));
    const Real eta = mk(51) / mk(100);
    const Real dl = from_int(Integer(static_cast<long>(std::lround(delta * 1000000)))) / mk(1000000);

    auto gso_row = [&](std::size_t k) {
        for (std::size_t j = 0; j <= k; ++j) {
            Real s = from_int(dot(b[k], b[j]));
            for (std::size_t i = 0; i < j; ++i)
                s -= mu[j][i] * r[k][i];
            r[k][j] = s;
            if (j < k)
                mu[k][j] = s / Bs[j];
        }
        Bs[k] = r[k][k];
    };

    gso_row(0);
    std::size_t k = 1;
    long iterations = 0;
    const long cap = 2000000;
    while (k < n) {
        if (++iterations > cap)
            throw resource_error("lll: iteration cap reached");
        gso_row(k);
        for (int pass = 0;; ++pass) {
            bool reduced = false;
            for (std::size_t j = k; j-- > 0;) {
                if (bmp::abs(mu[k][j]) <= eta)
                    continue;
                Integer X = to_int(mu[k][j]);
                for (std::size_t c = 0; c < b[k].size(); ++c)
                    b[k][c] -= X * b[j][c];
                for (std::size_t c = 0; c < n; ++c)
                    U[k][c] -= X * U[j][c];
                Real Xr = from_int(X);
                for (std::size_t i = 0; i < j; ++i)
                    mu[k][i] -= Xr * mu[j][i];
                mu[k][j] -= Xr;
                reduced = true;
            }
            if (!reduced)
                break;
            // Large multipliers lose floating accuracy: recompute from the exact Gram data.
            gso_row(k);
            if (pass > 200)
                throw resource_error("lll: size reduction does not settle");
        }
        if (Bs[k] >= (dl - mu[k][k - 1] * mu[k][k - 1]) * Bs[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            std::swap(U[k], U[k - 1]);
            if (k == 1) {
                gso_row(0);
            } else {
                --k;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        Real g = bmp::sqrt(Bs[i]);
        res.gso_norms.push_back(Real(g));
    }
    return res;
}

} // namespace legendre
