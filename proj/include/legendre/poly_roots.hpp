#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "numeric.hpp"
#include "polynomial.hpp"

namespace legendre {

namespace detail {

template <class C>
struct eval_pd {
    C p, dp;
};

template <class C>
eval_pd<C> horner_pd(const std::vector<C>& a, const C& z)
{
    C p = a.back(), dp(0);
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[i];
    }
    return {p, dp};
}

template <class C>
std::vector<C> initial_circle(const std::vector<C>& a)
{
    using R = real_t<C>;
    using std::abs;
    const int n = static_cast<int>(a.size()) - 1;
    double rad = 0.0;
    double lead = static_cast<double>(abs(a.back()));
    for (int k = 0; k < n; ++k) {
        double ak = static_cast<double>(abs(a[k]));
        if (ak == 0.0)
            continue;
        rad = std::max(rad, std::pow(ak / lead, 1.0 / (n - k)));
    }
    if (!(rad > 0.0) || !std::isfinite(rad))
        rad = 1.0;
    std::vector<C> z;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * 3.14159265358979323846 * k / n + 0.4;
        z.push_back(C(R(rad * std::cos(th)), R(rad * std::sin(th))));
    }
    return z;
}

// Aberth-Ehrlich iteration, Gauss-Seidel updates. Returns true on convergence.
template <class C>
bool aberth(const std::vector<C>& a, std::vector<C>& z, int max_iter, const real_t<C>& tol)
{
    using R = real_t<C>;
    using std::abs;
    using std::sqrt;
    const std::size_t n = z.size();
    R best(-1);
    int stalled = 0;
    for (int it = 0; it < max_iter; ++it) {
        R worst(0);
        for (std::size_t i = 0; i < n; ++i) {
            auto [p, dp] = horner_pd(a, z[i]);
            if (p == C(0))
                continue;
            C ratio = p / dp;
            C s(0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    s += C(1) / (z[i] - z[j]);
            C w = ratio / (C(1) - ratio * s);
            z[i] -= w;
            R rel = abs(w) / (R(1) + abs(z[i]));
            if (rel > worst)
                worst = rel;
        }
        if (worst <= tol)
            return true;
        // At the rounding floor corrections stop shrinking; that is convergence too.
        if (best >= R(0) && worst >= best) {
            if (++stalled >= 3 && worst <= sqrt(tol))
                return true;
        } else {
            stalled = 0;
            best = worst;
        }
    }
    return false;
}

inline Real residual_scale(const std::vector<Complex>& a, const Complex& z)
{
    Real s(0), zp(1), az = abs(z);
    for (const auto& c : a) {
        s += abs(c) * zp;
        zp *= az;
    }
    return s;
}

} // namespace detail

// All complex roots with multiplicity, sorted by (re, im).
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs_in)
{
    std::vector<Complex> a = coeffs_in;
    while (!a.empty() && a.back() == Complex(0))
        a.pop_back();
    if (a.size() < 2)
        throw input_error("poly_roots: degree must be at least 1");

    std::vector<Complex> roots;
    std::size_t zeros = 0;
    while (a[zeros] == Complex(0))
        ++zeros;
    a.erase(a.begin(), a.begin() + zeros);
    roots.assign(zeros, Complex(0));

    if (a.size() > 1) {
        std::vector<Complex> z;
        std::vector<ComplexD> ad;
        bool finite = true;
        for (const auto& c : a) {
            ad.push_back(to_double(c));
            finite = finite && std::isfinite(ad.back().real()) && std::isfinite(ad.back().imag());
        }
        finite = finite && std::abs(ad.back()) > 0.0;
        if (finite) {
            auto zd = detail::initial_circle(ad);
            detail::aberth(ad, zd, 500, 1e-14);
            for (const auto& w : zd)
                z.push_back(to_hp(w));
        } else {
            z = detail::initial_circle(a);
        }
        const int D = precision::digits();
        detail::aberth(a, z, 40 + 8 * D, epsilon_hp() * 10);

        const Real tol = ten_pow(10 - D);
        for (auto& r : z) {
            Real scale = detail::residual_scale(a, r);
            if (abs(detail::horner_pd(a, r).p) <= tol * scale)
                continue;
            // Deflation-free Newton polish as fallback for stubborn roots.
            for (int it = 0; it < 200; ++it) {
                auto [p, dp] = detail::horner_pd(a, r);
                if (dp == Complex(0))
                    break;
                r -= p / dp;
                if (abs(p) <= tol * detail::residual_scale(a, r))
                    break;
            }
            if (abs(detail::horner_pd(a, r).p) > tol * detail::residual_scale(a, r))
                throw precision_error("poly_roots: root residual above tolerance at " +
                                          std::to_string(D) + " digits",
                                      2 * D);
        }
        roots.insert(roots.end(), z.begin(), z.end());
    }

    const Real snap = ten_pow(10 - precision::digits());
    for (auto& r : roots) {
        Real m = Real(1) + abs(r);
        if (bmp::abs(r.re) <= snap * m)
            r.re = 0;
        if (bmp::abs(r.im) <= snap * m)
            r.im = 0;
    }
    std::sort(roots.begin(), roots.end(), [&](const Complex& x, const Complex& y) {
        Real m = Real(1) + abs(x) + abs(y);
        if (bmp::abs(x.re - y.re) > snap * m)
            return x.re < y.re;
        return x.im < y.im;
    });
    return roots;
}

template <class T>
std::vector<Complex> poly_roots(const Polynomial<T>& p)
{
    std::vector<Complex> a;
    for (const auto& c : p.c)
        a.push_back(Polynomial<T>::template convert<Complex>(c));
    return poly_roots(a);
}

} // namespace legendre
