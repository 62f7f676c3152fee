#pragma once

#include <cmath>
#include <vector>

#include "curve.hpp"
#include "numeric.hpp"
#include "periods.hpp"

namespace legendre {

// Carlson's symmetric integral R_F(x, y, z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z)),
// arguments off the closed negative axis (one may vanish).
template <class C>
C carlson_rf(C x, C y, C z)
{
    using R = real_t<C>;
    using std::abs;
    using std::pow;
    using std::sqrt;
    const R r = scalar_traits<C>::eps() * R(1e-2);
    C A0 = (x + y + z) / R(3);
    R q = abs(A0 - x);
    if (abs(A0 - y) > q)
        q = abs(A0 - y);
    if (abs(A0 - z) > q)
        q = abs(A0 - z);
    q *= pow(R(3) * r, R(-1) / R(6));
    C A = A0;
    const C x0 = x, y0 = y;
    R fac(1);
    for (int it = 0; q * fac >= abs(A); ++it) {
        if (it > 200)
            throw precision_error("carlson_rf: duplication did not converge");
        C sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        C lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) / R(4);
        y = (y + lam) / R(4);
        z = (z + lam) / R(4);
        A = (A + lam) / R(4);
        fac /= R(4);
    }
    C X = (A0 - x0) * fac / A;
    C Y = (A0 - y0) * fac / A;
    C Z = -(X + Y);
    C E2 = X * Y - Z * Z;
    C E3 = X * Y * Z;
    C s = C(R(1)) - E2 / R(10) + E3 / R(14) + E2 * E2 / R(24) - R(3) * E2 * E3 / R(44);
    return s / sqrt(A);
}

// +-z with exp(z) = (x, +-y): the integral of dX/(2Y) from x to infinity along a
// ray x + s*c, c an eighth root of unity chosen so that the ray stays clear of
// the branch points 0, 1, lambda.
template <class C>
C raw_elliptic_log(const C& x, const C& lambda)
{
    using R = real_t<C>;
    using std::abs;
    using std::sqrt;
    const C a[3] = {x, x - C(R(1)), x - lambda};
    const R h = R(1) / sqrt(R(2));
    const C dirs[8] = {C(R(1), R(0)), C(h, h), C(R(0), R(1)), C(-h, h),
                       C(R(-1), R(0)), C(-h, -h), C(R(0), R(-1)), C(h, -h)};
    int best = 0;
    R best_score(-1);
    for (int k = 0; k < 8; ++k) {
        R score(2);
        for (const auto& ak : a) {
            R m = abs(ak);
            if (m == R(0))
                continue;
            C b = conj(dirs[k]) * ak;
            R s = real(b) >= R(0) ? R(1) : abs(imag(b)) / m;
            if (s < score)
                score = s;
        }
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    C cc = conj(dirs[best]);
    return sqrt(cc) * carlson_rf(cc * a[0], cc * a[1], cc * a[2]);
}

// Reduced lattice data and Laurent coefficients of the Weierstrass function.
struct WeierstrassLattice {
    Complex f, g, lambda;
    Complex w1, w2;
    Complex g2, g3, shift;
    Real rho;
    std::vector<Complex> coef;
    int digits = 0;
    int work_digits = 0;
};

namespace detail {

inline void gauss_reduce(Complex& w1, Complex& w2)
{
    for (int it = 0; it < 200; ++it) {
        if (norm(w2) < norm(w1))
            std::swap(w1, w2);
        Complex q = w2 / w1;
        Real m = bmp::round(q.re);
        if (m == 0)
            break;
        w2 -= w1 * m;
    }
    if (norm(w2) < norm(w1))
        std::swap(w1, w2);
}

} // namespace detail

inline WeierstrassLattice make_weierstrass_lattice(const PeriodPair& p)
{
    const int D = precision::digits();
    const int W = D + 12;
    WeierstrassLattice L;
    L.digits = D;
    L.work_digits = W;
    L.f = p.f;
    L.g = p.g;
    L.lambda = p.lambda;
    Complex lam = detail::promote(p.lambda, W);
    auto wd = to_weierstrass(lam);
    L.g2 = wd.g2;
    L.g3 = wd.g3;
    L.shift = wd.shift;
    L.w1 = detail::promote(p.f, W);
    L.w2 = detail::promote(p.g, W);
    detail::gauss_reduce(L.w1, L.w2);
    L.rho = abs(L.w1);
    const int K = static_cast<int>(std::ceil((W + 8) / 1.2)) + 3;
    L.coef.assign(K + 1, Complex(0));
    L.coef[2] = L.g2 / Real(20);
    if (K >= 3)
        L.coef[3] = L.g3 / Real(28);
    for (int k = 4; k <= K; ++k) {
        Complex s(0);
        for (int m = 2; m <= k - 2; ++m)
            s += L.coef[m] * L.coef[k - m];
        L.coef[k] = s * Real(3) / Real((2 * k + 1) * (k - 3));
    }
    return L;
}

// One cached lattice per thread: scans evaluate many points on one curve.
inline const WeierstrassLattice& weierstrass_lattice(const PeriodPair& p)
{
    thread_local WeierstrassLattice cache;
    if (cache.digits != precision::digits() || cache.f != p.f || cache.g != p.g || cache.lambda != p.lambda)
        cache = make_weierstrass_lattice(p);
    return cache;
}

struct WeierstrassValue {
    Complex p;
    Complex p_prime;
};

namespace detail {

// z minus the nearest point of the lattice spanned by the reduced basis.
inline Complex reduce_to_center(const WeierstrassLattice& L, const Complex& z)
{
    auto [s, t] = lattice_coords(z, L.w1, L.w2);
    Real si = bmp::round(s), ti = bmp::round(t);
    Complex base = z - L.w1 * si - L.w2 * ti;
    Complex best = base;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            Complex cand = base - L.w1 * Real(a) - L.w2 * Real(b);
            if (norm(cand) < norm(best))
                best = cand;
        }
    return best;
}

inline WeierstrassValue laurent(const WeierstrassLattice& L, const Complex& w)
{
    Complex w2 = w * w;
    Complex inv2 = Complex(1) / w2;
    Complex p = inv2, dp = Real(-2) * inv2 / w;
    Complex pw = w2;              // w^{2k-2}
    Complex dpw = w;              // w^{2k-3}
    for (std::size_t k = 2; k < L.coef.size(); ++k) {
        p += L.coef[k] * pw;
        dp += L.coef[k] * dpw * Real(static_cast<int>(2 * k - 2));
        pw *= w2;
        dpw *= w2;
    }
    return {p, dp};
}

} // namespace detail

inline bool near_lattice_point(const WeierstrassLattice& L, const Complex& z)
{
    Complex zc = detail::reduce_to_center(L, detail::promote(z, L.work_digits));
    return abs(zc) <= ten_pow(-L.digits / 2) * L.rho;
}

// (wp(z), wp'(z)) for the lattice spanned by (f, g).
inline WeierstrassValue weierstrass_p(const Complex& z, const PeriodPair& periods)
{
    const WeierstrassLattice& L = weierstrass_lattice(periods);
    Complex zc = detail::reduce_to_center(L, detail::promote(z, L.work_digits));
    if (abs(zc) <= ten_pow(-L.digits / 2) * L.rho)
        throw pole_error("weierstrass_p: argument is a lattice point");
    int k = 0;
    Real target = L.rho / Real(4);
    Real az = abs(zc);
    while (az > target) {
        az /= 2;
        ++k;
    }
    Complex w = zc / bmp::pow(Real(2), k);
    WeierstrassValue v = detail::laurent(L, w);
    for (int i = 0; i < k; ++i) {
        Complex m = (Real(12) * v.p * v.p - L.g2) / (Real(2) * v.p_prime);
        Complex X = m * m / Real(4) - Real(2) * v.p;
        Complex Y = -(v.p_prime + m * (X - v.p));
        v = {X, Y};
    }
    return {rehp(v.p), rehp(v.p_prime)};
}

struct EllipticLog {
    Complex z;
    PeriodPair periods;
    CurvePoint point;
};

// Subtracts floor of the lattice coordinates: u, v in [0, 1).
inline Complex reduce_to_parallelogram(const Complex& z, const PeriodPair& p)
{
    auto [u, v] = lattice_coords(z, p.f, p.g);
    return z - p.f * Real(bmp::floor(u)) - p.g * Real(bmp::floor(v));
}

inline EllipticLog elliptic_log(const LegendreCurve& c, const CurvePoint& P, const PeriodPair& periods)
{
    EllipticLog out{Complex(0), periods, P};
    if (P.infinity)
        return out;
    if (!on_curve(c, P))
        throw input_error("elliptic_log: point is not on the curve");
    const int D = precision::digits();
    Complex w = raw_elliptic_log(P.x, c.lambda);
    const Real ax = abs(P.x);
    const Real yscale = Real(1) + ax * bmp::sqrt(ax);
    Complex z = w;
    // Within 10^{-D/2} of a 2-torsion point the log is a half period and the
    // sign of y carries no information.
    if (abs(P.y) > ten_pow(-D / 2) * yscale) {
        auto v = weierstrass_p(w, periods);
        if (abs(v.p_prime - Real(2) * P.y) > abs(v.p_prime + Real(2) * P.y))
            z = -w;
    }
    auto chk = weierstrass_p(z, periods);
    Complex xt = P.x - (c.lambda + Real(1)) / Real(3);
    if (abs(chk.p - xt) > ten_pow(10 - D) * (Real(1) + abs(xt) * abs(xt)))
        throw precision_error("elliptic_log: wp(z) does not reproduce x; periods and point inconsistent?", 2 * D);
    out.z = reduce_to_parallelogram(z, periods);
    return out;
}

inline CurvePoint exp_map(const Complex& z, const LegendreCurve& c, const PeriodPair& periods)
{
    const WeierstrassLattice& L = weierstrass_lattice(periods);
    if (near_lattice_point(L, z))
        return CurvePoint::origin();
    auto v = weierstrass_p(z, periods);
    return CurvePoint::affine(v.p + (c.lambda + Real(1)) / Real(3), v.p_prime / Real(2));
}

} // namespace legendre
