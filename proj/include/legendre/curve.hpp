#pragma once

#include <string>

#include "numeric.hpp"

namespace legendre {

// Y^2 = X(X-1)(X-lambda).
struct LegendreCurve {
    Complex lambda;

    explicit LegendreCurve(const Complex& l) : lambda(l)
    {
        Real tiny = ten_pow(-precision::digits() / 2);
        if (abs(l) <= tiny || abs(l - Real(1)) <= tiny)
            throw degenerate_input_error("lambda must avoid {0, 1}: the cubic is singular there");
    }
};

struct CurvePoint {
    bool infinity = true;
    Complex x;
    Complex y;

    static CurvePoint origin() { return CurvePoint{}; }
    static CurvePoint affine(const Complex& x, const Complex& y) { return CurvePoint{false, x, y}; }
    bool is_origin() const { return infinity; }
};

inline Complex cubic(const LegendreCurve& c, const Complex& x)
{
    return x * (x - Real(1)) * (x - c.lambda);
}

inline bool on_curve(const LegendreCurve& c, const CurvePoint& p)
{
    if (p.infinity)
        return true;
    Complex r = p.y * p.y - cubic(c, p.x);
    Real scale = Real(1) + norm(p.y) + abs(p.x) * abs(p.x) * abs(p.x);
    return abs(r) <= ten_pow(10 - precision::digits()) * scale;
}

inline CurvePoint negate(const CurvePoint& p)
{
    if (p.infinity)
        return p;
    return CurvePoint::affine(p.x, -p.y);
}

namespace detail {

inline Real promote(const Real& x, int digits)
{
    Real r(0, static_cast<unsigned>(digits));
    mpfr_set(r.backend().data(), x.backend().data(), GMP_RNDN);
    return r;
}

inline Complex promote(const Complex& z, int digits)
{
    return Complex(promote(z.re, digits), promote(z.im, digits));
}

// a2 = -(1+lambda), a4 = lambda on y^2 = x^3 + a2 x^2 + a4 x.
inline CurvePoint chord_or_tangent(const Complex& lambda, const Complex& x1, const Complex& y1,
                                   const Complex& x2, const Complex& y2, bool tangent)
{
    Complex m;
    if (tangent) {
        if (y1 == Complex(0))
            return CurvePoint::origin();
        m = (Real(3) * x1 * x1 - Real(2) * (Real(1) + lambda) * x1 + lambda) / (Real(2) * y1);
    } else {
        m = (y2 - y1) / (x2 - x1);
    }
    Complex x3 = m * m + Real(1) + lambda - (x1 + x2);
    Complex y3 = -(y1 + m * (x3 - x1));
    return CurvePoint::affine(x3, y3);
}

} // namespace detail

// Chord-tangent addition directly on the Legendre cubic.
inline CurvePoint add(const LegendreCurve& c, const CurvePoint& p0, const CurvePoint& q0)
{
    if (p0.infinity)
        return q0;
    if (q0.infinity)
        return p0;
    // Canonical operand order makes P + Q and Q + P bitwise identical.
    auto before = [](const CurvePoint& a, const CurvePoint& b) {
        if (a.x.re != b.x.re)
            return a.x.re < b.x.re;
        if (a.x.im != b.x.im)
            return a.x.im < b.x.im;
        if (a.y.re != b.y.re)
            return a.y.re < b.y.re;
        return a.y.im < b.y.im;
    };
    const bool swap = before(q0, p0);
    const CurvePoint& p = swap ? q0 : p0;
    const CurvePoint& q = swap ? p0 : q0;
    if (p.x == q.x) {
        if (p.y == -q.y)
            return CurvePoint::origin();
        if (p.y == q.y)
            return detail::chord_or_tangent(c.lambda, p.x, p.y, p.x, p.y, true);
        // Same abscissa but y agrees only up to rounding.
        if (abs(p.y + q.y) <= abs(p.y - q.y))
            return CurvePoint::origin();
        return detail::chord_or_tangent(c.lambda, p.x, p.y, p.x, p.y, true);
    }
    const int D = precision::digits();
    Complex dx = q.x - p.x;
    if (abs(dx) < ten_pow(-D / 2) * (Real(1) + abs(p.x))) {
        // Near-degenerate chord: redo it with twice the digits.
        const int D2 = 2 * D;
        auto r = detail::chord_or_tangent(detail::promote(c.lambda, D2), detail::promote(p.x, D2),
                                          detail::promote(p.y, D2), detail::promote(q.x, D2),
                                          detail::promote(q.y, D2), false);
        if (!r.infinity) {
            r.x = rehp(r.x);
            r.y = rehp(r.y);
        }
        return r;
    }
    return detail::chord_or_tangent(c.lambda, p.x, p.y, q.x, q.y, false);
}

inline CurvePoint dbl(const LegendreCurve& c, const CurvePoint& p) { return add(c, p, p); }

template <class IntT>
CurvePoint scalar_mul(const LegendreCurve& c, IntT m, const CurvePoint& p)
{
    CurvePoint base = p;
    if (m < 0) {
        m = -m;
        base = negate(base);
    }
    CurvePoint acc = CurvePoint::origin();
    while (m != 0) {
        if (m % 2 != 0)
            acc = add(c, acc, base);
        m /= 2;
        if (m != 0)
            base = dbl(c, base);
    }
    return acc;
}

// Distance of a projective point (x : y : 1) from O = (0 : 1 : 0) in the chart y = 1.
inline Real distance_from_origin(const CurvePoint& p)
{
    if (p.infinity)
        return Real(0);
    if (p.y == Complex(0))
        return Real(1) / epsilon_hp();
    Real ay = abs(p.y);
    Real a = abs(p.x) / ay, b = Real(1) / ay;
    return a > b ? a : b;
}

template <class T>
struct WeierstrassData {
    T g2, g3, j, shift;
};

// Ytilde^2 = 4 Xtilde^3 - g2 Xtilde - g3 with Xtilde = X - (lambda+1)/3, Ytilde = 2Y.
template <class T>
WeierstrassData<T> to_weierstrass(const T& l)
{
    T q = l * l - l + T(1);
    T d = l * l * (l - T(1)) * (l - T(1));
    if (d == T(0))
        throw degenerate_input_error("lambda must avoid {0, 1}");
    WeierstrassData<T> w;
    w.g2 = T(4) * q / T(3);
    w.g3 = T(4) * (l - T(2)) * (l + T(1)) * (T(2) * l - T(1)) / T(27);
    w.j = T(256) * q * q * q / d;
    w.shift = (l + T(1)) / T(3);
    return w;
}

inline WeierstrassData<Complex> to_weierstrass(const LegendreCurve& c) { return to_weierstrass(c.lambda); }

} // namespace legendre
