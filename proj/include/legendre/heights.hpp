#pragma once

#include <string>
#include <vector>

#include "curve.hpp"
#include "division_poly.hpp"
#include "numeric.hpp"
#include "poly_roots.hpp"
#include "relation.hpp"

namespace legendre {

enum class HeightMethod { mahler, projective, duplication_limit };

inline const char* to_string(HeightMethod m)
{
    switch (m) {
    case HeightMethod::mahler:
        return "mahler";
    case HeightMethod::projective:
        return "projective";
    case HeightMethod::duplication_limit:
        return "duplication-limit";
    }
    return "";
}

struct HeightReport {
    std::string subject;
    Real h;
    HeightMethod method = HeightMethod::mahler;
    int precision = 0;
    Real error;         // tail bound for duplication limits, 0 otherwise
    int steps = 0;      // duplications performed
    bool partial = false;
};

// (1/d)(log|lead| + sum log max(1, |root|)).
inline HeightReport weil_height(const AlgebraicNumber& alpha)
{
    IntPoly p = primitive_part(alpha.minpoly);
    if (p.degree() < 1)
        throw input_error("weil_height: minimal polynomial must have degree >= 1");
    HeightReport r;
    r.subject = to_string(p);
    r.method = HeightMethod::mahler;
    r.precision = precision::digits();
    Real s = bmp::log(detail::int_to_real(bmp::abs(p.lead())));
    for (const auto& z : poly_roots(p)) {
        Real a = abs(z);
        if (a > 1)
            s += bmp::log(a);
    }
    r.h = s / Real(p.degree());
    r.error = 0;
    return r;
}

// log max(|p|, |q|) for p/q in lowest terms.
inline Real rational_height(const Rational& q)
{
    Integer a = bmp::abs(bmp::numerator(q)), b = bmp::denominator(q);
    return bmp::log(detail::int_to_real(a > b ? a : b));
}

inline HeightReport weil_height(const Rational& q)
{
    HeightReport r;
    r.subject = format_rational(q);
    r.method = HeightMethod::projective;
    r.precision = precision::digits();
    r.h = rational_height(q);
    r.error = 0;
    return r;
}

struct RationalPoint {
    bool infinity = false;
    Rational x, y;
};

inline bool on_curve(const Rational& lambda, const RationalPoint& P)
{
    return P.infinity || P.y * P.y == P.x * (P.x - 1) * (P.x - lambda);
}

// x(2P) = (x^2 - lambda)^2 / (4 x (x-1) (x-lambda)); a zero denominator means 2P = O.
inline std::optional<Rational> duplicate_x(const Rational& lambda, const Rational& x)
{
    Rational den = 4 * x * (x - 1) * (x - lambda);
    if (den == 0)
        return std::nullopt;
    Rational num = x * x - lambda;
    return Rational(num * num / den);
}

struct NeronTateOptions {
    int k_max = 5;
    std::size_t max_bits = std::size_t(1) << 22;
};

// Canonical height as lim 4^{-k} h(x(2^k P)) / 2, so that h(2P) = 4 h(P).
// The error bar assumes the observed local constants
// |4^k (h_k - h_{k-1})| bound the rest of the sequence: tail <= C / (3 4^K).
inline HeightReport neron_tate(const Rational& lambda, const RationalPoint& P, const NeronTateOptions& opt = {})
{
    if (lambda == 0 || lambda == 1)
        throw degenerate_input_error("neron_tate: lambda must avoid {0, 1}");
    if (!on_curve(lambda, P))
        throw input_error("neron_tate: point is not on the curve");
    HeightReport r;
    r.method = HeightMethod::duplication_limit;
    r.precision = precision::digits();
    r.subject = P.infinity ? "O" : "(" + format_rational(P.x) + ", " + format_rational(P.y) + ")";
    r.h = 0;
    r.error = 0;
    if (P.infinity)
        return r;
    Rational x = P.x;
    Real prev = rational_height(x) / Real(2);
    Real h = prev, cmax(0), four(1);
    for (int k = 1; k <= opt.k_max; ++k) {
        auto nx = duplicate_x(lambda, x);
        four *= 4;
        if (!nx) {
            // 2^k P = O: torsion, canonical height exactly 0.
            r.h = 0;
            r.error = 0;
            r.steps = k;
            return r;
        }
        if (detail::size_bits(*nx) > opt.max_bits) {
            r.h = h;
            r.error = cmax / (Real(3) * four / Real(4));
            r.steps = k - 1;
            r.partial = true;
            throw resource_error("neron_tate: coordinates exceed the big-integer budget after " +
                                 std::to_string(k - 1) + " doublings; partial value " + format_real(r.h, 20));
        }
        x = *nx;
        Real hk = rational_height(x) / Real(2) / four;
        Real c = bmp::abs(hk - h) * four;
        if (c > cmax)
            cmax = c;
        h = hk;
        r.steps = k;
    }
    r.h = h;
    r.error = cmax / (Real(3) * four);
    return r;
}

struct ZimmerAudit {
    Real difference; // |h(P) - h(x(P))/2|
    Real allowance;  // c (h(lambda) + 1)
    bool passed = false;
};

inline ZimmerAudit zimmer_audit(const Rational& lambda, const RationalPoint& P, const Real& c = Real(3))
{
    ZimmerAudit a;
    auto nt = neron_tate(lambda, P);
    Real naive = P.infinity ? Real(0) : rational_height(P.x) / Real(2);
    a.difference = bmp::abs(nt.h - naive);
    a.allowance = c * (rational_height(lambda) + Real(1));
    a.passed = a.difference <= a.allowance + nt.error;
    return a;
}

struct ConjugateAudit {
    int total = 0;
    int inside = 0;
    Real fraction;
    bool passed = false;
    std::vector<Complex> conjugates;
};

// Conjugates t of alpha with |t| <= 1/delta and |t - e| >= delta for every
// excluded value e (default {0, 1}); passes when at least half qualify.
inline ConjugateAudit conjugate_audit(const AlgebraicNumber& alpha, const Real& delta,
                                      const std::vector<Complex>& excluded = {Complex(0), Complex(1)})
{
    if (!(delta > 0) || !(delta < Real(1) / Real(2)))
        throw input_error("conjugate_audit: delta must lie in (0, 1/2)");
    ConjugateAudit a;
    a.conjugates = poly_roots(alpha.minpoly);
    a.total = static_cast<int>(a.conjugates.size());
    for (const auto& t : a.conjugates) {
        bool in = abs(t) <= Real(1) / delta;
        for (const auto& e : excluded)
            in = in && abs(t - e) >= delta;
        if (in)
            ++a.inside;
    }
    a.fraction = Real(a.inside) / Real(a.total);
    a.passed = Real(2 * a.inside) >= Real(a.total);
    return a;
}

} // namespace legendre
