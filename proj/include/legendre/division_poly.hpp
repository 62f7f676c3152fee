#pragma once

#include <map>
#include <string>

#include "numeric.hpp"
#include "polynomial.hpp"

namespace legendre {

struct DivisionPolyLimits {
    int max_order = 64;
    std::size_t max_bits = std::size_t(1) << 24;
};

namespace detail {

inline std::size_t size_bits(const Integer& z) { return z == 0 ? 0 : bmp::msb(bmp::abs(z)) + 1; }
inline std::size_t size_bits(const Rational& q)
{
    return size_bits(bmp::numerator(q)) + size_bits(bmp::denominator(q));
}
template <class T>
std::size_t size_bits(const Polynomial<T>& p)
{
    std::size_t m = 0;
    for (const auto& c : p.c)
        m = std::max(m, size_bits(c));
    return m;
}
template <class T>
std::size_t size_bits(const T&)
{
    return 0;
}

template <class R>
class DivisionRecurrence {
public:
    DivisionRecurrence(const R& x, const R& lambda, const DivisionPolyLimits& lim) : lim_(lim)
    {
        R one(1);
        R a2 = -(one + lambda), a4 = lambda;
        R b2 = R(4) * a2, b4 = R(2) * a4, b8 = -(a4 * a4);
        R x2 = x * x, x3 = x2 * x, x4 = x3 * x;
        F_ = R(4) * (x3 + a2 * x2 + a4 * x);
        F2_ = F_ * F_;
        memo_[0] = R(0);
        memo_[1] = one;
        memo_[2] = one;
        memo_[3] = R(3) * x4 + b2 * x3 + R(3) * b4 * x2 + b8;
        memo_[4] = R(2) * x4 * x2 + b2 * x4 * x + R(5) * b4 * x4 + R(10) * b8 * x2 + b2 * b8 * x + b4 * b8;
    }

    const R& F() const { return F_; }

    // f_n with psi_n = f_n (n odd), psi_n = psi_2 f_n (n even).
    const R& f(long n)
    {
        auto it = memo_.find(n);
        if (it != memo_.end())
            return it->second;
        R v;
        long m = n / 2;
        if (n % 2 == 1) {
            R fm = f(m), fm1 = f(m + 1);
            R a = f(m + 2) * fm * fm * fm;
            R b = f(m - 1) * fm1 * fm1 * fm1;
            v = (m % 2 == 0) ? R(F2_ * a - b) : R(a - F2_ * b);
        } else {
            R fm1 = f(m - 1), fp1 = f(m + 1);
            v = f(m) * (f(m + 2) * fm1 * fm1 - f(m - 2) * fp1 * fp1);
        }
        if (size_bits(v) > lim_.max_bits)
            throw resource_error("division polynomial of order " + std::to_string(n) +
                                 " exceeds the big-integer budget");
        return memo_[n] = std::move(v);
    }

private:
    DivisionPolyLimits lim_;
    R F_, F2_;
    std::map<long, R> memo_;
};

} // namespace detail

// y-free division polynomial: psi_m for odd m, psi_2 * psi_m for even m, where
// psi_2^2 = 4x(x-1)(x-lambda). It vanishes exactly at abscissas of nonzero
// points killed by m. R is any commutative ring type (Rational, polynomials,
// complex numbers).
template <class R>
R division_poly_eval(int m, const R& x, const R& lambda, const DivisionPolyLimits& lim = {})
{
    if (m < 1)
        throw input_error("division polynomial order must be >= 1");
    if (m > lim.max_order)
        throw input_error("division polynomial order " + std::to_string(m) + " above cap " +
                          std::to_string(lim.max_order));
    detail::DivisionRecurrence<R> rec(x, lambda, lim);
    R v = rec.f(m);
    if (m % 2 == 0)
        v = rec.F() * v;
    return v;
}

// psi_m(x0, lambda) as an exact polynomial in lambda.
inline RatPoly division_poly_in_lambda(int m, const Rational& x0, const DivisionPolyLimits& lim = {})
{
    RatPoly x(x0);
    RatPoly lambda(std::vector<Rational>{Rational(0), Rational(1)});
    return division_poly_eval(m, x, lambda, lim);
}

namespace detail {

// Removes from p every factor shared with the order-k polynomials, k | m, k < m.
template <class F>
RatPoly strip_lower_orders(int m, RatPoly p, F&& order_poly)
{
    for (int k = 1; k < m; ++k) {
        if (m % k != 0)
            continue;
        RatPoly q = order_poly(k);
        if (q.degree() < 1)
            continue;
        RatPoly g = gcd(p, q);
        while (g.degree() >= 1) {
            p = divmod(p, g).first;
            g = gcd(p, q);
        }
    }
    return p;
}

// Element of Q[x]/(mu). Integer constants carry no modulus and pick it up from
// the other operand.
struct FieldElement {
    RatPoly v;
    const RatPoly* mu = nullptr;

    FieldElement() = default;
    FieldElement(long n) : v(Rational(n)) {}
    FieldElement(RatPoly p, const RatPoly* m) : v(std::move(p)), mu(m) { reduce(); }

    void reduce()
    {
        if (mu && v.degree() >= mu->degree())
            v = divmod(v, *mu).second;
    }
    static const RatPoly* pick(const FieldElement& a, const FieldElement& b) { return a.mu ? a.mu : b.mu; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b)
    {
        RatPoly r = a.v;
        r += b.v;
        return FieldElement(std::move(r), pick(a, b));
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b)
    {
        RatPoly r = a.v;
        r -= b.v;
        return FieldElement(std::move(r), pick(a, b));
    }
    friend FieldElement operator-(const FieldElement& a) { return FieldElement(-a.v, a.mu); }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b)
    {
        return FieldElement(a.v * b.v, pick(a, b));
    }
};

inline std::size_t size_bits(const FieldElement& e) { return size_bits(e.v); }

inline Rational resultant(RatPoly f, RatPoly g)
{
    if (f.is_zero() || g.is_zero())
        return Rational(0);
    Rational sign(1), acc(1);
    for (;;) {
        const int df = f.degree(), dg = g.degree();
        if (dg == 0) {
            Rational r(1);
            for (int i = 0; i < df; ++i)
                r *= g.lead();
            return sign * acc * r;
        }
        RatPoly r = divmod(f, g).second;
        if (r.is_zero())
            return Rational(0);
        if ((df * dg) % 2 == 1)
            sign = -sign;
        for (int i = 0; i < df - r.degree(); ++i)
            acc *= g.lead();
        f = std::move(g);
        g = std::move(r);
    }
}

// Product of b over the conjugates of the root of mu.
inline Rational norm(const FieldElement& b, const RatPoly& mu)
{
    if (b.v.is_zero())
        return Rational(0);
    Rational r = resultant(mu, b.v);
    for (int i = 0; i < b.v.degree(); ++i)
        r /= mu.lead();
    return r;
}

// Polynomial through (xs[i], ys[i]), Newton form.
inline RatPoly interpolate(const std::vector<Rational>& xs, std::vector<Rational> ys)
{
    const std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i)
            ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
    RatPoly out;
    for (std::size_t i = n; i-- > 0;) {
        out = out * RatPoly(std::vector<Rational>{-xs[i], Rational(1)});
        out += RatPoly(ys[i]);
    }
    return out;
}

} // namespace detail

// The part of psi_m(x0, lambda) whose roots give points of exact order m.
inline RatPoly primitive_division_poly_in_lambda(int m, const Rational& x0, const DivisionPolyLimits& lim = {})
{
    return detail::strip_lower_orders(m, division_poly_in_lambda(m, x0, lim),
                                      [&](int k) { return division_poly_in_lambda(k, x0, lim); });
}

// Degree in lambda of psi_m(x, lambda) for generic x.
inline int division_poly_lambda_degree(int m, const DivisionPolyLimits& lim = {})
{
    return std::max(division_poly_in_lambda(m, Rational(1009, 17), lim).degree(),
                    division_poly_in_lambda(m, Rational(-613, 29), lim).degree());
}

// Norm of psi_m(alpha, lambda) from Q(alpha) down to Q, alpha a root of mu, as a
// polynomial in lambda. Vanishes at every lambda where some conjugate of alpha
// is the abscissa of a nonzero m-torsion point.
inline RatPoly norm_division_poly_in_lambda(int m, const IntPoly& mu, const DivisionPolyLimits& lim = {})
{
    if (mu.degree() < 1)
        throw input_error("norm_division_poly_in_lambda: minimal polynomial must have positive degree");
    const RatPoly mq = to_rational(mu);
    const int deg = mu.degree() * division_poly_lambda_degree(m, lim);
    const detail::FieldElement alpha(RatPoly(std::vector<Rational>{Rational(0), Rational(1)}), &mq);
    std::vector<Rational> xs, ys;
    for (int j = 0; j <= deg; ++j) {
        const detail::FieldElement l(RatPoly(Rational(j)), &mq);
        xs.emplace_back(j);
        ys.push_back(detail::norm(division_poly_eval(m, alpha, l, lim), mq));
    }
    return detail::interpolate(xs, std::move(ys));
}

inline RatPoly primitive_norm_division_poly_in_lambda(int m, const IntPoly& mu, const DivisionPolyLimits& lim = {})
{
    return detail::strip_lower_orders(m, norm_division_poly_in_lambda(m, mu, lim),
                                      [&](int k) { return norm_division_poly_in_lambda(k, mu, lim); });
}

} // namespace legendre
