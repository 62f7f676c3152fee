#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace legendre {

// Dense univariate polynomial, coefficients stored lowest degree first.
template <class T>
struct Polynomial {
    std::vector<T> c;

    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c(std::move(coeffs)) { normalize(); }
    explicit Polynomial(const T& constant) : c{constant} { normalize(); }

    static Polynomial monomial(const T& coeff, std::size_t k)
    {
        std::vector<T> v(k + 1, T(0));
        v[k] = coeff;
        return Polynomial(std::move(v));
    }

    void normalize()
    {
        while (!c.empty() && c.back() == T(0))
            c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const T& lead() const { return c.back(); }
    T coeff(std::size_t k) const { return k < c.size() ? c[k] : T(0); }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c.size() > c.size())
            c.resize(o.c.size(), T(0));
        for (std::size_t i = 0; i < o.c.size(); ++i)
            c[i] += o.c[i];
        normalize();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.c.size() > c.size())
            c.resize(o.c.size(), T(0));
        for (std::size_t i = 0; i < o.c.size(); ++i)
            c[i] -= o.c[i];
        normalize();
        return *this;
    }
    Polynomial& operator*=(const T& s)
    {
        for (auto& x : c)
            x *= s;
        normalize();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a)
    {
        for (auto& x : a.c)
            x = -x;
        return a;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return Polynomial();
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == T(0))
                continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                r[i + j] += a.c[i] * b.c[j];
        }
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c == b.c; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial derivative() const
    {
        if (c.size() <= 1)
            return Polynomial();
        std::vector<T> r(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i)
            r[i - 1] = c[i] * T(static_cast<int>(i));
        return Polynomial(std::move(r));
    }

    // Horner evaluation; V must be constructible from T.
    template <class V>
    V eval(const V& x) const
    {
        V acc(0);
        for (std::size_t i = c.size(); i-- > 0;)
            acc = acc * x + convert<V>(c[i]);
        return acc;
    }

    template <class V>
    static V convert(const T& v)
    {
        if constexpr (std::is_same_v<V, Complex> && !std::is_same_v<T, Complex>)
            return Complex(Real(v));
        else
            return V(v);
    }
};

using IntPoly = Polynomial<Integer>;
using RatPoly = Polynomial<Rational>;

// Quotient and remainder over a field.
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> divmod(const Polynomial<T>& a, const Polynomial<T>& b)
{
    if (b.is_zero())
        throw input_error("polynomial division by zero");
    Polynomial<T> r = a;
    if (r.degree() < b.degree())
        return {Polynomial<T>(), r};
    std::vector<T> q(r.degree() - b.degree() + 1, T(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        std::size_t shift = r.degree() - b.degree();
        T f = r.lead() / b.lead();
        q[shift] = f;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            r.c[i + shift] -= f * b.c[i];
        r.c.back() = T(0);
        r.normalize();
    }
    return {Polynomial<T>(std::move(q)), r};
}

inline RatPoly to_rational(const IntPoly& p)
{
    std::vector<Rational> v;
    for (const auto& x : p.c)
        v.emplace_back(x);
    return RatPoly(std::move(v));
}

// Integer polynomial with content 1 and positive leading coefficient.
inline IntPoly primitive_part(const RatPoly& p)
{
    if (p.is_zero())
        return IntPoly();
    Integer den = 1;
    for (const auto& x : p.c)
        den = bmp::lcm(den, bmp::denominator(x));
    std::vector<Integer> v;
    Integer g = 0;
    for (const auto& x : p.c) {
        Integer k = bmp::numerator(x) * (den / bmp::denominator(x));
        g = bmp::gcd(g, k);
        v.push_back(k);
    }
    if (p.lead() < 0)
        g = -g;
    for (auto& x : v)
        x /= g;
    return IntPoly(std::move(v));
}

inline IntPoly primitive_part(const IntPoly& p) { return primitive_part(to_rational(p)); }

inline RatPoly monic(RatPoly p)
{
    Rational l = p.lead();
    for (auto& x : p.c)
        x /= l;
    return p;
}

inline RatPoly gcd(RatPoly a, RatPoly b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : monic(a);
}

inline bool is_square_free(const IntPoly& p)
{
    RatPoly q = to_rational(p);
    return gcd(q, q.derivative()).degree() == 0;
}

inline bool divides(const RatPoly& d, const RatPoly& p) { return divmod(p, d).second.is_zero(); }

template <class T>
std::string to_string(const Polynomial<T>& p, const std::string& var = "x")
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        T a = p.c[k];
        if (a == T(0))
            continue;
        bool neg = a < T(0);
        if (neg)
            a = -a;
        std::string coeff;
        if constexpr (std::is_same_v<T, Rational>)
            coeff = format_rational(a);
        else
            coeff = a.str();
        if (out.empty())
            out = neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (k == 0 || coeff != "1")
            out += coeff;
        if (k > 0)
            out += var;
        if (k > 1)
            out += "^" + std::to_string(k);
    }
    return out;
}

} // namespace legendre
