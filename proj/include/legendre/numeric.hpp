#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <ios>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "errors.hpp"

namespace legendre {

namespace bmp = boost::multiprecision;

using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;
using Integer = bmp::mpz_int;
using Rational = bmp::mpq_rational;

namespace precision {

constexpr int default_digits = 64;
constexpr int minimum_digits = 32;

namespace detail {
inline std::atomic<int>& digits_slot()
{
    static std::atomic<int> d{[] {
        Real::default_precision(default_digits);
        return default_digits;
    }()};
    return d;
}
} // namespace detail

// Working precision D in decimal digits. The value is process-global (the mpfr
// default precision in Boost 1.74 is a plain global), so change it only from
// serial code.
inline int digits() { return detail::digits_slot().load(); }

namespace detail {
inline const int startup_digits = digits();
} // namespace detail

inline void set_digits(int d)
{
    if (d < 10 || d > 10000)
        throw input_error("precision must lie in [10, 10000] digits");
    detail::digits_slot().store(d);
    Real::default_precision(d);
}

class scope {
public:
    explicit scope(int d) : old_(digits()) { set_digits(d); }
    ~scope() { set_digits(old_); }
    scope(const scope&) = delete;
    scope& operator=(const scope&) = delete;

private:
    int old_;
};

} // namespace precision

// 10^{-k} at the current working precision.
inline Real ten_pow(int k)
{
    return bmp::pow(Real(10), k);
}

inline Real epsilon_hp() { return ten_pow(-precision::digits()); }

inline Real pi_hp()
{
    Real r;
    mpfr_const_pi(r.backend().data(), GMP_RNDN);
    return r;
}

struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(const Real& r) : re(r), im(0) {}
    Complex(const Real& r, const Real& i) : re(r), im(i) {}
    Complex(int r) : re(r), im(0) {}
    Complex(double r, double i = 0.0) : re(r), im(i) {}
    explicit Complex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o)
    {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o)
    {
        Real d = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const Real& s) { re /= s; im /= s; return *this; }
};

inline Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
inline Complex operator+(Complex a, const Real& s) { a.re += s; return a; }
inline Complex operator+(const Real& s, Complex a) { a.re += s; return a; }
inline Complex operator-(Complex a, const Real& s) { a.re -= s; return a; }
inline Complex operator-(const Real& s, const Complex& a) { return Complex(s - a.re, -a.im); }
inline Complex operator/(const Real& s, const Complex& a) { return Complex(s) / a; }
inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

inline const Real& real(const Complex& z) { return z.re; }
inline const Real& imag(const Complex& z) { return z.im; }
inline Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return bmp::sqrt(norm(z)); }

// Principal branch; a signed zero imaginary part counts as +0.
inline Complex sqrt(const Complex& z)
{
    if (z.re == 0 && z.im == 0)
        return Complex();
    Real r = abs(z);
    if (z.re >= 0) {
        Real t = bmp::sqrt((r + z.re) / 2);
        return Complex(t, z.im / (2 * t));
    }
    Real t = bmp::sqrt((r - z.re) / 2);
    return Complex(bmp::abs(z.im) / (2 * t), z.im < 0 ? Real(-t) : t);
}

using ComplexD = std::complex<double>;

// Uniform access to the two scalar types the kernels are instantiated with.
template <class C>
struct scalar_traits;

template <>
struct scalar_traits<ComplexD> {
    using real_type = double;
    static double pi() { return 3.14159265358979323846; }
    static double eps() { return 2.220446049250313e-16; }
    static int digits() { return 15; }
};

template <>
struct scalar_traits<Complex> {
    using real_type = Real;
    static Real pi() { return pi_hp(); }
    static Real eps() { return epsilon_hp(); }
    static int digits() { return precision::digits(); }
};

template <class C>
using real_t = typename scalar_traits<C>::real_type;

inline ComplexD to_double(const Complex& z)
{
    return ComplexD(static_cast<double>(z.re), static_cast<double>(z.im));
}

inline Complex to_hp(const ComplexD& z) { return Complex(Real(z.real()), Real(z.imag())); }

// Re-rounds a value to the current working precision (values otherwise keep
// the precision they were created with).
inline Real rehp(const Real& x)
{
    Real r;
    mpfr_set(r.backend().data(), x.backend().data(), GMP_RNDN);
    return r;
}
inline Complex rehp(const Complex& z) { return Complex(rehp(z.re), rehp(z.im)); }

inline Real to_real(const Rational& q) { return Real(q); }

// log10 of |x|, -inf-safe (returns -1e9 for zero).
inline double log10_abs(const Real& x)
{
    if (x == 0)
        return -1e9;
    return static_cast<double>(bmp::log10(bmp::abs(x)));
}

// ---------------------------------------------------------------- formatting

inline std::string format_real(const Real& x, int sig_digits)
{
    if (x == 0)
        return "0";
    std::string s = x.str(sig_digits, std::ios_base::fmtflags(0));
    return s;
}

// Complex numbers print as "a+bi"; components negligible relative to |z| at
// the printed precision are dropped, and a unit imaginary part prints as "i".
inline std::string format_complex(const Complex& z, int sig_digits)
{
    Real mag = abs(z);
    if (mag == 0)
        return "0";
    Real cut = mag * ten_pow(-sig_digits);
    bool has_re = bmp::abs(z.re) > cut;
    bool has_im = bmp::abs(z.im) > cut;
    std::string out;
    if (has_re)
        out = format_real(z.re, sig_digits);
    if (has_im) {
        std::string im = format_real(bmp::abs(z.im), sig_digits);
        if (im == "1")
            im.clear();
        bool neg = z.im < 0;
        if (has_re)
            out += neg ? "-" : "+";
        else if (neg)
            out += "-";
        out += im + "i";
    }
    if (out.empty())
        out = "0";
    return out;
}

// Digits printed for a value computed at working precision D.
inline int output_digits() { return precision::digits() - 10; }

// ---------------------------------------------------------------- parsing

namespace detail {
inline std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Base-10 integer with optional sign. The string constructor of Integer would
// read a leading 0 as octal.
inline Integer parse_decimal_integer(const std::string& text)
{
    std::string s = trim(text);
    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        neg = s[i++] == '-';
    if (i == s.size())
        throw input_error("cannot parse integer '" + text + "'");
    Integer z(0);
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw input_error("cannot parse integer '" + text + "'");
        z = z * 10 + (s[i] - '0');
    }
    return neg ? Integer(-z) : z;
}
} // namespace detail

// Exact rational from "p/q", an integer, or a decimal with optional exponent.
inline Rational parse_rational(const std::string& text)
{
    std::string s = detail::trim(text);
    if (s.empty())
        throw input_error("empty number");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Integer p = detail::parse_decimal_integer(s.substr(0, slash));
            Integer q = detail::parse_decimal_integer(s.substr(slash + 1));
            if (q == 0)
                throw input_error("zero denominator in '" + s + "'");
            return Rational(p, q);
        }
        std::size_t i = 0;
        bool neg = false;
        if (s[i] == '+' || s[i] == '-')
            neg = s[i++] == '-';
        std::string digits;
        long exp10 = 0;
        bool seen_point = false, any = false;
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c >= '0' && c <= '9') {
                digits += c;
                any = true;
                if (seen_point)
                    --exp10;
            } else if (c == '.' && !seen_point) {
                seen_point = true;
            } else if (c == 'e' || c == 'E') {
                exp10 += std::stol(s.substr(i + 1));
                break;
            } else {
                throw input_error("cannot parse number '" + s + "'");
            }
        }
        if (!any)
            throw input_error("cannot parse number '" + s + "'");
        Integer m = detail::parse_decimal_integer(digits);
        Integer p10 = bmp::pow(Integer(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
        Rational r = exp10 < 0 ? Rational(m, p10) : Rational(m * p10);
        return neg ? Rational(-r) : r;
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error("cannot parse number '" + s + "'");
    }
}

// Exact complex rational, written "re" or "re,im".
struct ComplexRational {
    Rational re;
    Rational im;

    Complex value() const { return Complex(Real(re), Real(im)); }
    bool is_real() const { return im == 0; }
};

inline bool operator==(const ComplexRational& a, const ComplexRational& b)
{
    return a.re == b.re && a.im == b.im;
}

inline ComplexRational parse_complex_rational(const std::string& text)
{
    auto comma = text.find(',');
    if (comma == std::string::npos)
        return {parse_rational(text), Rational(0)};
    return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

inline Complex parse_complex(const std::string& text) { return parse_complex_rational(text).value(); }

inline std::string format_rational(const Rational& q)
{
    std::string s = bmp::numerator(q).str();
    if (bmp::denominator(q) != 1)
        s += "/" + bmp::denominator(q).str();
    return s;
}

inline std::string format_complex_rational(const ComplexRational& z)
{
    if (z.im == 0)
        return format_rational(z.re);
    return format_rational(z.re) + "," + format_rational(z.im);
}

} // namespace legendre
