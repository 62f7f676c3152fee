#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lll.hpp"
#include "numeric.hpp"
#include "poly_roots.hpp"
#include "polynomial.hpp"

namespace legendre {

// Values recomputable at a requested number of digits. Called from serial code
// under a precision::scope of that many digits.
using ValueSource = std::function<std::vector<Complex>(int digits)>;
using NumberSource = std::function<Complex(int digits)>;

inline NumberSource exact_number(const ComplexRational& q)
{
    return [q](int) { return q.value(); };
}

inline int decimal_digits(const Integer& b)
{
    Integer a = bmp::abs(b);
    int d = 1;
    for (Integer t(10); t <= a; t *= 10)
        ++d;
    return d;
}

namespace detail {

inline Integer round_to_int(const Real& x)
{
    Integer z;
    mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDN);
    return z;
}

inline Real int_to_real(const Integer& z)
{
    Real r;
    mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
    return r;
}

inline Real weighted_residual(const std::vector<Integer>& a, const std::vector<Complex>& v)
{
    Complex s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += v[i] * int_to_real(a[i]);
    return abs(s);
}

} // namespace detail

struct RelationSearch {
    LLLResult reduced;
    Real scale;
    bool imaginary_column = false;
};

// LLL on the rows (e_i | S Re v_i | S Im v_i), S = 10^{D-15}.
inline RelationSearch relation_search(const std::vector<Complex>& v)
{
    const int D = precision::digits();
    RelationSearch out;
    out.scale = ten_pow(D - 15);
    for (const auto& x : v)
        out.imaginary_column = out.imaginary_column || x.im != 0;
    const std::size_t n = v.size();
    IntMatrix B(n);
    for (std::size_t i = 0; i < n; ++i) {
        B[i].assign(n, Integer(0));
        B[i][i] = 1;
        B[i].push_back(detail::round_to_int(v[i].re * out.scale));
        if (out.imaginary_column)
            B[i].push_back(detail::round_to_int(v[i].im * out.scale));
    }
    out.reduced = lll_reduce(B);
    return out;
}

struct RelationOptions {
    // When false, an uncertified "none" is returned instead of a precision error.
    bool require_certificate = true;
    int retest_extra_digits = 20;
};

inline int relation_required_digits(std::size_t len, const Integer& bound)
{
    return 10 + static_cast<int>(len) * decimal_digits(bound) + 20;
}

// An integer vector a, 0 < |a|_inf <= bound, with |sum a_i v_i| below
// 10^{len*digits + 15 - D}, confirmed at D + 20 digits; or none when the
// reduced basis certifies that no such vector exists at this precision.
inline std::optional<std::vector<Integer>> integer_relation(const ValueSource& source, const Integer& coeff_bound,
                                                            const RelationOptions& opt = {})
{
    const int D = precision::digits();
    std::vector<Complex> v = source(D);
    if (v.empty())
        throw input_error("integer_relation: no values");
    if (coeff_bound < 1)
        throw input_error("integer_relation: coefficient bound must be positive");
    const std::size_t len = v.size();
    const int need = relation_required_digits(len, coeff_bound);
    if (D < need)
        throw precision_error("integer_relation: " + std::to_string(D) + " digits cannot resolve " +
                                  std::to_string(len) + " values with coefficients up to " + coeff_bound.str(),
                              need);
    const int digits = decimal_digits(coeff_bound);
    const Real vmax = [&] {
        Real m(1);
        for (const auto& x : v)
            if (abs(x) > m)
                m = abs(x);
        return m;
    }();
    const Real thr = ten_pow(static_cast<int>(len) * digits + 15 - D) * vmax;

    auto search = relation_search(v);
    std::vector<std::vector<Integer>> candidates;
    for (const auto& a : search.reduced.transform) {
        bool within = true, nonzero = false;
        for (const auto& c : a) {
            within = within && bmp::abs(c) <= coeff_bound;
            nonzero = nonzero || c != 0;
        }
        if (within && nonzero && detail::weighted_residual(a, v) <= thr)
            candidates.push_back(a);
    }
    if (!candidates.empty()) {
        std::vector<Complex> v2;
        {
            precision::scope s(D + opt.retest_extra_digits);
            v2 = source(D + opt.retest_extra_digits);
        }
        for (auto a : candidates) {
            Real r1 = detail::weighted_residual(a, v);
            Real r2;
            {
                precision::scope s(D + opt.retest_extra_digits);
                r2 = detail::weighted_residual(a, v2);
            }
            const Real floor = ten_pow(10 - D - opt.retest_extra_digits) * vmax;
            if (r2 <= r1 * Real(1e-10) || r2 <= floor) {
                // Sign convention: first nonzero entry positive.
                for (const auto& c : a)
                    if (c != 0) {
                        if (c < 0)
                            for (auto& e : a)
                                e = -e;
                        break;
                    }
                return a;
            }
        }
    }
    // Any relation within the bound and threshold is a lattice vector of norm
    // at most nmax; every nonzero lattice vector is at least min |b_i*| long.
    Real gmin = search.reduced.gso_norms[0];
    for (const auto& g : search.reduced.gso_norms)
        if (g < gmin)
            gmin = g;
    const Real B = detail::int_to_real(coeff_bound);
    const Real col = thr * search.scale + Real(static_cast<long>(len)) * B;
    const Real nmax = bmp::sqrt(Real(static_cast<long>(len)) * B * B + Real(2) * col * col);
    if (gmin > nmax || !opt.require_certificate)
        return std::nullopt;
    const int extra = static_cast<int>(std::ceil(static_cast<double>(len) * log10_abs(nmax / gmin) / 2.0)) + 10;
    throw precision_error("integer_relation: no relation certified below the bound; more digits needed", D + extra);
}

struct AlgebraicNumber {
    IntPoly minpoly;
    Complex approx;
    int degree = 0;
};

namespace detail {

inline bool has_rational_root(const IntPoly& p)
{
    // Candidates r/s with r | a0 and s | lead; only feasible for small coefficients.
    if (p.degree() < 1)
        return false;
    if (p.coeff(0) == 0)
        return true;
    auto divisors = [](Integer n) {
        n = bmp::abs(n);
        std::vector<Integer> d;
        if (n > Integer(1000000))
            return d;
        for (Integer k(1); k * k <= n; ++k)
            if (n % k == 0) {
                d.push_back(k);
                if (k * k != n)
                    d.push_back(n / k);
            }
        return d;
    };
    auto rs = divisors(p.coeff(0)), ss = divisors(p.lead());
    RatPoly q = to_rational(p);
    for (const auto& r : rs)
        for (const auto& s : ss)
            for (int sg : {1, -1})
                if (q.eval(Rational(r * sg, s)) == 0)
                    return true;
    return false;
}

inline Complex polish_root(const IntPoly& p, Complex z, int iterations)
{
    std::vector<Complex> a;
    for (const auto& c : p.c)
        a.push_back(Complex(int_to_real(c)));
    for (int it = 0; it < iterations; ++it) {
        auto [v, dv] = horner_pd(a, z);
        if (dv == Complex(0))
            break;
        z -= v / dv;
    }
    return z;
}

inline Real poly_residual(const IntPoly& p, const Complex& z, Real* scale_out = nullptr)
{
    std::vector<Complex> a;
    for (const auto& c : p.c)
        a.push_back(Complex(int_to_real(c)));
    if (scale_out)
        *scale_out = residual_scale(a, z);
    return abs(horner_pd(a, z).p);
}

} // namespace detail

inline int recognition_required_digits(int max_degree, int max_coeff_digits)
{
    return max_degree * max_coeff_digits + 30;
}

namespace detail {

inline std::optional<AlgebraicNumber> recognize(const NumberSource& source, const std::vector<int>& degrees,
                                                int max_coeff_digits, bool refinable)
{
    const int D = precision::digits();
    if (degrees.empty() || max_coeff_digits < 1)
        throw input_error("recognize_algebraic: degree and digit bounds must be positive");
    for (std::size_t k = 0; k < degrees.size(); ++k)
        if (degrees[k] < 1 || (k > 0 && degrees[k] <= degrees[k - 1]))
            throw input_error("recognize_algebraic: degrees must be positive and increasing");
    const int max_degree = degrees.back();
    const int need = recognition_required_digits(max_degree, max_coeff_digits);
    if (D < need)
        throw precision_error("recognize_algebraic: needs at least " + std::to_string(need) + " digits", need);
    const Complex x = source(D);
    const Integer bound = bmp::pow(Integer(10), static_cast<unsigned>(max_coeff_digits));
    for (int d : degrees) {
        std::vector<Complex> pw{Complex(1)};
        for (int k = 1; k <= d; ++k)
            pw.push_back(pw.back() * x);
        auto search = relation_search(pw);
        const Real thr = ten_pow(d * max_coeff_digits + 15 - D);
        std::optional<IntPoly> found;
        for (const auto& a : search.reduced.transform) {
            if (a[d] == 0)
                continue;
            bool within = true;
            for (const auto& c : a)
                within = within && bmp::abs(c) <= bound;
            if (!within)
                continue;
            IntPoly p(a);
            Real sc;
            Real r = detail::poly_residual(p, x, &sc);
            if (r > thr * sc)
                continue;
            p = primitive_part(p);
            if (p.degree() != d)
                continue;
            if (!is_square_free(p))
                continue;
            if (d > 1 && detail::has_rational_root(p))
                continue;
            found = p;
            break;
        }
        if (!found)
            continue;
        bool ok;
        {
            precision::scope s(2 * D);
            Complex x2 = source(2 * D);
            Real sc;
            Real r = detail::poly_residual(*found, x2, &sc);
            if (refinable) {
                ok = r <= ten_pow(10 - 2 * D) * sc;
            } else {
                Complex z = detail::polish_root(*found, x2, 2 * D);
                ok = detail::poly_residual(*found, z, &sc) <= ten_pow(10 - 2 * D) * sc &&
                     abs(z - x2) <= ten_pow(10 - D) * (Real(1) + abs(x2));
            }
        }
        if (!ok)
            continue;
        return AlgebraicNumber{*found, x, d};
    }
    return std::nullopt;
}

} // namespace detail

// Minimal polynomial of x of the smallest degree <= max_degree with
// coefficients below 10^max_coeff_digits, checked square-free and free of
// rational roots, then re-verified at twice the digits with x recomputed by
// the source.
inline std::vector<int> degree_range(int max_degree)
{
    if (max_degree < 1)
        throw input_error("recognize_algebraic: degree bound must be positive");
    std::vector<int> d;
    for (int k = 1; k <= max_degree; ++k)
        d.push_back(k);
    return d;
}

inline std::optional<AlgebraicNumber> recognize_algebraic(const NumberSource& source, int max_degree,
                                                          int max_coeff_digits)
{
    return detail::recognize(source, degree_range(max_degree), max_coeff_digits, true);
}

// Only the listed degrees (increasing) are tried.
inline std::optional<AlgebraicNumber> recognize_algebraic(const NumberSource& source, const std::vector<int>& degrees,
                                                          int max_coeff_digits)
{
    return detail::recognize(source, degrees, max_coeff_digits, true);
}

// For a value known only at the current digits the doubled-precision check
// polishes the recognized root at 2D and compares it with x.
inline std::optional<AlgebraicNumber> recognize_algebraic(const Complex& x, int max_degree, int max_coeff_digits)
{
    return detail::recognize([x](int) { return Complex(Real(x.re), Real(x.im)); }, degree_range(max_degree),
                             max_coeff_digits, false);
}

} // namespace legendre
