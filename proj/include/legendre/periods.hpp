#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "agm.hpp"
#include "numeric.hpp"

namespace legendre {

// F(1/2, 1/2; 1; t) by its power series, for |t| <= 0.8.
template <class C>
C hypergeometric_F(const C& t)
{
    using R = real_t<C>;
    using std::abs;
    R at = abs(t);
    if (at > R(0.8) + R(1e-12))
        throw input_error("hypergeometric_F: |t| > 0.8 is outside the series zone, use the agm route");
    const R tol = scalar_traits<C>::eps() * R(1e-5);
    C sum(1), term(1);
    R coef(1);
    for (long m = 1;; ++m) {
        coef *= R(2 * m - 1) / R(2 * m);
        coef *= R(2 * m - 1) / R(2 * m);
        term *= t;
        C add = term * coef;
        sum += add;
        // Coefficients decrease, so the tail is bounded by a geometric series.
        R tail = abs(add) * at / (R(1) - at);
        if (tail <= tol || (at == R(0)))
            break;
        if (m > 100000)
            throw precision_error("hypergeometric_F: series did not converge");
    }
    return sum;
}

namespace detail {

template <class C>
C principal_sqrt(const C& z)
{
    using std::sqrt;
    using R = real_t<C>;
    if (imag(z) == R(0) && real(z) < R(0))
        return C(R(0), sqrt(-real(z)));
    return sqrt(z);
}

// Value on a cut taken as the limit from Im(lambda) > 0, where 1 - lambda
// approaches the negative axis from below.
template <class C>
C sqrt_one_minus_from_above(const C& lambda)
{
    using std::sqrt;
    using R = real_t<C>;
    C w = C(R(1)) - lambda;
    if (imag(w) == R(0) && real(w) < R(0))
        return C(R(0), -sqrt(-real(w)));
    return principal_sqrt(w);
}

} // namespace detail

// 1 / agm(1, sqrt(1 - t)), the same function as the series on |t| < 1.
template <class C>
C hypergeometric_F_agm(const C& t)
{
    using R = real_t<C>;
    return C(R(1)) / agm(C(R(1)), detail::sqrt_one_minus_from_above(t));
}

enum class PeriodMethod { automatic, series, agm };

template <class C>
bool in_lens(const C& lambda)
{
    using R = real_t<C>;
    using std::abs;
    return abs(lambda) < R(1) && abs(C(R(1)) - lambda) < R(1);
}

template <class C>
struct BasicPeriodPair {
    C f, g, tau, lambda;
    std::vector<std::string> branch_log;

    C delta() const { return f * conj(g) - conj(f) * g; }
};

using PeriodPair = BasicPeriodPair<Complex>;
using PeriodPairD = BasicPeriodPair<ComplexD>;

template <class C>
void check_nonsingular(const C& lambda)
{
    using R = real_t<C>;
    using std::abs;
    R tiny = R(std::pow(10.0, -0.5 * scalar_traits<C>::digits()));
    if (abs(lambda) <= tiny || abs(C(R(1)) - lambda) <= tiny)
        throw degenerate_input_error("lambda must avoid {0, 1}");
}

// Continuation of the lens basis to the plane slit along (-inf, 0] and [1, inf),
// with limits from above on the cuts.
template <class C>
std::pair<C, C> principal_periods(const C& lambda)
{
    using R = real_t<C>;
    const R pi = scalar_traits<C>::pi();
    C one(R(1));
    C f = C(pi) / agm(one, detail::sqrt_one_minus_from_above(lambda));
    C g = C(R(0), pi) / agm(one, detail::principal_sqrt(lambda));
    return {f, g};
}

// Integer 2x2 change of basis taking a reference pair to the nearest lattice
// vectors of a new basis (A, B). Returns the rounding residual.
template <class C>
struct BasisAlignment {
    long m[2][2] = {{1, 0}, {0, 1}};
    double residual = 0.0;
    int det() const { return static_cast<int>(m[0][0] * m[1][1] - m[0][1] * m[1][0]); }
};

template <class C>
std::pair<real_t<C>, real_t<C>> lattice_coords(const C& z, const C& f, const C& g)
{
    // u = Im(z conj g)/Im(f conj g), v = -Im(z conj f)/Im(f conj g).
    auto den = imag(f * conj(g));
    return {imag(z * conj(g)) / den, -imag(z * conj(f)) / den};
}

template <class C>
BasisAlignment<C> align_basis(const C& ref_f, const C& ref_g, const C& A, const C& B)
{
    using std::round;
    BasisAlignment<C> out;
    const C refs[2] = {ref_f, ref_g};
    for (int r = 0; r < 2; ++r) {
        auto [a, b] = lattice_coords(refs[r], A, B);
        double ad = static_cast<double>(a), bd = static_cast<double>(b);
        long ai = std::lround(ad), bi = std::lround(bd);
        out.m[r][0] = ai;
        out.m[r][1] = bi;
        out.residual = std::max({out.residual, std::abs(ad - ai), std::abs(bd - bi)});
    }
    return out;
}

template <class C>
std::pair<C, C> apply(const BasisAlignment<C>& al, const C& A, const C& B)
{
    using R = real_t<C>;
    return {A * R(al.m[0][0]) + B * R(al.m[0][1]), A * R(al.m[1][0]) + B * R(al.m[1][1])};
}

namespace detail {

template <class C>
std::string describe_lambda(const C& l)
{
    std::ostringstream os;
    os.precision(8);
    os << static_cast<double>(real(l)) << (imag(l) < 0 ? "" : "+") << static_cast<double>(imag(l)) << "i";
    return os.str();
}

template <class C>
void normalize_orientation(BasicPeriodPair<C>& p)
{
    using R = real_t<C>;
    p.tau = p.g / p.f;
    if (imag(p.tau) < R(0)) {
        p.g = -p.g;
        p.tau = -p.tau;
        p.branch_log.push_back("orientation: g -> -g so that Im(g/f) > 0");
    }
}

template <class C>
BasicPeriodPair<C> lens_periods(const C& lambda, PeriodMethod method)
{
    using R = real_t<C>;
    using std::abs;
    const R pi = scalar_traits<C>::pi();
    C one(R(1));
    auto F = [&](const C& t) {
        bool series = method == PeriodMethod::series ||
                      (method == PeriodMethod::automatic && abs(t) <= R(0.8));
        return series ? hypergeometric_F(t) : hypergeometric_F_agm(t);
    };
    BasicPeriodPair<C> p;
    p.lambda = lambda;
    p.f = C(pi) * F(lambda);
    p.g = C(R(0), pi) * F(one - lambda);
    return p;
}

} // namespace detail

// Period basis (f, g). On the lens |t| < 1, |1 - t| < 1 these are pi F(t) and
// pi i F(1 - t). Elsewhere: with no path, the continuation along the straight
// segment from 1/2 (equivalently the principal AGM formulas, with limits from
// above on the real cuts); with a path starting in the lens, the continuation
// along that polyline.
template <class C>
BasicPeriodPair<C> period_pair(const C& lambda, const std::vector<C>& path = {},
                               PeriodMethod method = PeriodMethod::automatic)
{
    using R = real_t<C>;
    using std::abs;
    check_nonsingular(lambda);
    if (path.empty()) {
        BasicPeriodPair<C> p;
        if (in_lens(lambda)) {
            p = detail::lens_periods(lambda, method);
        } else {
            auto [f, g] = principal_periods(lambda);
            p.lambda = lambda;
            p.f = f;
            p.g = g;
            p.branch_log.push_back("principal continuation from the lens to " + detail::describe_lambda(lambda));
        }
        detail::normalize_orientation(p);
        return p;
    }

    if (!in_lens(path.front()))
        throw path_error("continuation path must start inside the lens |t| < 1, |1 - t| < 1");
    std::vector<C> pts = path;
    if (abs(pts.back() - lambda) > R(0))
        pts.push_back(lambda);

    BasicPeriodPair<C> cur = detail::lens_periods(pts.front(), method);
    C at = pts.front();
    BasisAlignment<C> last;
    const R singular = R(std::pow(10.0, -0.25 * scalar_traits<C>::digits()));
    int steps = 0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        C target = pts[k];
        check_nonsingular(target);
        while (abs(target - at) > R(0)) {
            R dist = abs(at) < abs(C(R(1)) - at) ? abs(at) : abs(C(R(1)) - at);
            if (dist <= singular)
                throw path_error("continuation path passes through a singular value 0 or 1");
            R h = dist * R(0.15);
            R rem = abs(target - at);
            C next = rem <= h ? target : at + (target - at) * (h / rem);
            for (int tries = 0;; ++tries) {
                auto [A, B] = principal_periods(next);
                auto al = align_basis(cur.f, cur.g, A, B);
                if (al.residual <= 0.2 && std::abs(al.det()) == 1) {
                    auto [f, g] = apply(al, A, B);
                    cur.f = f;
                    cur.g = g;
                    bool changed = false;
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j)
                            changed = changed || al.m[i][j] != last.m[i][j];
                    if (changed) {
                        std::ostringstream os;
                        os << "step " << steps << " at " << detail::describe_lambda(next)
                           << ": basis = [[" << al.m[0][0] << "," << al.m[0][1] << "],[" << al.m[1][0] << ","
                           << al.m[1][1] << "]] * principal";
                        cur.branch_log.push_back(os.str());
                        last = al;
                    }
                    at = next;
                    break;
                }
                if (tries > 40)
                    throw path_error("continuation step could not be resolved near " +
                                     detail::describe_lambda(next));
                next = at + (next - at) / R(2);
            }
            if (++steps > 1000000)
                throw path_error("continuation path too long");
        }
    }
    cur.lambda = lambda;
    detail::normalize_orientation(cur);
    return cur;
}

} // namespace legendre
