#include <gtest/gtest.h>

#include "legendre/division_poly.hpp"
#include "legendre/heights.hpp"

using namespace legendre;

namespace {

IntPoly ip(std::initializer_list<long> c)
{
    std::vector<Integer> v;
    for (long x : c)
        v.push_back(Integer(x));
    return IntPoly(v);
}

AlgebraicNumber alg(const IntPoly& p) { return AlgebraicNumber{p, poly_roots(p).back(), p.degree()}; }

// Chord-tangent law over Q on the Legendre model.
RationalPoint add_q(const Rational& l, const RationalPoint& P, const RationalPoint& Q)
{
    if (P.infinity)
        return Q;
    if (Q.infinity)
        return P;
    Rational m;
    if (P.x == Q.x) {
        if (P.y == -Q.y)
            return RationalPoint{true, 0, 0};
        m = (3 * P.x * P.x - 2 * (1 + l) * P.x + l) / (2 * P.y);
    } else {
        m = (Q.y - P.y) / (Q.x - P.x);
    }
    Rational x3 = m * m + 1 + l - P.x - Q.x;
    return RationalPoint{false, x3, -(P.y + m * (x3 - P.x))};
}

} // namespace

TEST(WeilHeight, Examples)
{
    precision::set_digits(64);
    const Real l2 = bmp::log(Real(2));
    EXPECT_LT(bmp::abs(weil_height(alg(ip({-2, 1}))).h - l2), ten_pow(-60));
    EXPECT_LT(bmp::abs(weil_height(alg(ip({-1, 2}))).h - l2), ten_pow(-60));
    EXPECT_LT(bmp::abs(weil_height(alg(ip({-2, 0, 1}))).h - l2 / 2), ten_pow(-50));
    EXPECT_LT(bmp::abs(weil_height(Rational(-3, 4)).h - bmp::log(Real(4))), ten_pow(-60));
}

TEST(WeilHeight, PowersScale)
{
    precision::set_digits(64);
    // alpha = 1 + sqrt 2 and alpha^2 = 3 + 2 sqrt 2; alpha^3 = 7 + 5 sqrt 2.
    Real h1 = weil_height(alg(ip({-1, -2, 1}))).h;
    Real h2 = weil_height(alg(ip({1, -6, 1}))).h;
    Real h3 = weil_height(alg(ip({-1, -14, 1}))).h;
    EXPECT_LT(bmp::abs(h2 - 2 * h1), ten_pow(-55));
    EXPECT_LT(bmp::abs(h3 - 3 * h1), ten_pow(-55));
}

TEST(NeronTate, TorsionIsZero)
{
    precision::set_digits(64);
    for (const Rational& l : {Rational(7), Rational(-3), Rational(1, 2)}) {
        auto r = neron_tate(l, RationalPoint{false, 0, 0});
        EXPECT_LE(r.h, r.error);
    }
    for (const Rational& l : {Rational(7), Rational(-3)})
        for (const Rational& x : {Rational(1), l}) {
            auto r = neron_tate(l, RationalPoint{false, x, 0});
            EXPECT_EQ(r.h, 0);
            EXPECT_EQ(r.steps, 1);
        }
}

TEST(NeronTate, QuadraticOnTenPoints)
{
    precision::set_digits(64);
    const Rational l(7);
    RationalPoint P{false, 9, 12};
    ASSERT_TRUE(on_curve(l, P));
    std::vector<RationalPoint> T{{false, 0, 0}, {false, 1, 0}, {false, 7, 0}};
    std::vector<RationalPoint> pts{P};
    RationalPoint P3 = add_q(l, add_q(l, P, P), P);
    pts.push_back(P3);
    for (const auto& t : T) {
        pts.push_back(add_q(l, P, t));
        pts.push_back(add_q(l, P3, t));
    }
    pts.push_back(RationalPoint{false, Rational(1, 4), Rational(9, 8)});
    pts.push_back(RationalPoint{false, 28, 126});
    ASSERT_EQ(pts.size(), 10u);
    for (const auto& Q : pts) {
        ASSERT_TRUE(on_curve(l, Q));
        auto h1 = neron_tate(l, Q);
        auto h2 = neron_tate(l, add_q(l, Q, Q));
        EXPECT_GT(h1.h, Real(0.1));
        EXPECT_LE(bmp::abs(h2.h - 4 * h1.h), h2.error + 4 * h1.error) << format_rational(Q.x);
    }
}

TEST(NeronTate, ErrorBarShrinks)
{
    precision::set_digits(64);
    Real prev(-1);
    for (int k = 2; k <= 6; ++k) {
        NeronTateOptions o;
        o.k_max = k;
        auto r = neron_tate(Rational(7), RationalPoint{false, 9, 12}, o);
        if (prev >= 0)
            EXPECT_LE(r.error, prev);
        prev = r.error;
    }
}

TEST(NeronTate, ZimmerAuditAndInputChecks)
{
    precision::set_digits(64);
    auto z = zimmer_audit(Rational(7), RationalPoint{false, 9, 12});
    EXPECT_TRUE(z.passed);
    EXPECT_THROW(neron_tate(Rational(7), RationalPoint{false, 9, 13}), input_error);
    EXPECT_THROW(neron_tate(Rational(1), RationalPoint{false, 0, 0}), degenerate_input_error);
}

TEST(ConjugateAudit, Examples)
{
    precision::set_digits(64);
    auto half = conjugate_audit(alg(ip({-1, 2})), Real("0.1"));
    EXPECT_EQ(half.inside, 1);
    EXPECT_EQ(half.total, 1);
    EXPECT_TRUE(half.passed);
    auto zero = conjugate_audit(alg(ip({0, 1})), Real("0.1"));
    EXPECT_EQ(zero.inside, 0);
    EXPECT_FALSE(zero.passed);
    IntPoly psi3 = primitive_part(division_poly_in_lambda(3, Rational(2)));
    auto a = conjugate_audit(alg(psi3), Real("0.05"));
    EXPECT_TRUE(a.passed);
    IntPoly scaled = psi3 * Integer(-7);
    auto b = conjugate_audit(alg(scaled), Real("0.05"));
    EXPECT_EQ(a.fraction, b.fraction);
    EXPECT_THROW(conjugate_audit(alg(psi3), Real("0.6")), input_error);
}
