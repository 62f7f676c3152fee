#include <gtest/gtest.h>

#include "legendre/curve.hpp"
#include "legendre/division_poly.hpp"
#include "legendre/poly_roots.hpp"
#include "test_support.hpp"

using namespace legendre;
using testing_support::random_point;
using testing_support::rel_err;

namespace {

bool near(const CurvePoint& a, const CurvePoint& b, const Real& tol)
{
    if (a.infinity || b.infinity)
        return a.infinity == b.infinity;
    return rel_err(a.x, b.x) <= tol && rel_err(a.y, b.y) <= tol;
}

} // namespace

TEST(Curve, RejectsSingularLambda)
{
    precision::set_digits(64);
    EXPECT_THROW(LegendreCurve(Complex(0)), degenerate_input_error);
    EXPECT_THROW(LegendreCurve(Complex(1)), degenerate_input_error);
}

TEST(Curve, IdentityInverseAndTwoTorsion)
{
    precision::set_digits(64);
    LegendreCurve c(Complex(Real(3), Real(1)));
    std::mt19937_64 rng(1);
    auto P = random_point(c, rng);
    EXPECT_TRUE(on_curve(c, P));
    auto s = add(c, P, CurvePoint::origin());
    EXPECT_EQ(s.x, P.x);
    EXPECT_EQ(s.y, P.y);
    EXPECT_TRUE(add(c, P, negate(P)).is_origin());
    auto t = add(c, CurvePoint::affine(0, 0), CurvePoint::affine(1, 0));
    ASSERT_FALSE(t.infinity);
    EXPECT_LT(abs(t.x - c.lambda), ten_pow(-60));
    EXPECT_LT(abs(t.y), ten_pow(-60));
    EXPECT_TRUE(scalar_mul(c, 2, CurvePoint::affine(0, 0)).is_origin());
    EXPECT_TRUE(scalar_mul(c, 0, P).is_origin());
}

TEST(Curve, DuplicationClosedForm)
{
    precision::set_digits(64);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        LegendreCurve c(testing_support::random_lambda_in_lens(rng));
        auto P = random_point(c, rng);
        auto Q = dbl(c, P);
        Complex x = P.x;
        Complex lhs = Q.x * Real(4) * cubic(c, x);
        Complex rhs = (x * x - c.lambda) * (x * x - c.lambda);
        EXPECT_LT(abs(lhs - rhs) / (Real(1) + abs(rhs)), ten_pow(-56));
        EXPECT_TRUE(on_curve(c, Q));
    }
}

TEST(Curve, AssociativityAndCommutativity)
{
    precision::set_digits(64);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        LegendreCurve c(testing_support::random_lambda_in_lens(rng));
        auto P = random_point(c, rng), Q = random_point(c, rng), R = random_point(c, rng);
        auto a = add(c, add(c, P, Q), R);
        auto b = add(c, P, add(c, Q, R));
        EXPECT_TRUE(near(a, b, ten_pow(-54))) << i;
        auto pq = add(c, P, Q), qp = add(c, Q, P);
        EXPECT_EQ(pq.x, qp.x);
    }
}

TEST(Curve, ScalarMulIsLinear)
{
    precision::set_digits(64);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> u(-7, 7);
    for (int i = 0; i < 30; ++i) {
        LegendreCurve c(testing_support::random_lambda_in_lens(rng));
        auto P = random_point(c, rng);
        int m = u(rng), n = u(rng);
        if (m + n == 0)
            continue;
        auto lhs = scalar_mul(c, m + n, P);
        auto rhs = add(c, scalar_mul(c, m, P), scalar_mul(c, n, P));
        EXPECT_TRUE(near(lhs, rhs, ten_pow(-50))) << m << " " << n;
    }
}

TEST(Curve, NearDegenerateChordUsesDoubledPrecision)
{
    precision::set_digits(64);
    LegendreCurve c(Complex(Real(2), Real(1)));
    std::mt19937_64 rng(5);
    auto P = random_point(c, rng);
    Complex x2 = P.x + Complex(ten_pow(-40));
    auto Q = CurvePoint::affine(x2, -sqrt(cubic(c, x2)));
    if (abs(Q.y + P.y) > abs(Q.y - P.y))
        Q.y = -Q.y;
    auto S = add(c, P, Q);
    ASSERT_FALSE(S.infinity);
    EXPECT_GT(abs(S.x), ten_pow(30));
}

TEST(Weierstrass, ExactValuesAtTwoAndMinusOne)
{
    auto w = to_weierstrass(Rational(2));
    EXPECT_EQ(w.g2, Rational(4));
    EXPECT_EQ(w.g3, Rational(0));
    EXPECT_EQ(w.j, Rational(1728));
    EXPECT_EQ(w.shift, Rational(1));
    auto v = to_weierstrass(Rational(-1));
    EXPECT_EQ(v.g3, Rational(0));
    EXPECT_EQ(v.j, Rational(1728));
    EXPECT_THROW(to_weierstrass(Rational(0)), degenerate_input_error);
}

TEST(Weierstrass, JInvariantIdentityAndImagePoints)
{
    precision::set_digits(64);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        LegendreCurve c(testing_support::random_lambda_in_lens(rng));
        auto w = to_weierstrass(c);
        Complex g23 = w.g2 * w.g2 * w.g2;
        Complex j = Real(1728) * g23 / (g23 - Real(27) * w.g3 * w.g3);
        EXPECT_LT(rel_err(j, w.j), ten_pow(-58));
        auto P = random_point(c, rng);
        Complex X = P.x - w.shift, Y = Real(2) * P.y;
        Complex r = Y * Y - (Real(4) * X * X * X - w.g2 * X - w.g3);
        EXPECT_LT(abs(r), ten_pow(-58) * (Real(1) + abs(Y * Y)));
    }
}

TEST(DivisionPoly, SmallCases)
{
    Rational two(2);
    EXPECT_EQ(division_poly_eval(2, two, two), Rational(0));
    EXPECT_EQ(division_poly_eval(1, Rational(5), Rational(7)), Rational(1));
    for (int m = 2; m <= 20; m += 2)
        EXPECT_EQ(division_poly_eval(m, Rational(0), Rational(3, 7)), Rational(0)) << m;
    auto p3 = division_poly_in_lambda(3, two);
    EXPECT_EQ(p3, RatPoly(std::vector<Rational>{16, -8, -1}));
    EXPECT_THROW(division_poly_eval(65, two, Rational(3)), input_error);
    DivisionPolyLimits tight;
    tight.max_bits = 64;
    EXPECT_THROW(division_poly_eval(40, Rational(7, 3), Rational(5, 11), tight), resource_error);
}

TEST(DivisionPoly, MatchesMultiplicationMap)
{
    // x(mP) = x - psi_{m-1} psi_{m+1} / psi_m^2 with the y-free normalisation.
    precision::set_digits(64);
    Rational x0(7, 3), l0(-5, 11);
    LegendreCurve c{Complex(Real(l0))};
    Complex x{Real(x0)};
    auto P = CurvePoint::affine(x, sqrt(cubic(c, x)));
    Rational F = 4 * x0 * (x0 - 1) * (x0 - l0);
    for (int m = 2; m <= 12; ++m) {
        Rational pm = division_poly_eval(m - 1, x0, l0), p0 = division_poly_eval(m, x0, l0),
                 pp = division_poly_eval(m + 1, x0, l0);
        Rational xm;
        if (m % 2 == 1)
            xm = x0 - (pm / F) * (pp / F) * F / (p0 * p0);
        else
            xm = x0 - pm * pp * F / (p0 * p0);
        auto Q = scalar_mul(c, m, P);
        EXPECT_LT(rel_err(Q.x, Complex(Real(xm))), ten_pow(-50)) << m;
    }
}

TEST(DivisionPoly, RootsAreTorsion)
{
    precision::set_digits(64);
    Rational l0(1, 2);
    LegendreCurve c{Complex(Real(l0))};
    RatPoly xpoly(std::vector<Rational>{0, 1});
    for (int m : {3, 5, 6}) {
        RatPoly p = division_poly_eval(m, xpoly, RatPoly(l0));
        auto roots = poly_roots(p);
        for (const auto& r : roots) {
            auto P = CurvePoint::affine(r, sqrt(cubic(c, r)));
            auto Q = scalar_mul(c, m, P);
            // Abscissas of 2-torsion lose half the digits through y ~ sqrt(error).
            EXPECT_TRUE(Q.infinity || distance_from_origin(Q) < ten_pow(-25)) << m;
        }
    }
}
