#include <gtest/gtest.h>

#include <random>

#include "legendre/agm.hpp"
#include "legendre/poly_roots.hpp"

using namespace legendre;

namespace {

Real rel_err(const Complex& a, const Complex& b) { return abs(a - b) / (Real(1) + abs(b)); }

} // namespace

TEST(Agm, FixedPoint)
{
    precision::set_digits(64);
    EXPECT_EQ(agm(Complex(1), Complex(1)), Complex(1));
}

TEST(Agm, OracleValues)
{
    precision::set_digits(64);
    Complex a = agm(Complex(1), Complex(Real("0.5")));
    EXPECT_LT(rel_err(a, Complex(Real("0.72839551552345343459321619163254098748693197161065279539708619163"))),
              ten_pow(-62));
    Complex b = agm(Complex(24), Complex(6));
    EXPECT_LT(rel_err(b, Complex(Real("13.4581714817256154207668131569743992430538388544396598555129422083"))),
              ten_pow(-62));
    Complex c = agm(Complex(1), Complex(1, 1));
    Complex ref(Real("1.04916052873278022053182738284383195489880424326989996675712463934"),
                Real("0.478155746088161229326188164831109530778104030196760403107290044997"));
    EXPECT_LT(rel_err(c, ref), ten_pow(-62));
}

TEST(Agm, DoubleKernelAgrees)
{
    auto d = agm(ComplexD(24, 0), ComplexD(6, 0));
    EXPECT_NEAR(d.real(), 13.4581714817256154, 1e-13);
}

TEST(Agm, SymmetryAndHomogeneity)
{
    precision::set_digits(64);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        Complex a(u(rng), u(rng) - 1.5), b(u(rng), u(rng) - 1.5);
        Real k(u(rng));
        EXPECT_LT(rel_err(agm(a, b), agm(b, a)), ten_pow(-60));
        EXPECT_LT(rel_err(agm(a * k, b * k), agm(a, b) * k), ten_pow(-60));
    }
}

TEST(Agm, RejectsDegenerate)
{
    precision::set_digits(64);
    EXPECT_THROW(agm(Complex(0), Complex(1)), degenerate_input_error);
    EXPECT_THROW(agm(Complex(1), Complex(-2)), degenerate_input_error);
}

TEST(Agm, PrecisionDoublingAgreement)
{
    precision::set_digits(64);
    Complex lo = agm(Complex(1), Complex(Real(3), Real(2)));
    Complex hi;
    {
        precision::scope s(128);
        hi = agm(Complex(1), Complex(Real(3), Real(2)));
    }
    EXPECT_LT(rel_err(lo, hi), ten_pow(-54));
}

TEST(PolyRoots, SquareRootOfTwo)
{
    precision::set_digits(64);
    auto r = poly_roots(IntPoly({-2, 0, 1}));
    ASSERT_EQ(r.size(), 2u);
    Real s = bmp::sqrt(Real(2));
    EXPECT_LT(abs(r[0] - Complex(-s)), ten_pow(-60));
    EXPECT_LT(abs(r[1] - Complex(s)), ten_pow(-60));
}

TEST(PolyRoots, ImaginaryUnit)
{
    precision::set_digits(64);
    auto r = poly_roots(IntPoly({1, 0, 1}));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], Complex(0, -1));
    EXPECT_EQ(r[1], Complex(0, 1));
}

TEST(PolyRoots, CubeRootsOfUnity)
{
    precision::set_digits(64);
    auto r = poly_roots(IntPoly({-1, 0, 0, 1}));
    ASSERT_EQ(r.size(), 3u);
    Real h = bmp::sqrt(Real(3)) / 2;
    EXPECT_LT(abs(r[0] - Complex(Real(-0.5), -h)), ten_pow(-60));
    EXPECT_LT(abs(r[1] - Complex(Real(-0.5), h)), ten_pow(-60));
    EXPECT_LT(abs(r[2] - Complex(1)), ten_pow(-60));
}

TEST(PolyRoots, MultipleAndZeroRoots)
{
    precision::set_digits(64);
    // x^2 (x-1)^3
    auto r = poly_roots(IntPoly({0, 0, -1, 3, -3, 1}));
    ASSERT_EQ(r.size(), 5u);
    EXPECT_EQ(r[0], Complex(0));
    EXPECT_EQ(r[1], Complex(0));
    for (int i = 2; i < 5; ++i)
        EXPECT_LT(abs(r[i] - Complex(1)), ten_pow(-18));
}

TEST(PolyRoots, ReconstructsCoefficients)
{
    precision::set_digits(64);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> u(-50, 50);
    for (int trial = 0; trial < 20; ++trial) {
        int deg = 2 + trial % 12;
        std::vector<Integer> c;
        for (int k = 0; k < deg; ++k)
            c.push_back(u(rng));
        c.push_back(1 + std::abs(u(rng)));
        IntPoly p(c);
        if (!is_square_free(p))
            continue;
        auto roots = poly_roots(p);
        ASSERT_EQ(static_cast<int>(roots.size()), p.degree());
        std::vector<Complex> prod{Complex(Real(p.lead()))};
        for (const auto& r : roots) {
            std::vector<Complex> next(prod.size() + 1, Complex(0));
            for (std::size_t i = 0; i < prod.size(); ++i) {
                next[i + 1] += prod[i];
                next[i] -= prod[i] * r;
            }
            prod = next;
        }
        Real scale(0);
        for (const auto& x : p.c)
            if (bmp::abs(Real(x)) > scale) scale = bmp::abs(Real(x));
        for (int k = 0; k <= p.degree(); ++k)
            EXPECT_LT(abs(prod[k] - Complex(Real(p.c[k]))), ten_pow(8 - 64) * scale) << "trial " << trial;
    }
}

TEST(PolyRoots, RejectsConstant)
{
    EXPECT_THROW(poly_roots(IntPoly(std::vector<Integer>{5})), input_error);
}

TEST(Format, ComplexPrinting)
{
    precision::set_digits(64);
    EXPECT_EQ(format_complex(Complex(0, 1), 54), "i");
    EXPECT_EQ(format_complex(Complex(Real(2), Real(-3)), 54), "2-3i");
    EXPECT_EQ(format_complex(Complex(Real("0.5")), 54), "0.5");
    EXPECT_EQ(format_rational(parse_rational("-1.25e1")), "-25/2");
    EXPECT_EQ(format_rational(parse_rational("49/48")), "49/48");
    EXPECT_EQ(format_rational(parse_rational("0.25")), "1/4");
    EXPECT_EQ(format_rational(parse_rational("0.05")), "1/20");
    EXPECT_EQ(format_rational(parse_rational("-0.008")), "-1/125");
    EXPECT_EQ(format_rational(parse_rational("010/03")), "10/3");
    EXPECT_THROW(parse_rational("0x10"), input_error);
    EXPECT_THROW(parse_rational("abc"), input_error);
}
