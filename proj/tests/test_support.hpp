#pragma once

#include <random>

#include "legendre/curve.hpp"

namespace testing_support {

using namespace legendre;

inline Real rel_err(const Complex& a, const Complex& b) { return abs(a - b) / (Real(1) + abs(b)); }

// Random affine point on E_lambda with |x| moderate, principal y.
inline CurvePoint random_point(const LegendreCurve& c, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    Complex x(Real(u(rng)), Real(u(rng)));
    return CurvePoint::affine(x, sqrt(cubic(c, x)));
}

inline Complex random_lambda_in_lens(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (;;) {
        ComplexD l(0.5 + u(rng), u(rng) * 1.6);
        if (std::abs(l) < 0.92 && std::abs(1.0 - l) < 0.92 && std::abs(l) > 0.08 && std::abs(1.0 - l) > 0.08)
            return to_hp(l);
    }
}

} // namespace testing_support
