#pragma once

#include <cmath>

#include "numeric.hpp"

namespace legendre {

// Arithmetic-geometric mean with the "right choice" of square root at every
// step: |a_n - b_n| <= |a_n + b_n|, ties broken toward Im >= 0.
template <class C>
C agm(C a, C b)
{
    using R = real_t<C>;
    using std::abs;
    using std::sqrt;
    if (a == C(0) || b == C(0))
        throw degenerate_input_error("agm: zero argument");
    C ratio = b / a;
    if (imag(ratio) == 0 && real(ratio) < 0)
        throw degenerate_input_error("agm: b/a is a negative real");

    const R tol = scalar_traits<C>::eps() * R(4);
    const int cap = 60 + 4 * static_cast<int>(std::log2(scalar_traits<C>::digits() + 1.0));
    for (int it = 0; it < cap; ++it) {
        if (abs(a - b) <= tol * abs(a))
            return (a + b) / R(2);
        C an = (a + b) / R(2);
        C gn = sqrt(a * b);
        R dm = abs(an - gn), dp = abs(an + gn);
        if (dm > dp || (dm == dp && imag(gn) < 0))
            gn = -gn;
        a = an;
        b = gn;
    }
    throw degenerate_input_error("agm: no convergence within iteration cap");
}

} // namespace legendre
