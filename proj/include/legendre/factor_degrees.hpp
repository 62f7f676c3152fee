#pragma once

#include <cstdint>
#include <vector>

#include "polynomial.hpp"

namespace legendre {

namespace detail {

// Polynomials over F_p, p < 2^31, coefficients lowest degree first.
class ModPoly {
public:
    using Vec = std::vector<std::uint64_t>;

    explicit ModPoly(std::uint64_t p) : p_(p) {}

    void trim(Vec& a) const
    {
        while (!a.empty() && a.back() == 0)
            a.pop_back();
    }

    std::uint64_t inv(std::uint64_t a) const { return pow(a, p_ - 2); }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const
    {
        std::uint64_t r = 1;
        a %= p_;
        while (e) {
            if (e & 1)
                r = r * a % p_;
            a = a * a % p_;
            e >>= 1;
        }
        return r;
    }

    Vec sub(Vec a, const Vec& b) const
    {
        if (a.size() < b.size())
            a.resize(b.size(), 0);
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i] = (a[i] + p_ - b[i]) % p_;
        trim(a);
        return a;
    }

    Vec mul(const Vec& a, const Vec& b) const
    {
        if (a.empty() || b.empty())
            return {};
        Vec r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = (r[i + j] + a[i] * b[j]) % p_;
        trim(r);
        return r;
    }

    std::pair<Vec, Vec> divmod(Vec a, const Vec& b) const
    {
        Vec q;
        if (a.size() >= b.size())
            q.assign(a.size() - b.size() + 1, 0);
        const std::uint64_t li = inv(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            const std::size_t s = a.size() - b.size();
            const std::uint64_t c = a.back() * li % p_;
            q[s] = c;
            for (std::size_t i = 0; i < b.size(); ++i)
                a[s + i] = (a[s + i] + p_ - c * b[i] % p_) % p_;
            trim(a);
        }
        trim(q);
        return {q, a};
    }

    Vec mod(const Vec& a, const Vec& f) const { return divmod(a, f).second; }

    Vec gcd(Vec a, Vec b) const
    {
        while (!b.empty()) {
            Vec r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    Vec derivative(const Vec& a) const
    {
        Vec r;
        for (std::size_t i = 1; i < a.size(); ++i)
            r.push_back(a[i] * (i % p_) % p_);
        trim(r);
        return r;
    }

    // h^p mod f
    Vec pow_frobenius(const Vec& h, const Vec& f) const
    {
        Vec r{1}, b = h;
        std::uint64_t e = p_;
        while (e) {
            if (e & 1)
                r = mod(mul(r, b), f);
            b = mod(mul(b, b), f);
            e >>= 1;
        }
        return r;
    }

    // Degrees of the irreducible factors of a square-free f (distinct-degree
    // factorization).
    std::vector<int> factor_degrees(Vec f) const
    {
        std::vector<int> out;
        Vec h = mod(Vec{0, 1}, f);
        for (int k = 1; 2 * k <= static_cast<int>(f.size()) - 1; ++k) {
            h = pow_frobenius(h, f);
            Vec g = gcd(f, sub(h, Vec{0, 1}));
            const int dg = static_cast<int>(g.size()) - 1;
            if (dg > 0) {
                for (int c = 0; c < dg / k; ++c)
                    out.push_back(k);
                f = divmod(f, g).first;
                h = mod(h, f);
            }
        }
        if (f.size() > 1)
            out.push_back(static_cast<int>(f.size()) - 1);
        return out;
    }

private:
    std::uint64_t p_;
};

inline bool is_prime_small(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace detail

// Degrees d in [1, deg p] that a factor of p over Q can have, from the
// factorization degree patterns of p modulo several primes. A result of {deg p}
// proves p irreducible.
inline std::vector<int> possible_factor_degrees(const IntPoly& p, int primes = 16)
{
    const int n = p.degree();
    if (n < 1)
        return {};
    std::vector<bool> allowed(n + 1, true);
    int used = 0;
    for (std::uint64_t q = 1009; used < primes && q < 200000; q += 2) {
        if (!detail::is_prime_small(q))
            continue;
        detail::ModPoly F(q);
        detail::ModPoly::Vec f;
        for (const auto& c : p.c) {
            Integer r = c % Integer(static_cast<long>(q));
            if (r < 0)
                r += Integer(static_cast<long>(q));
            f.push_back(r.convert_to<std::uint64_t>());
        }
        F.trim(f);
        if (static_cast<int>(f.size()) - 1 != n)
            continue;
        if (F.gcd(f, F.derivative(f)).size() != 1)
            continue;
        std::vector<bool> sums(n + 1, false);
        sums[0] = true;
        for (int d : F.factor_degrees(f))
            for (int s = n; s >= d; --s)
                if (sums[s - d])
                    sums[s] = true;
        for (int s = 0; s <= n; ++s)
            allowed[s] = allowed[s] && sums[s];
        ++used;
    }
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (allowed[d])
            out.push_back(d);
    return out;
}

} // namespace legendre
