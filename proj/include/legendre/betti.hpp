#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "curve.hpp"
#include "ellog.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "periods.hpp"

namespace legendre {

struct BettiCoords {
    Real u, v;
};

// Real (u, v) with z = u f + v g.
inline BettiCoords betti_coords(const Complex& z, const PeriodPair& p)
{
    const int D = precision::digits();
    const Complex delta = p.delta();
    if (abs(delta) == 0)
        throw degenerate_input_error("betti_coords: period basis is degenerate");
    Complex uc = (z * conj(p.g) - conj(z) * p.g) / delta;
    Complex vc = -(z * conj(p.f) - conj(z) * p.f) / delta;
    Real scale = Real(1) + abs(uc) + abs(vc);
    if (bmp::abs(uc.im) > ten_pow(10 - D) * scale || bmp::abs(vc.im) > ten_pow(10 - D) * scale)
        throw precision_error("betti_coords: imaginary residue above tolerance", 2 * D);
    BettiCoords b{uc.re, vc.re};
    Complex rec = p.f * b.u + p.g * b.v;
    Real zs = abs(z) + abs(p.f) * bmp::abs(b.u) + abs(p.g) * bmp::abs(b.v);
    if (abs(rec - z) > ten_pow(8 - D) * (Real(1) + zs))
        throw precision_error("betti_coords: reconstruction residual above tolerance", 2 * D);
    return b;
}

// Closed disc in the lambda plane.
struct Region {
    Complex center;
    Real radius;
};

// Closed, up to rounding of the boundary.
inline bool contains(const Region& r, const Complex& l)
{
    return abs(l - r.center) <= r.radius + ten_pow(10 - precision::digits()) * (Real(1) + abs(r.center));
}
inline bool contains(const Region& r, const ComplexD& l)
{
    return std::abs(l - to_double(r.center)) <= static_cast<double>(r.radius) * (1 + 1e-12);
}

inline void check_region(const Region& r, double margin)
{
    if (!(r.radius > 0))
        throw input_error("region radius must be positive");
    const Real m(margin);
    if (abs(r.center) - r.radius < m || abs(r.center - Real(1)) - r.radius < m)
        throw degenerate_input_error("region must stay at distance >= " + format_real(m, 6) + " from 0 and 1");
}

inline void check_abscissa(const Complex& x)
{
    const Real tiny = ten_pow(-precision::digits() / 2);
    if (abs(x) <= tiny || abs(x - Real(1)) <= tiny)
        throw degenerate_input_error("abscissa must avoid {0, 1}: such points are 2-torsion for every lambda");
}

inline void check_abscissa(const Complex& x, const Region& r, double margin)
{
    const Real m(margin);
    check_abscissa(x);
    if (abs(x - r.center) - r.radius < m)
        throw degenerate_input_error("abscissa " + format_complex(x, 12) +
                                     " comes within the margin of lambda on the region");
}

// A single-valued period basis on a disc avoiding 0 and 1: the principal
// basis, composed with the monodromy of a real cut when the disc straddles one.
class PeriodField {
public:
    explicit PeriodField(const Region& r) : region_(r)
    {
        const Real yc = r.center.im;
        if (bmp::abs(yc) > r.radius)
            return;
        const Real s = bmp::sqrt(r.radius * r.radius - yc * yc);
        const Real lo = r.center.re - s, hi = r.center.re + s;
        if (!(hi < 0 || lo > 1))
            return;
        crosses_cut_ = true;
        center_above_ = yc >= 0;
        const Complex p(r.center.re, Real(0));
        const Complex below(r.center.re, -ten_pow(-precision::digits() / 3));
        auto [fa, ga] = principal_periods(p);
        auto [fb, gb] = principal_periods(below);
        al_ = center_above_ ? align_basis(fa, ga, fb, gb) : align_basis(fb, gb, fa, ga);
        if (al_.residual > 0.2 || al_.det() != 1)
            throw path_error("could not resolve the cut monodromy on the region");
        std::ostringstream os;
        os << "region crosses the real cut; basis on the far side = [[" << al_.m[0][0] << "," << al_.m[0][1]
           << "],[" << al_.m[1][0] << "," << al_.m[1][1] << "]] * principal";
        log_.push_back(os.str());
    }

    const Region& region() const { return region_; }
    const std::vector<std::string>& log() const { return log_; }

    template <class C>
    BasicPeriodPair<C> at(const C& lambda) const
    {
        using R = real_t<C>;
        BasicPeriodPair<C> p;
        p.lambda = lambda;
        auto [f, g] = principal_periods(lambda);
        if (crosses_cut_ && (imag(lambda) >= R(0)) != center_above_) {
            BasisAlignment<C> al;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    al.m[i][j] = al_.m[i][j];
            std::tie(f, g) = apply(al, f, g);
        }
        p.f = f;
        p.g = g;
        p.tau = g / f;
        return p;
    }

private:
    Region region_;
    bool crosses_cut_ = false;
    bool center_above_ = true;
    BasisAlignment<Complex> al_;
    std::vector<std::string> log_;
};

namespace detail {

inline Real round_real(const Real& x) { return bmp::round(x); }
inline double round_real(double x) { return std::round(x); }

} // namespace detail

template <class C>
struct AlignedLog {
    C z;
    real_t<C> u, v;
};

// The member of +-w + L whose Betti coordinates are nearest to (u_ref, v_ref).
template <class C>
AlignedLog<C> align_log(const C& w, const real_t<C>& u_ref, const real_t<C>& v_ref, const BasicPeriodPair<C>& p)
{
    using R = real_t<C>;
    using std::abs;
    AlignedLog<C> best;
    R best_d(-1);
    for (int s : {1, -1}) {
        C ws = w * R(s);
        auto [u, v] = lattice_coords(ws, p.f, p.g);
        R du = detail::round_real(u_ref - u), dv = detail::round_real(v_ref - v);
        R d = abs(u + du - u_ref) + abs(v + dv - v_ref);
        if (best_d < R(0) || d < best_d) {
            best_d = d;
            best = {ws + p.f * du + p.g * dv, u + du, v + dv};
        }
    }
    return best;
}

// Elliptic log of (x, principal sqrt of the cubic) at lambda, reduced to u, v in [0, 1).
inline AlignedLog<Complex> base_log(const Complex& x, const PeriodPair& p)
{
    LegendreCurve c(p.lambda);
    CurvePoint P = CurvePoint::affine(x, sqrt(cubic(c, x)));
    auto L = elliptic_log(c, P, p);
    auto [u, v] = lattice_coords(L.z, p.f, p.g);
    return {L.z, u, v};
}

struct BettiSample {
    int i = 0, j = 0;
    Complex lambda;
    std::vector<Real> uv; // u1, v1, u2, v2, ...
};

struct BettiGrid {
    Region region;
    Real resolution;
    std::vector<Complex> abscissas;
    std::vector<BettiSample> samples;
    std::vector<std::string> branch_log;
};

// The Betti map on a disc, with each log continued from a reference point.
class BettiMap {
public:
    // With check_abscissas off an abscissa may lie on the region; the map is
    // then only locally single-valued away from lambda = x.
    BettiMap(const Region& r, std::vector<Complex> abscissas, double margin = 0.05, bool check_abscissas = true)
        : field_(validated(r, margin)), x_(std::move(abscissas))
    {
        if (x_.empty())
            throw input_error("at least one abscissa is required");
        for (const auto& x : x_)
            if (check_abscissas)
                check_abscissa(x, r, margin);
            else
                check_abscissa(x);
    }

    const PeriodField& field() const { return field_; }
    const std::vector<Complex>& abscissas() const { return x_; }
    std::size_t size() const { return x_.size(); }

    // Base point values: principal y at the disc center, coordinates in [0, 1).
    std::vector<Real> base() const
    {
        auto p = field_.at(field_.region().center);
        std::vector<Real> uv;
        for (const auto& x : x_) {
            auto b = base_log(x, p);
            uv.push_back(b.u);
            uv.push_back(b.v);
        }
        return uv;
    }

    template <class C>
    std::vector<real_t<C>> eval(const C& lambda, const std::vector<real_t<C>>& ref) const
    {
        using R = real_t<C>;
        auto p = field_.at(lambda);
        std::vector<R> uv(2 * x_.size());
        for (std::size_t k = 0; k < x_.size(); ++k) {
            C x = convert<C>(x_[k]);
            C w = raw_elliptic_log(x, lambda);
            auto a = align_log(w, ref[2 * k], ref[2 * k + 1], p);
            uv[2 * k] = a.u;
            uv[2 * k + 1] = a.v;
        }
        return uv;
    }

    template <class C>
    static C convert(const Complex& z)
    {
        if constexpr (std::is_same_v<C, Complex>)
            return z;
        else
            return to_double(z);
    }

private:
    static const Region& validated(const Region& r, double margin)
    {
        check_region(r, margin);
        return r;
    }

    PeriodField field_;
    std::vector<Complex> x_;
};

// Grid samples of the Betti map over a disc: the center column is swept
// serially from the base point, then rows are swept outward from that column
// in parallel. Output is row-major, deterministic at fixed precision.
inline BettiGrid betti_grid(const Region& region, const std::vector<Complex>& abscissas, const Real& resolution,
                            double margin = 0.05)
{
    if (!(resolution > 0))
        throw input_error("grid resolution must be positive");
    BettiMap map(region, abscissas, margin);
    BettiGrid grid;
    grid.region = region;
    grid.resolution = resolution;
    grid.abscissas = abscissas;
    grid.branch_log = map.field().log();
    grid.branch_log.push_back("base point " + format_complex(region.center, 12) +
                              ": principal y, logs reduced to [0,1)^2");

    const Real ratio = region.radius / resolution;
    const int N = static_cast<int>(bmp::floor(ratio + ten_pow(-20)));
    if (N > 4000)
        throw resource_error("grid too fine for the region");
    auto point = [&](int i, int j) { return region.center + Complex(resolution * i, resolution * j); };
    auto inside = [&](int i, int j) { return Real(i * i + j * j) * resolution * resolution <= region.radius * region.radius; };

    const int W = 2 * N + 1;
    std::vector<std::vector<Real>> values(static_cast<std::size_t>(W) * W);
    auto at = [&](int i, int j) -> std::vector<Real>& { return values[(j + N) * W + (i + N)]; };

    at(0, 0) = map.base();
    for (int dir : {1, -1})
        for (int j = dir; std::abs(j) <= N; j += dir)
            at(0, j) = map.eval(point(0, j), at(0, j - dir));

    parallel::parallel_for(static_cast<std::size_t>(W), [&](std::size_t jj) {
        const int j = static_cast<int>(jj) - N;
        for (int dir : {1, -1})
            for (int i = dir; std::abs(i) <= N; i += dir) {
                if (!inside(i, j))
                    break;
                at(i, j) = map.eval(point(i, j), at(i - dir, j));
            }
    });

    for (int j = -N; j <= N; ++j)
        for (int i = -N; i <= N; ++i)
            if (inside(i, j))
                grid.samples.push_back({i, j, point(i, j), at(i, j)});
    return grid;
}

} // namespace legendre
