#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "betti.hpp"
#include "curve.hpp"
#include "division_poly.hpp"
#include "ellog.hpp"
#include "factor_degrees.hpp"
#include "heights.hpp"
#include "lll.hpp"
#include "parallel.hpp"
#include "relation.hpp"
#include "relations.hpp"

namespace legendre {

// A fixed abscissa: a Gaussian rational or a root of an integer polynomial.
struct Abscissa {
    ComplexRational rational;
    std::optional<AlgebraicNumber> algebraic;

    static Abscissa of(const ComplexRational& q) { return Abscissa{q, std::nullopt}; }
    static Abscissa of(const AlgebraicNumber& a) { return Abscissa{ComplexRational{}, a}; }

    bool is_real_rational() const { return !algebraic && rational.im == 0; }

    // Integer minimal polynomial over Q.
    IntPoly exact_minpoly() const
    {
        if (algebraic)
            return algebraic->minpoly;
        const Rational &a = rational.re, &b = rational.im;
        if (b == 0)
            return primitive_part(RatPoly(std::vector<Rational>{-a, Rational(1)}));
        return primitive_part(RatPoly(std::vector<Rational>{a * a + b * b, Rational(-2) * a, Rational(1)}));
    }

    // Value at the current precision.
    Complex value() const
    {
        if (!algebraic)
            return rational.value();
        Complex z(Real(algebraic->approx.re), Real(algebraic->approx.im));
        return detail::polish_root(algebraic->minpoly, z, 12);
    }

    std::string label() const
    {
        if (!algebraic)
            return format_complex_rational(rational);
        return "root of " + to_string(algebraic->minpoly) + " near " + format_complex(algebraic->approx, 12);
    }
};

struct ScanOptions {
    double resolution = 0.02;  // Betti grid step; Newton seeds use a step four times finer
    double margin = 0.05;
    int max_iterations = 50;
    bool recognize = true;
    int recognize_max_degree = 32; // cap for the lattice search when no exact polynomial settles it
    int recognize_max_digits = 12; // for non-rational abscissas
};

struct ScanStats {
    long seeds = 0;
    long converged = 0;
    long distinct = 0;
    long rejected = 0;
    std::vector<std::string> notes;
};

struct TorsionHit {
    Complex lambda0;
    int order = 0;
    std::array<Rational, 2> betti_target{Rational(0), Rational(0)};
    Real newton_residual;
    Real torsion_residual; // distance of m P from O at doubled precision
    std::optional<Real> psi_residual;
    std::optional<AlgebraicNumber> recognized;
    std::optional<Real> weil_height;
};

struct TorsionScan {
    std::vector<TorsionHit> hits;
    ScanStats stats;
};

struct IntersectionRecord {
    Complex lambda0;
    std::vector<Integer> scanned; // (a_1, ..., a_n, p, r)
    RelationVector first_relation;
    std::optional<RelationVector> second_relation;
    int rank = 0;
    Integer coeff_bound;
    bool certified = true;
    std::vector<std::string> notes;
};

struct IntersectionScan {
    std::vector<IntersectionRecord> records;
    ScanStats stats;
};

struct CountReport {
    Region region;
    std::vector<Complex> abscissas;
    std::vector<long> T_list;
    std::vector<long> one_relation_counts;
    std::vector<long> two_relation_counts;      // confirmed by Newton at the working precision
    std::vector<long> two_relation_candidates;  // two independent relations within tolerance at a sample
    Real tolerance;
    double lipschitz_step = 0;
    std::optional<double> one_relation_exponent;
    std::optional<double> two_relation_exponent;
    std::vector<std::string> notes;
};

namespace detail {

// sum a_j z_j = p f + r g.
struct LinearTarget {
    std::vector<long> a;
    long p = 0, r = 0;

    std::vector<Integer> vector() const
    {
        std::vector<Integer> v;
        for (long x : a)
            v.push_back(Integer(x));
        v.push_back(Integer(p));
        v.push_back(Integer(r));
        return v;
    }
};

template <class C>
struct TargetValue {
    C H;
    std::vector<real_t<C>> uv;
};

template <class C>
TargetValue<C> eval_target(const BettiMap& map, const std::vector<C>& xs, const LinearTarget& t, const C& lambda,
                           const std::vector<real_t<C>>& ref)
{
    using R = real_t<C>;
    auto per = map.field().at(lambda);
    TargetValue<C> out;
    out.H = C(R(0));
    out.uv.resize(2 * xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        C w = raw_elliptic_log(xs[j], lambda);
        auto al = align_log(w, ref[2 * j], ref[2 * j + 1], per);
        out.uv[2 * j] = al.u;
        out.uv[2 * j + 1] = al.v;
        out.H += al.z * R(t.a[j]);
    }
    out.H -= per.f * R(t.p) + per.g * R(t.r);
    return out;
}

template <class C>
struct NewtonResult {
    C lambda;
    std::vector<real_t<C>> uv;
    real_t<C> residual;
};

// Newton on the holomorphic H(lambda) = sum a_j z_j - p f - r g, logs continued
// from ref; central-difference derivative with step h. The iterate must stay in
// the disc |lambda - center| <= bound.
template <class C>
std::optional<NewtonResult<C>> newton(const BettiMap& map, const std::vector<C>& xs, const LinearTarget& t, C lambda,
                                      std::vector<real_t<C>> ref, const real_t<C>& h, const real_t<C>& step_tol,
                                      const C& center, const real_t<C>& bound, int max_iterations)
{
    using R = real_t<C>;
    using std::abs;
    try {
        for (int it = 0; it < max_iterations; ++it) {
            auto e = eval_target(map, xs, t, lambda, ref);
            ref = e.uv;
            auto ep = eval_target(map, xs, t, lambda + C(h), ref);
            auto em = eval_target(map, xs, t, lambda - C(h), ref);
            C d = (ep.H - em.H) / (R(2) * h);
            if (abs(d) == R(0))
                return std::nullopt;
            C step = e.H / d;
            lambda -= step;
            if (!(abs(lambda - center) <= bound))
                return std::nullopt;
            if (abs(step) < step_tol) {
                auto f = eval_target(map, xs, t, lambda, ref);
                return NewtonResult<C>{lambda, f.uv, abs(f.H)};
            }
        }
    } catch (const error&) {
    }
    return std::nullopt;
}

template <class C>
std::vector<C> map_abscissas(const BettiMap& map)
{
    std::vector<C> xs;
    for (const auto& x : map.abscissas())
        xs.push_back(BettiMap::convert<C>(x));
    return xs;
}

// Double-precision Betti values on a square grid of step h covering the disc
// plus one and a half steps, continued from the base point.
struct SeedGrid {
    int N = 0;
    double h = 0;
    ComplexD center;
    double radius = 0;
    std::vector<std::vector<double>> uv;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>((j + N) * (2 * N + 1) + (i + N)); }
    const std::vector<double>& at(int i, int j) const { return uv[index(i, j)]; }
    ComplexD point(int i, int j) const { return center + ComplexD(h * i, h * j); }
    bool inside(int i, int j) const { return h * h * (i * i + j * j) <= radius * radius; }
};

inline SeedGrid seed_grid(const BettiMap& map, const Region& region, double h)
{
    SeedGrid g;
    g.h = h;
    g.center = to_double(region.center);
    g.radius = static_cast<double>(region.radius);
    g.N = static_cast<int>(std::ceil(g.radius / h)) + 2;
    if (g.N > 4000)
        throw resource_error("seed grid too fine for the region");
    const double ext = g.radius + 1.5 * h;
    auto covered = [&](int i, int j) { return h * h * (i * i + j * j) <= ext * ext; };
    const int W = 2 * g.N + 1;
    g.uv.assign(static_cast<std::size_t>(W) * W, {});
    auto slot = [&](int i, int j) -> std::vector<double>& { return g.uv[g.index(i, j)]; };
    auto eval = [&](int i, int j, const std::vector<double>& ref) -> std::vector<double> {
        try {
            return map.eval(g.point(i, j), ref);
        } catch (const error&) {
            return {};
        }
    };
    for (const auto& v : map.base())
        slot(0, 0).push_back(static_cast<double>(v));
    for (int dir : {1, -1})
        for (int j = dir; covered(0, j); j += dir) {
            if (slot(0, j - dir).empty())
                break;
            slot(0, j) = eval(0, j, slot(0, j - dir));
        }
    parallel::parallel_for(static_cast<std::size_t>(W), [&](std::size_t jj) {
        const int j = static_cast<int>(jj) - g.N;
        for (int dir : {1, -1})
            for (int i = dir; covered(i, j); i += dir) {
                if (slot(i - dir, j).empty())
                    break;
                slot(i, j) = eval(i, j, slot(i - dir, j));
            }
    });
    return g;
}

struct Seed {
    LinearTarget target;
    ComplexD lambda;
    std::vector<double> ref;
};

// Integer targets (p, r) in the image of each grid cell under
// lambda -> sum a_j (u_j, v_j), with an affine first guess inside the cell.
template <class Accept>
void cell_seeds(const SeedGrid& g, const std::vector<long>& a, long rhs_cap, const Accept& accept,
                std::vector<Seed>& out)
{
    auto F = [&](const std::vector<double>& uv) {
        double u = 0, v = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            u += static_cast<double>(a[k]) * uv[2 * k];
            v += static_cast<double>(a[k]) * uv[2 * k + 1];
        }
        return std::array<double, 2>{u, v};
    };
    for (int j = -g.N; j < g.N; ++j)
        for (int i = -g.N; i < g.N; ++i) {
            if (!(g.inside(i, j) || g.inside(i + 1, j) || g.inside(i, j + 1) || g.inside(i + 1, j + 1)))
                continue;
            const auto& c00 = g.at(i, j);
            const auto& c10 = g.at(i + 1, j);
            const auto& c01 = g.at(i, j + 1);
            const auto& c11 = g.at(i + 1, j + 1);
            if (c00.empty() || c10.empty() || c01.empty() || c11.empty())
                continue;
            auto f00 = F(c00), f10 = F(c10), f01 = F(c01), f11 = F(c11);
            std::array<double, 2> lo, hi;
            for (int k = 0; k < 2; ++k) {
                lo[k] = std::min({f00[k], f10[k], f01[k], f11[k]});
                hi[k] = std::max({f00[k], f10[k], f01[k], f11[k]});
                double pad = 0.25 * (hi[k] - lo[k]) + 1e-9;
                lo[k] -= pad;
                hi[k] += pad;
            }
            const double J00 = f10[0] - f00[0], J01 = f01[0] - f00[0];
            const double J10 = f10[1] - f00[1], J11 = f01[1] - f00[1];
            const double det = J00 * J11 - J01 * J10;
            if (!(std::abs(det) > 1e-300))
                continue;
            const long p0 = std::max(static_cast<long>(std::ceil(lo[0])), -rhs_cap);
            const long p1 = std::min(static_cast<long>(std::floor(hi[0])), rhs_cap);
            const long r0 = std::max(static_cast<long>(std::ceil(lo[1])), -rhs_cap);
            const long r1 = std::min(static_cast<long>(std::floor(hi[1])), rhs_cap);
            for (long p = p0; p <= p1; ++p)
                for (long r = r0; r <= r1; ++r) {
                    if (!accept(p, r))
                        continue;
                    const double du = static_cast<double>(p) - f00[0], dv = static_cast<double>(r) - f00[1];
                    const double s = (J11 * du - J01 * dv) / det, t = (J00 * dv - J10 * du) / det;
                    if (s < -0.25 || s > 1.25 || t < -0.25 || t > 1.25)
                        continue;
                    out.push_back(Seed{LinearTarget{a, p, r}, g.point(i, j) + ComplexD(g.h * s, g.h * t), c00});
                }
        }
}

struct HpSolution {
    LinearTarget target;
    Complex lambda;
    std::vector<Real> uv;
    Real residual;
};

inline bool target_less(const LinearTarget& x, const LinearTarget& y)
{
    if (x.a != y.a)
        return x.a < y.a;
    if (x.p != y.p)
        return x.p < y.p;
    return x.r < y.r;
}

// Double Newton from every seed, merge near-identical roots per target, polish
// at the working precision, keep roots in the region, deduplicate at 10^{-D/2}.
inline std::vector<HpSolution> solve_seeds(const BettiMap& map, const Region& region, std::vector<Seed> seeds,
                                           double seed_h, int max_iterations, ScanStats& stats)
{
    const int D = precision::digits();
    stats.seeds += static_cast<long>(seeds.size());
    const ComplexD cd = to_double(region.center);
    const double bound_d = static_cast<double>(region.radius) + 2 * seed_h;
    const auto xs_d = map_abscissas<ComplexD>(map);
    std::vector<std::optional<NewtonResult<ComplexD>>> dres(seeds.size());
    parallel::parallel_for(seeds.size(), [&](std::size_t k) {
        dres[k] = newton<ComplexD>(map, xs_d, seeds[k].target, seeds[k].lambda, seeds[k].ref, 1e-5, 1e-10, cd,
                                   bound_d, max_iterations);
    });

    struct Cand {
        LinearTarget target;
        ComplexD lambda;
        std::vector<double> uv;
    };
    std::vector<Cand> cands;
    for (std::size_t k = 0; k < seeds.size(); ++k)
        if (dres[k])
            cands.push_back(Cand{seeds[k].target, dres[k]->lambda, dres[k]->uv});
    stats.converged += static_cast<long>(cands.size());
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (target_less(x.target, y.target))
            return true;
        if (target_less(y.target, x.target))
            return false;
        if (x.lambda.real() != y.lambda.real())
            return x.lambda.real() < y.lambda.real();
        return x.lambda.imag() < y.lambda.imag();
    });
    std::vector<Cand> uniq;
    for (const auto& c : cands) {
        bool dup = false;
        for (auto it = uniq.rbegin(); it != uniq.rend(); ++it) {
            if (it->target.a != c.target.a || it->target.p != c.target.p || it->target.r != c.target.r)
                break;
            if (std::abs(it->lambda - c.lambda) < 1e-7) {
                dup = true;
                break;
            }
        }
        if (!dup)
            uniq.push_back(c);
    }

    const Real h = ten_pow(-D / 3), tol = ten_pow(-(2 * D) / 3);
    const Real bound = region.radius + Real(seed_h);
    const auto xs = map_abscissas<Complex>(map);
    std::vector<std::optional<NewtonResult<Complex>>> hres(uniq.size());
    parallel::parallel_for(uniq.size(), [&](std::size_t k) {
        std::vector<Real> ref;
        for (double v : uniq[k].uv)
            ref.push_back(Real(v));
        hres[k] = newton<Complex>(map, xs, uniq[k].target, to_hp(uniq[k].lambda), ref, h, tol, region.center, bound,
                                  max_iterations);
    });

    std::vector<HpSolution> sols;
    for (std::size_t k = 0; k < uniq.size(); ++k) {
        if (!hres[k] || !contains(region, hres[k]->lambda))
            continue;
        sols.push_back(HpSolution{uniq[k].target, hres[k]->lambda, hres[k]->uv, hres[k]->residual});
    }
    // First occurrence in target order wins.
    const Real eps = ten_pow(-D / 2);
    std::vector<HpSolution> out;
    std::vector<std::size_t> order(sols.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sols[x].lambda.re < sols[y].lambda.re; });
    std::vector<bool> keep(sols.size(), true);
    for (std::size_t a = 0; a < order.size(); ++a) {
        if (!keep[order[a]])
            continue;
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const auto& x = sols[order[a]];
            const auto& y = sols[order[b]];
            if (y.lambda.re - x.lambda.re > eps)
                break;
            if (keep[order[b]] && abs(x.lambda - y.lambda) <= eps) {
                // Keep whichever comes first in target order.
                if (order[b] < order[a]) {
                    keep[order[a]] = false;
                    break;
                }
                keep[order[b]] = false;
            }
        }
    }
    for (std::size_t k = 0; k < sols.size(); ++k)
        if (keep[k])
            out.push_back(sols[k]);
    stats.distinct += static_cast<long>(out.size());
    return out;
}

// Solutions of one linear target recomputed at other precisions. Calls are
// serial and run under a precision scope of the requested digits.
class Refiner {
public:
    Refiner(Region region, std::vector<Abscissa> xs, double margin, bool check_abscissas)
        : region_(std::move(region)), xs_(std::move(xs)), margin_(margin), check_(check_abscissas)
    {
    }

    const BettiMap& map(int digits)
    {
        auto it = maps_.find(digits);
        if (it != maps_.end())
            return *it->second;
        std::vector<Complex> vals;
        for (const auto& x : xs_)
            vals.push_back(x.value());
        Region r{Complex(Real(region_.center.re), Real(region_.center.im)), Real(region_.radius)};
        auto m = std::make_shared<BettiMap>(r, vals, margin_, check_);
        return *(maps_[digits] = m);
    }

    std::optional<NewtonResult<Complex>> solve(const LinearTarget& t, const Complex& start,
                                               const std::vector<Real>& ref)
    {
        const int d = precision::digits();
        const BettiMap& m = map(d);
        std::vector<Real> r;
        for (const auto& v : ref)
            r.push_back(Real(v));
        return newton<Complex>(m, map_abscissas<Complex>(m), t, Complex(Real(start.re), Real(start.im)), r,
                               ten_pow(-d / 3), ten_pow(-(2 * d) / 3), m.field().region().center,
                               m.field().region().radius * 2, 50);
    }

private:
    Region region_;
    std::vector<Abscissa> xs_;
    double margin_;
    bool check_;
    std::map<int, std::shared_ptr<BettiMap>> maps_;
};

inline IntPoly square_free_part(const IntPoly& p)
{
    RatPoly q = to_rational(p), d;
    for (std::size_t i = 1; i < q.c.size(); ++i)
        d += RatPoly::monomial(q.c[i] * Rational(static_cast<long>(i)), i - 1);
    return primitive_part(divmod(q, gcd(q, d)).first);
}

// Above this lambda-degree the exact norm polynomial is not worth building.
constexpr int max_norm_degree = 256;

inline long decimal_digits_of_poly(const IntPoly& p)
{
    long d = 1;
    for (const auto& c : p.c)
        d = std::max<long>(d, decimal_digits(c));
    return d;
}

} // namespace detail

// Parameters lambda0 in the region at which the point with the given abscissa
// has exact order m <= max_order: Newton on m z(lambda) = p f + r g with
// gcd(m, p, r) = 1, from seeds on a grid four times finer than the resolution.
inline TorsionScan torsion_scan(const Abscissa& abscissa, int max_order, const Region& region,
                                const ScanOptions& opt = {})
{
    const int D = precision::digits();
    if (max_order < 2 || max_order > 64)
        throw input_error("torsion_scan: max_order must lie in [2, 64]");
    if (!(opt.resolution > 0))
        throw input_error("torsion_scan: resolution must be positive");
    check_region(region, opt.margin);
    const Complex x = abscissa.value();
    BettiMap map(region, {x}, opt.margin, false);

    TorsionScan out;
    auto& st = out.stats;
    const double seed_h = opt.resolution / 4;
    auto grid = detail::seed_grid(map, region, seed_h);
    std::vector<detail::Seed> seeds;
    for (int m = 2; m <= max_order; ++m)
        detail::cell_seeds(
            grid, {static_cast<long>(m)}, std::numeric_limits<long>::max() / 4,
            [m](long p, long r) { return std::gcd(std::gcd(static_cast<long>(m), p), r) == 1; }, seeds);
    if (seeds.size() > 4000000)
        throw resource_error("torsion_scan: too many seeds; lower max_order or coarsen the resolution");
    auto sols = detail::solve_seeds(map, region, std::move(seeds), seed_h, opt.max_iterations, st);

    // lambda0 = x makes (x, 0) a point of order 2; the Betti map is singular there.
    if (contains(region, x)) {
        const Real eps = ten_pow(-D / 2);
        bool seen = false;
        for (const auto& s : sols)
            seen = seen || abs(s.lambda - x) <= eps;
        if (!seen) {
            auto b = base_log(x, map.field().at(x));
            detail::HpSolution s;
            s.target = detail::LinearTarget{{2}, static_cast<long>(detail::round_to_int(2 * b.u).convert_to<long>()),
                                            static_cast<long>(detail::round_to_int(2 * b.v).convert_to<long>())};
            s.lambda = x;
            s.uv = {b.u, b.v};
            s.residual = 0;
            sols.push_back(s);
            st.notes.push_back("added the exact order-2 parameter lambda0 = x");
        }
    }

    std::map<int, IntPoly> psi;
    auto psi_of = [&](int m) -> const IntPoly& {
        auto it = psi.find(m);
        if (it == psi.end())
            it = psi.emplace(m, primitive_part(primitive_division_poly_in_lambda(m, abscissa.rational.re))).first;
        return it->second;
    };
    // For other abscissas the norm of psi_m down to Q; empty when too large.
    std::map<int, std::optional<IntPoly>> norms;
    auto norm_of = [&](int m) -> const IntPoly* {
        auto it = norms.find(m);
        if (it == norms.end()) {
            std::optional<IntPoly> v;
            const IntPoly mu = abscissa.exact_minpoly();
            if (mu.degree() * division_poly_lambda_degree(m) <= detail::max_norm_degree)
                v = detail::square_free_part(primitive_part(primitive_norm_division_poly_in_lambda(m, mu)));
            else
                st.notes.push_back("order " + std::to_string(m) + ": norm polynomial too large; recognition by degree search");
            it = norms.emplace(m, std::move(v)).first;
        }
        return it->second ? &*it->second : nullptr;
    };
    detail::Refiner refiner(region, {abscissa}, opt.margin, false);

    for (const auto& s : sols) {
        const int m = static_cast<int>(s.target.a[0]);
        TorsionHit hit;
        hit.lambda0 = s.lambda;
        hit.order = m;
        hit.betti_target = {Rational(s.target.p, m), Rational(s.target.r, m)};
        hit.newton_residual = s.residual;
        const bool exact2 = m == 2 && s.lambda == x;
        const bool use_psi = abscissa.is_real_rational();

        // Target reproduced by the aligned coordinates.
        const Real tu = Real(s.target.p) / Real(m), tv = Real(s.target.r) / Real(m);
        bool ok = exact2 || (bmp::abs(s.uv[0] - tu) <= ten_pow(8 - D) && bmp::abs(s.uv[1] - tv) <= ten_pow(8 - D));

        // Source of lambda0 at any precision.
        NumberSource source = [&, s, m, exact2, use_psi](int d) -> Complex {
            if (exact2)
                return abscissa.value();
            if (use_psi)
                return detail::polish_root(psi_of(m), Complex(Real(s.lambda.re), Real(s.lambda.im)), 12);
            auto r = refiner.solve(s.target, s.lambda, s.uv);
            if (!r)
                throw precision_error("torsion_scan: Newton refinement failed at " + std::to_string(d) + " digits",
                                      d);
            return r->lambda;
        };

        if (ok) {
            try {
                precision::scope sc(2 * D);
                Complex l2 = source(2 * D);
                Complex x2 = abscissa.value();
                LegendreCurve c(l2);
                CurvePoint P = CurvePoint::affine(x2, sqrt(cubic(c, x2)));
                hit.torsion_residual = distance_from_origin(scalar_mul(c, m, P));
                ok = hit.torsion_residual <= ten_pow(6 - D) && abs(l2 - s.lambda) <= ten_pow(8 - D);
                if (use_psi) {
                    Real sc2;
                    Real r = detail::poly_residual(psi_of(m), l2, &sc2);
                    hit.psi_residual = r / sc2;
                    ok = ok && r <= ten_pow(10 - 2 * D) * sc2;
                }
            } catch (const error&) {
                ok = false;
            }
        }
        if (!ok) {
            ++st.rejected;
            continue;
        }

        if (opt.recognize) {
            std::vector<int> degrees;
            int maxdig = opt.recognize_max_digits;
            // The minimal polynomial is a factor of an exact polynomial when one is known.
            const IntPoly* exact = use_psi ? &psi_of(m) : norm_of(m);
            if (exact) {
                degrees = possible_factor_degrees(*exact);
                maxdig = static_cast<int>(detail::decimal_digits_of_poly(*exact)) + 2;
            } else {
                degrees = degree_range(opt.recognize_max_degree);
            }
            std::optional<AlgebraicNumber> alg;
            if (exact && degrees.size() == 1 && degrees[0] == exact->degree()) {
                alg = AlgebraicNumber{*exact, s.lambda, exact->degree()};
            } else {
                while (!degrees.empty() && degrees.back() > opt.recognize_max_degree)
                    degrees.pop_back();
                if (!degrees.empty()) {
                    const int need = std::max(D, recognition_required_digits(degrees.back(), maxdig));
                    try {
                        precision::scope sc(need);
                        alg = recognize_algebraic(source, degrees, maxdig);
                    } catch (const error& e) {
                        st.notes.push_back(std::string("recognition skipped: ") + e.what());
                    }
                }
            }
            if (alg && exact && !divides(to_rational(alg->minpoly), to_rational(*exact))) {
                st.notes.push_back("recognized polynomial does not divide the exact order polynomial; dropped");
                alg.reset();
            }
            if (alg) {
                alg->approx = s.lambda;
                hit.weil_height = weil_height(*alg).h;
                hit.recognized = alg;
            }
        }
        out.hits.push_back(std::move(hit));
    }
    std::sort(out.hits.begin(), out.hits.end(), [](const TorsionHit& a, const TorsionHit& b) {
        if (a.order != b.order)
            return a.order < b.order;
        if (a.lambda0.re != b.lambda0.re)
            return a.lambda0.re < b.lambda0.re;
        return a.lambda0.im < b.lambda0.im;
    });
    return out;
}

namespace detail {

inline std::vector<std::vector<long>> half_space_vectors(std::size_t n, long T)
{
    std::vector<std::vector<long>> out;
    std::vector<long> a(n, -T);
    for (;;) {
        long first = 0;
        for (long c : a)
            if (c != 0) {
                first = c;
                break;
            }
        if (first > 0)
            out.push_back(a);
        std::size_t k = n;
        while (k-- > 0) {
            if (a[k] < T) {
                ++a[k];
                break;
            }
            a[k] = -T;
        }
        if (k == static_cast<std::size_t>(-1))
            break;
    }
    return out;
}

// +1 when the continued log z is the log of (x, principal y) up to periods, -1
// when it is the log of (x, -principal y).
inline int ybranch(const Complex& z, const Complex& x, const PeriodPair& per)
{
    LegendreCurve c(per.lambda);
    Complex w = elliptic_log(c, CurvePoint::affine(x, sqrt(cubic(c, x))), per).z;
    auto off = [&](const Complex& d) {
        auto [u, v] = lattice_coords(d, per.f, per.g);
        return bmp::abs(u - bmp::round(u)) + bmp::abs(v - bmp::round(v));
    };
    return off(z - w) <= off(z + w) ? 1 : -1;
}

} // namespace detail

// Parameters lambda0 in the region at which sum a_j P_j = O for a primitive
// (a, p, r) of height <= T, each examined with relation_lattice at bound T.
inline IntersectionScan two_relation_scan(const std::vector<Abscissa>& abscissas, long T, const Region& region,
                                          const ScanOptions& opt = {})
{
    const int D = precision::digits();
    const std::size_t n = abscissas.size();
    if (n < 2)
        throw input_error("two_relation_scan: at least two abscissas are required");
    if (T < 1)
        throw input_error("two_relation_scan: T must be positive");
    if (!(opt.resolution > 0))
        throw input_error("two_relation_scan: resolution must be positive");
    check_region(region, opt.margin);
    std::vector<Complex> xs;
    for (const auto& a : abscissas)
        xs.push_back(a.value());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (abs(xs[i] - xs[j]) <= ten_pow(-D / 2))
                throw input_error("two_relation_scan: abscissas must be pairwise distinct");
    const Integer bound(T);
    const Integer rhs_bound = bound * Integer(static_cast<long>(n)) + Integer(static_cast<long>(n));
    const int need = relation_required_digits(n + 2, rhs_bound);
    if (D < need)
        throw precision_error("two_relation_scan: bound " + std::to_string(T) + " needs more digits", need);
    BettiMap map(region, xs, opt.margin);

    IntersectionScan out;
    auto& st = out.stats;
    const double seed_h = opt.resolution / 4;
    auto grid = detail::seed_grid(map, region, seed_h);
    auto avecs = detail::half_space_vectors(n, T);
    if (static_cast<double>(avecs.size()) * static_cast<double>(grid.uv.size()) > 5e9)
        throw resource_error("two_relation_scan: vector enumeration too large for this bound and resolution");
    std::vector<std::vector<detail::Seed>> per(avecs.size());
    parallel::parallel_for(avecs.size(), [&](std::size_t k) {
        long g0 = 0;
        for (long c : avecs[k])
            g0 = std::gcd(g0, c);
        detail::cell_seeds(
            grid, avecs[k], T, [g0](long p, long r) { return std::gcd(std::gcd(g0, p), r) == 1; }, per[k]);
    });
    std::vector<detail::Seed> seeds;
    for (auto& v : per)
        for (auto& s : v)
            seeds.push_back(std::move(s));
    if (seeds.size() > 4000000)
        throw resource_error("two_relation_scan: too many seeds");
    auto sols = detail::solve_seeds(map, region, std::move(seeds), seed_h, opt.max_iterations, st);

    detail::Refiner refiner(region, abscissas, opt.margin, true);
    for (const auto& s : sols) {
        IntersectionRecord rec;
        rec.lambda0 = s.lambda;
        rec.scanned = s.target.vector();
        rec.coeff_bound = bound;

        const auto per0 = map.field().at(s.lambda);
        RelationProblem prob;
        prob.lambda0 = [&refiner, s, D](int d) -> Complex {
            if (d == D)
                return s.lambda;
            auto r = refiner.solve(s.target, s.lambda, s.uv);
            if (!r)
                throw precision_error("two_relation_scan: Newton refinement failed", d);
            return r->lambda;
        };
        for (std::size_t j = 0; j < n; ++j) {
            prob.abscissas.push_back([a = abscissas[j]](int) { return a.value(); });
            Complex z = per0.f * s.uv[2 * j] + per0.g * s.uv[2 * j + 1];
            prob.ybranches.push_back(detail::ybranch(z, xs[j], per0));
        }
        std::vector<Integer> a(rec.scanned.begin(), rec.scanned.begin() + static_cast<long>(n));
        try {
            auto rep = verify_relation(prob, a);
            rec.first_relation =
                RelationVector{a, rep.rhs, rep.residual, rep.residual_doubled, rep.group_residual, rep.passed};
            if (!rep.passed)
                rec.notes.push_back("scanned relation failed verification");
            RelationLattice L;
            try {
                L = relation_lattice(prob, bound);
            } catch (const precision_error& e) {
                rec.certified = false;
                rec.notes.push_back(e.what());
            }
            rec.rank = rec.certified ? L.rank : (rep.passed ? 1 : 0);
            for (const auto& b : L.basis) {
                if (exact_rank(IntMatrix{a, b.a}) == 2) {
                    rec.second_relation = b;
                    break;
                }
            }
            if (rec.rank >= 2 && !rec.second_relation)
                rec.notes.push_back("rank 2 without a relation independent of the scanned one");
        } catch (const error& e) {
            ++st.rejected;
            st.notes.push_back(std::string("dropped a root: ") + e.what());
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    std::sort(out.records.begin(), out.records.end(), [](const IntersectionRecord& a, const IntersectionRecord& b) {
        if (a.lambda0.re != b.lambda0.re)
            return a.lambda0.re < b.lambda0.re;
        if (a.lambda0.im != b.lambda0.im)
            return a.lambda0.im < b.lambda0.im;
        return a.scanned < b.scanned;
    });
    return out;
}

namespace detail {

// LLL in doubles with an integer transform, for lattices of dimension <= 10.
struct SmallLattice {
    std::vector<std::vector<double>> b;
    std::vector<std::vector<long>> U;
    std::vector<std::vector<double>> mu;
    std::vector<double> Bs;

    void gso()
    {
        const std::size_t n = b.size();
        std::vector<std::vector<double>> bs = b;
        mu.assign(n, std::vector<double>(n, 0.0));
        Bs.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double d = 0;
                for (std::size_t c = 0; c < b[i].size(); ++c)
                    d += b[i][c] * bs[j][c];
                mu[i][j] = d / Bs[j];
                for (std::size_t c = 0; c < b[i].size(); ++c)
                    bs[i][c] -= mu[i][j] * bs[j][c];
            }
            for (double x : bs[i])
                Bs[i] += x * x;
        }
    }

    void reduce()
    {
        const std::size_t n = b.size();
        U.assign(n, std::vector<long>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            U[i][i] = 1;
        gso();
        std::size_t k = 1;
        int guard = 0;
        while (k < n && ++guard < 100000) {
            for (std::size_t j = k; j-- > 0;) {
                double q = std::round(mu[k][j]);
                if (q == 0)
                    continue;
                for (std::size_t c = 0; c < b[k].size(); ++c)
                    b[k][c] -= q * b[j][c];
                for (std::size_t c = 0; c < n; ++c)
                    U[k][c] -= static_cast<long>(q) * U[j][c];
                gso();
            }
            if (Bs[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * Bs[k - 1]) {
                ++k;
            } else {
                std::swap(b[k], b[k - 1]);
                std::swap(U[k], U[k - 1]);
                gso();
                k = std::max<std::size_t>(k - 1, 1);
            }
        }
    }

    // Every nonzero lattice vector of squared norm <= R2, as coefficient vectors
    // in the original basis.
    template <class F>
    void enumerate(double R2, const F& emit) const
    {
        const std::size_t n = b.size();
        std::vector<long> x(n, 0);
        std::function<void(std::size_t, double)> rec = [&](std::size_t k, double used) {
            double c = 0;
            for (std::size_t i = k + 1; i < n; ++i)
                c -= static_cast<double>(x[i]) * mu[i][k];
            const double room = R2 - used;
            if (room < 0)
                return;
            const double w = std::sqrt(room / Bs[k]);
            const long lo = static_cast<long>(std::ceil(c - w)), hi = static_cast<long>(std::floor(c + w));
            for (long v = lo; v <= hi; ++v) {
                x[k] = v;
                const double d = (static_cast<double>(v) - c);
                const double u = used + d * d * Bs[k];
                if (u > R2)
                    continue;
                if (k == 0) {
                    bool zero = true;
                    for (long t : x)
                        zero = zero && t == 0;
                    if (zero)
                        continue;
                    std::vector<long> coeff(n, 0);
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j)
                            coeff[j] += x[i] * U[i][j];
                    emit(coeff);
                } else {
                    rec(k - 1, u);
                }
            }
            x[k] = 0;
        };
        rec(n - 1, 0.0);
    }
};

struct SampleRelations {
    std::vector<LinearTarget> found; // residual within tolerance, heights <= T_max
};

inline long height_of(const LinearTarget& t)
{
    long h = std::max(std::labs(t.p), std::labs(t.r));
    for (long c : t.a)
        h = std::max(h, std::labs(c));
    return h;
}

inline std::optional<double> fit_exponent(const std::vector<long>& T, const std::vector<long>& counts)
{
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < T.size(); ++k)
        if (counts[k] > 0) {
            xs.push_back(std::log(static_cast<double>(T[k])));
            ys.push_back(std::log(static_cast<double>(counts[k])));
        }
    if (xs.size() < 2)
        return std::nullopt;
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx == 0)
        return std::nullopt;
    return sxy / sxx;
}

// Primitive-up-to-sign (a, p, r), a != 0 with first nonzero entry positive,
// entries bounded by T, and |sum a_j u_j - p|, |sum a_j v_j - r| <= tol, by
// enumeration in an LLL-reduced basis of the lattice with weight T / tol.
inline std::vector<LinearTarget> relations_near(const std::vector<double>& uv, long T, double tol)
{
    const std::size_t n = uv.size() / 2;
    const double W = static_cast<double>(T) / tol;
    SmallLattice L;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(n + 2, 0.0);
        row[j] = 1;
        row[n] = W * uv[2 * j];
        row[n + 1] = W * uv[2 * j + 1];
        L.b.push_back(row);
    }
    for (int c = 0; c < 2; ++c) {
        std::vector<double> row(n + 2, 0.0);
        row[n + c] = W;
        L.b.push_back(row);
    }
    L.reduce();
    std::vector<LinearTarget> out;
    const double R2 = static_cast<double>(n + 2) * static_cast<double>(T * T) * (1 + 1e-9);
    L.enumerate(R2, [&](const std::vector<long>& cf) {
        LinearTarget t;
        t.a.assign(cf.begin(), cf.begin() + static_cast<long>(n));
        t.p = -cf[n];
        t.r = -cf[n + 1];
        long first = 0;
        for (long c : t.a)
            if (c != 0) {
                first = c;
                break;
            }
        if (first <= 0 || height_of(t) > T)
            return;
        double su = -static_cast<double>(t.p), sv = -static_cast<double>(t.r);
        for (std::size_t j = 0; j < n; ++j) {
            su += static_cast<double>(t.a[j]) * uv[2 * j];
            sv += static_cast<double>(t.a[j]) * uv[2 * j + 1];
        }
        if (std::abs(su) <= tol * (1 + 1e-6) && std::abs(sv) <= tol * (1 + 1e-6))
            out.push_back(std::move(t));
        if (out.size() > 200000)
            throw resource_error("count_rational_hits: tolerance admits too many relations per sample");
    });
    std::sort(out.begin(), out.end(), [](const LinearTarget& x, const LinearTarget& y) {
        long hx = height_of(x), hy = height_of(y);
        if (hx != hy)
            return hx < hy;
        return target_less(x, y);
    });
    return out;
}

inline constexpr std::size_t confirmation_tries = 32;

} // namespace detail

// Largest change of any Betti coordinate between neighbouring samples.
inline double grid_lipschitz_step(const BettiGrid& grid)
{
    std::map<std::pair<int, int>, std::size_t> index;
    for (std::size_t k = 0; k < grid.samples.size(); ++k)
        index[{grid.samples[k].i, grid.samples[k].j}] = k;
    double lip = 0;
    for (const auto& s : grid.samples)
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
            auto it = index.find({s.i + di, s.j + dj});
            if (it == index.end())
                continue;
            const auto& t = grid.samples[it->second];
            for (std::size_t c = 0; c < s.uv.size(); ++c)
                lip = std::max(lip, std::abs(static_cast<double>(t.uv[c] - s.uv[c])));
        }
    return lip;
}

// Per T and grid sample: whether some (a, p, r) of height <= T has
// |sum a_j u_j - p|, |sum a_j v_j - r| <= tolerance (one relation), and whether
// two with independent a-parts do. A two-relation sample is counted once
// Newton on the first relation converges in the region to a point where the
// second holds to 10^{-D/2}; raw tolerance coincidences are reported apart.
inline CountReport count_rational_hits(const BettiGrid& grid, std::vector<long> T_list, const Real& tolerance,
                                       const ScanOptions& opt = {})
{
    const int D = precision::digits();
    if (T_list.empty())
        throw input_error("count_rational_hits: empty T list");
    std::sort(T_list.begin(), T_list.end());
    if (T_list.front() < 1)
        throw input_error("count_rational_hits: T must be positive");
    if (tolerance < 0)
        throw input_error("count_rational_hits: tolerance must be non-negative");
    const std::size_t n = grid.abscissas.size();
    if (n == 0)
        throw input_error("count_rational_hits: grid has no abscissas");
    CountReport rep;
    rep.region = grid.region;
    rep.abscissas = grid.abscissas;
    rep.T_list = T_list;
    rep.tolerance = tolerance;
    const long Tmax = T_list.back();

    rep.lipschitz_step = grid_lipschitz_step(grid);
    if (static_cast<double>(tolerance) < rep.lipschitz_step)
        rep.notes.push_back("tolerance below the grid-step Lipschitz bound " + std::to_string(rep.lipschitz_step) +
                            "; relations between samples can be missed");

    const double tol_d = std::max(static_cast<double>(tolerance), 1e-9);
    std::vector<detail::SampleRelations> rel(grid.samples.size());
    parallel::parallel_for(grid.samples.size(), [&](std::size_t k) {
        const auto& uv = grid.samples[k].uv;
        std::vector<double> uvd;
        for (const auto& x : uv)
            uvd.push_back(static_cast<double>(x));
        for (auto& t : detail::relations_near(uvd, Tmax, tol_d)) {
            Real su(-t.p), sv(-t.r), l1(1);
            for (std::size_t j = 0; j < n; ++j) {
                su += Real(t.a[j]) * uv[2 * j];
                sv += Real(t.a[j]) * uv[2 * j + 1];
                l1 += Real(std::labs(t.a[j]));
            }
            const Real floor = ten_pow(10 - D) * l1;
            const Real lim = tolerance > floor ? tolerance : floor;
            if (bmp::abs(su) <= lim && bmp::abs(sv) <= lim)
                rel[k].found.push_back(std::move(t));
        }
    });

    // Per sample: the smallest height of an independent pair within tolerance,
    // and of a pair confirmed at a root of one member. Roots are sought from the
    // lowest-height relations found at the sample.
    const long none = std::numeric_limits<long>::max();
    std::vector<long> cand_h(rel.size(), none), conf_h(rel.size(), none);
    auto a_part = [](const detail::LinearTarget& t) {
        IntVector v;
        for (long c : t.a)
            v.push_back(Integer(c));
        return v;
    };
    for (std::size_t k = 0; k < rel.size(); ++k) {
        const auto& f = rel[k].found;
        // All relations before the first one not parallel to f[0] are parallel to it.
        for (std::size_t j = 1; j < f.size(); ++j)
            if (exact_rank(IntMatrix{a_part(f[0]), a_part(f[j])}) == 2) {
                cand_h[k] = detail::height_of(f[j]);
                break;
            }
    }
    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < rel.size(); ++k)
        if (cand_h[k] != none)
            todo.push_back(k);
    if (!todo.empty()) {
        BettiMap map(grid.region, grid.abscissas, opt.margin);
        const auto xs = detail::map_abscissas<Complex>(map);
        const auto xs_d = detail::map_abscissas<ComplexD>(map);
        const ComplexD cd = to_double(grid.region.center);
        const double rd = static_cast<double>(grid.region.radius);
        const Real eps = ten_pow(-D / 2);
        parallel::parallel_for(todo.size(), [&](std::size_t q) {
            const std::size_t k = todo[q];
            const auto& f = rel[k].found;
            const auto& s = grid.samples[k];
            std::vector<double> ref;
            for (const auto& x : s.uv)
                ref.push_back(static_cast<double>(x));
            const std::size_t tries = std::min<std::size_t>(f.size(), detail::confirmation_tries);
            for (std::size_t i = 0; i < tries; ++i) {
                auto rd_ = detail::newton<ComplexD>(map, xs_d, f[i], to_double(s.lambda), ref, 1e-5, 1e-10, cd, rd,
                                                    opt.max_iterations);
                if (!rd_)
                    continue;
                for (const auto& g : detail::relations_near(rd_->uv, Tmax, 1e-7)) {
                    if (exact_rank(IntMatrix{a_part(f[i]), a_part(g)}) < 2)
                        continue;
                    const long h = std::max(detail::height_of(f[i]), detail::height_of(g));
                    if (h >= conf_h[k])
                        continue;
                    std::vector<Real> ref_hp;
                    for (double x : rd_->uv)
                        ref_hp.push_back(Real(x));
                    auto r = detail::newton<Complex>(map, xs, f[i], to_hp(rd_->lambda), ref_hp, ten_pow(-D / 3),
                                                     ten_pow(-(2 * D) / 3), grid.region.center, grid.region.radius,
                                                     opt.max_iterations);
                    if (!r || !contains(grid.region, r->lambda))
                        continue;
                    Real su(-g.p), sv(-g.r);
                    for (std::size_t c = 0; c < n; ++c) {
                        su += Real(g.a[c]) * r->uv[2 * c];
                        sv += Real(g.a[c]) * r->uv[2 * c + 1];
                    }
                    if (bmp::abs(su) <= eps && bmp::abs(sv) <= eps)
                        conf_h[k] = h;
                }
            }
        });
    }

    for (long T : T_list) {
        long one = 0, two = 0, cand = 0;
        for (std::size_t k = 0; k < rel.size(); ++k) {
            bool any = false;
            for (const auto& t : rel[k].found)
                any = any || detail::height_of(t) <= T;
            one += any ? 1 : 0;
            cand += cand_h[k] <= T ? 1 : 0;
            two += conf_h[k] <= T ? 1 : 0;
        }
        rep.one_relation_counts.push_back(one);
        rep.two_relation_counts.push_back(two);
        rep.two_relation_candidates.push_back(cand);
    }
    rep.one_relation_exponent = detail::fit_exponent(T_list, rep.one_relation_counts);
    rep.two_relation_exponent = detail::fit_exponent(T_list, rep.two_relation_counts);
    return rep;
}

} // namespace legendre
