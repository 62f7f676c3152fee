#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "ellog.hpp"
#include "lll.hpp"
#include "numeric.hpp"
#include "periods.hpp"
#include "relation.hpp"

namespace legendre {

// Points P_j = (x_j, s_j sqrt(x_j(x_j-1)(x_j-lambda0))) on the fiber at lambda0,
// with lambda0 and the abscissas recomputable at any precision.
struct RelationProblem {
    NumberSource lambda0;
    std::vector<NumberSource> abscissas;
    std::vector<int> ybranches; // +1 or -1 per point; empty means all +1
};

inline RelationProblem make_problem(const ComplexRational& lambda0, const std::vector<ComplexRational>& abscissas,
                                    std::vector<int> ybranches = {})
{
    RelationProblem p;
    p.lambda0 = exact_number(lambda0);
    for (const auto& x : abscissas)
        p.abscissas.push_back(exact_number(x));
    p.ybranches = std::move(ybranches);
    return p;
}

struct RelationVector {
    std::vector<Integer> a;
    std::array<Integer, 2> rhs{Integer(0), Integer(0)};
    Real residual;
    Real residual_doubled;
    Real group_residual;
    bool passed = false;
};

struct RelationLattice {
    Complex lambda0;
    std::vector<Complex> abscissas;
    std::vector<RelationVector> basis;
    int rank = 0;
    Integer coeff_bound;
    int precision_used = 0;
    Real residual_floor;
    std::string floor_method;
    std::vector<std::string> notes;
};

struct VerificationReport {
    Real residual;
    Real residual_doubled;
    Real group_residual;
    std::array<Integer, 2> rhs{Integer(0), Integer(0)};
    bool persistent = false;
    bool group_ok = false;
    bool passed = false;
};

// Coordinates of every quantity at the current precision.
struct FiberData {
    Complex lambda;
    LegendreCurve curve{Complex(2)};
    PeriodPair periods;
    std::vector<CurvePoint> points;
    std::vector<Complex> logs;
    std::vector<std::pair<Real, Real>> uv;
};

inline FiberData evaluate_fiber(const RelationProblem& prob)
{
    const int D = precision::digits();
    FiberData fd;
    fd.lambda = prob.lambda0(D);
    fd.curve = LegendreCurve(fd.lambda);
    fd.periods = period_pair(fd.lambda);
    const Real tiny = ten_pow(-D / 2);
    for (std::size_t j = 0; j < prob.abscissas.size(); ++j) {
        Complex x = prob.abscissas[j](D);
        if (abs(x) <= tiny || abs(x - Real(1)) <= tiny)
            throw degenerate_input_error("abscissas 0 and 1 give 2-torsion points on every fiber");
        int s = j < prob.ybranches.size() ? prob.ybranches[j] : 1;
        Complex y = sqrt(cubic(fd.curve, x));
        if (s < 0)
            y = -y;
        fd.points.push_back(CurvePoint::affine(x, y));
        Complex z = elliptic_log(fd.curve, fd.points.back(), fd.periods).z;
        fd.logs.push_back(z);
        fd.uv.push_back(lattice_coords(z, fd.periods.f, fd.periods.g));
    }
    return fd;
}

namespace detail {

struct Residual {
    Real value;
    Real scale;
    std::array<Integer, 2> rhs;
};

// |sum a_j z_j - p f - r g| with (p, r) the nearest integers to sum a_j (u_j, v_j).
inline Residual relation_residual(const std::vector<Integer>& a, const FiberData& fd)
{
    Real su(0), sv(0), scale(1);
    Complex s(0);
    for (std::size_t j = 0; j < a.size(); ++j) {
        Real aj = int_to_real(a[j]);
        su += aj * fd.uv[j].first;
        sv += aj * fd.uv[j].second;
        s += fd.logs[j] * aj;
        scale += bmp::abs(aj) * abs(fd.logs[j]);
    }
    Integer p = round_to_int(su), r = round_to_int(sv);
    s -= fd.periods.f * int_to_real(p) + fd.periods.g * int_to_real(r);
    scale += abs(fd.periods.f) * bmp::abs(int_to_real(p)) + abs(fd.periods.g) * bmp::abs(int_to_real(r));
    return {abs(s), scale, {p, r}};
}

inline CurvePoint combine(const LegendreCurve& c, const std::vector<Integer>& a, const std::vector<CurvePoint>& pts)
{
    CurvePoint acc = CurvePoint::origin();
    for (std::size_t j = 0; j < a.size(); ++j)
        acc = add(c, acc, scalar_mul(c, Integer(a[j]), pts[j]));
    return acc;
}

} // namespace detail

// Residuals at D and 2D digits and the group-law check sum a_j P_j ~ O.
// Persistence: the 2D residual must be smaller by a factor 10^{D-20}.
inline VerificationReport verify_relation(const RelationProblem& prob, const std::vector<Integer>& a)
{
    const int D = precision::digits();
    if (a.size() != prob.abscissas.size())
        throw input_error("verify_relation: coefficient count does not match the points");
    VerificationReport rep;
    FiberData fd = evaluate_fiber(prob);
    auto r1 = detail::relation_residual(a, fd);
    rep.residual = r1.value;
    rep.rhs = r1.rhs;
    {
        precision::scope s(2 * D);
        FiberData fd2 = evaluate_fiber(prob);
        auto r2 = detail::relation_residual(a, fd2);
        rep.residual_doubled = Real(r2.value);
        CurvePoint Q = detail::combine(fd2.curve, a, fd2.points);
        rep.group_residual = distance_from_origin(Q);
        const Real shrink = ten_pow(-(D - 20));
        rep.persistent = r2.value <= r1.value * shrink || r2.value <= ten_pow(20 - 2 * D) * r2.scale;
    }
    rep.group_ok = rep.group_residual <= ten_pow(6 - D);
    rep.passed = rep.persistent && rep.group_ok;
    return rep;
}

namespace detail {

// The a != 0 with |a_j| <= bound, up to sign, minimizing |sum a_j z_j - p f - r g|
// among non-relations; enumerated in double precision.
inline std::optional<std::vector<Integer>> brute_force_floor(const FiberData& fd, long bound, double relation_cut)
{
    const std::size_t n = fd.uv.size();
    double total = 1;
    for (std::size_t j = 0; j < n; ++j)
        total *= static_cast<double>(2 * bound + 1);
    if (total > 4.0e6)
        return std::nullopt;
    ComplexD f = to_double(fd.periods.f), g = to_double(fd.periods.g);
    std::vector<double> u(n), v(n);
    for (std::size_t j = 0; j < n; ++j) {
        u[j] = static_cast<double>(fd.uv[j].first);
        v[j] = static_cast<double>(fd.uv[j].second);
    }
    std::vector<long> a(n, -bound), arg;
    double best = -1;
    for (;;) {
        // Keep one of a, -a: the first nonzero entry positive.
        long first = 0;
        for (long c : a)
            if (c != 0) {
                first = c;
                break;
            }
        if (first > 0) {
            double su = 0, sv = 0;
            for (std::size_t j = 0; j < n; ++j) {
                su += a[j] * u[j];
                sv += a[j] * v[j];
            }
            double du = su - std::round(su), dv = sv - std::round(sv);
            double r = std::abs(f * du + g * dv);
            if (r > relation_cut && (best < 0 || r < best)) {
                best = r;
                arg = a;
            }
        }
        std::size_t k = 0;
        while (k < n && a[k] == bound) {
            a[k] = -bound;
            ++k;
        }
        if (k == n)
            break;
        ++a[k];
    }
    if (best < 0)
        return std::nullopt;
    return std::vector<Integer>(arg.begin(), arg.end());
}

} // namespace detail

// Relation lattice L(P_1, ..., P_n) below coeff_bound: one LLL reduction of
// the embedding of (z_1, ..., z_n, f, g); each reduced vector that is a
// relation is verified at 2D and by the group law.
inline RelationLattice relation_lattice(const RelationProblem& prob, const Integer& coeff_bound)
{
    const int D = precision::digits();
    if (prob.abscissas.empty())
        throw input_error("relation_lattice: no points");
    if (coeff_bound < 1)
        throw input_error("relation_lattice: coefficient bound must be positive");
    const std::size_t n = prob.abscissas.size();
    // Logs lie in the fundamental parallelogram, so |p|, |r| <= n * bound.
    const Integer rhs_bound = coeff_bound * Integer(static_cast<long>(n)) + Integer(static_cast<long>(n));
    const int need = relation_required_digits(n + 2, rhs_bound);
    if (D < need)
        throw precision_error("relation_lattice: " + std::to_string(D) + " digits are too few for bound " +
                                  coeff_bound.str(),
                              need);

    FiberData fd = evaluate_fiber(prob);
    RelationLattice out;
    out.lambda0 = fd.lambda;
    for (const auto& P : fd.points)
        out.abscissas.push_back(P.x);
    out.coeff_bound = coeff_bound;
    out.precision_used = D;
    out.notes = fd.periods.branch_log;

    std::vector<Complex> values = fd.logs;
    values.push_back(fd.periods.f);
    values.push_back(fd.periods.g);
    auto search = relation_search(values);
    const int digits = decimal_digits(rhs_bound);
    Real vmax(1);
    for (const auto& x : values)
        if (abs(x) > vmax)
            vmax = abs(x);
    const Real thr = ten_pow(static_cast<int>(n + 2) * digits + 15 - D) * vmax;

    // Rows with a tiny residual are relations whatever their size; the bounded
    // ones are read off a reduced basis of the lattice they span.
    std::vector<std::size_t> relation_rows;
    IntMatrix aparts;
    for (std::size_t row = 0; row < search.reduced.transform.size(); ++row) {
        const auto& t = search.reduced.transform[row];
        std::vector<Integer> a(t.begin(), t.begin() + static_cast<long>(n));
        bool nonzero = false;
        for (const auto& c : a)
            nonzero = nonzero || c != 0;
        if (!nonzero || detail::weighted_residual(t, values) > thr)
            continue;
        relation_rows.push_back(row);
        IntMatrix trial = aparts;
        trial.push_back(a);
        if (exact_rank(trial) < static_cast<int>(trial.size())) {
            out.notes.push_back("dropped a relation dependent on earlier ones");
            continue;
        }
        aparts.push_back(a);
    }
    if (!aparts.empty()) {
        for (auto a : lll_reduce(aparts).basis) {
            bool within = true;
            for (const auto& c : a)
                within = within && bmp::abs(c) <= coeff_bound;
            if (!within)
                continue;
            for (const auto& c : a)
                if (c != 0) {
                    if (c < 0)
                        for (auto& e : a)
                            e = -e;
                    break;
                }
            auto rep = verify_relation(prob, a);
            if (!rep.passed) {
                out.notes.push_back("candidate rejected by the doubled-precision or group-law check");
                continue;
            }
            out.basis.push_back(
                RelationVector{a, rep.rhs, rep.residual, rep.residual_doubled, rep.group_residual, rep.passed});
        }
    }
    out.rank = static_cast<int>(out.basis.size());

    // Completeness: lattice vectors outside the span of the relation rows are
    // at least min |b_i*| (i past those rows) long; a missed relation would be
    // shorter than nmax.
    bool leading = true;
    for (std::size_t k = 0; k < relation_rows.size(); ++k)
        leading = leading && relation_rows[k] == k;
    Real gmin(-1);
    const auto& gso = search.reduced.gso_norms;
    for (std::size_t i = leading ? relation_rows.size() : 0; i < gso.size(); ++i)
        if (gmin < 0 || gso[i] < gmin)
            gmin = gso[i];
    const Real B = detail::int_to_real(rhs_bound);
    const Real col = thr * search.scale + Real(static_cast<long>(n + 2)) * B;
    const Real nmax = bmp::sqrt(Real(static_cast<long>(n + 2)) * B * B + Real(2) * col * col);
    if (gmin >= 0 && gmin <= nmax)
        throw precision_error("relation_lattice: the reduced basis does not certify completeness below the bound",
                              D + static_cast<int>(std::ceil(static_cast<double>(n + 2) * log10_abs(nmax / gmin))) +
                                  10);

    if (coeff_bound <= Integer(1000000)) {
        // Double precision resolves residuals down to about 1e-16 per unit of coefficient.
        const double cut = 1e-13 * static_cast<double>(n) * static_cast<double>(coeff_bound);
        auto bf = detail::brute_force_floor(fd, static_cast<long>(coeff_bound), cut);
        if (bf) {
            out.residual_floor = detail::relation_residual(*bf, fd).value;
            out.floor_method = "enumeration";
        }
    }
    if (out.floor_method.empty()) {
        Real best(-1);
        for (std::size_t row = 0; row < search.reduced.transform.size(); ++row) {
            bool rel = false;
            for (auto k : relation_rows)
                rel = rel || k == row;
            if (rel)
                continue;
            Real r = detail::weighted_residual(search.reduced.transform[row], values);
            if (best < 0 || r < best)
                best = r;
        }
        out.residual_floor = best;
        out.floor_method = "lll";
    }
    return out;
}

// Positive configuration constants of the coefficient-bound schemas.
struct BoundSchema {
    int n = 2;
    Real gamma1{1}, gamma2{1}, gamma5{1}, gamma6{1}, gamma7{1}, gamma9{1};
};

struct BoundsReport {
    Real generator_bound; // gamma1 kappa^gamma2 (h+1)^{2n} q^{(n-1)/2}
    Real torsion_bound;   // gamma5 (h+1) kappa^2
    Real eta_floor;       // gamma6 / (w kappa^{gamma7+3} (w + log kappa)^2), w = gamma9 (h+1)
    Real independence_bound; // n^{n-1} omega (q/eta)^{(n-1)/2}, q raised to eta if smaller
};

inline BoundsReport coefficient_bounds(const BoundSchema& s, long kappa, const Real& h_alpha, const Real& q)
{
    if (kappa < 1 || h_alpha < 0 || q < 1 || s.n < 1)
        throw input_error("coefficient_bounds: need kappa >= 1, h >= 0, q >= 1, n >= 1");
    for (const Real* g : {&s.gamma1, &s.gamma2, &s.gamma5, &s.gamma6, &s.gamma7, &s.gamma9})
        if (!(*g > 0))
            throw input_error("coefficient_bounds: constants must be positive");
    const Real k(kappa), h1 = h_alpha + Real(1), half = Real(s.n - 1) / Real(2);
    BoundsReport r;
    r.generator_bound = s.gamma1 * bmp::pow(k, s.gamma2) * bmp::pow(h1, Real(2 * s.n)) * bmp::pow(q, half);
    r.torsion_bound = s.gamma5 * h1 * k * k;
    const Real w = s.gamma9 * h1;
    const Real lw = w + bmp::log(k);
    r.eta_floor = s.gamma6 / (w * bmp::pow(k, s.gamma7 + Real(3)) * lw * lw);
    const Real qq = q > r.eta_floor ? q : r.eta_floor;
    r.independence_bound = bmp::pow(Real(s.n), Real(s.n - 1)) * r.torsion_bound * bmp::pow(qq / r.eta_floor, half);
    return r;
}

} // namespace legendre
