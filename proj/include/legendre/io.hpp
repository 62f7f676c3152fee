#pragma once

#include <json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "heights.hpp"
#include "periods.hpp"
#include "relations.hpp"
#include "scanner.hpp"

namespace legendre::io {

using json = nlohmann::ordered_json;

// High-precision values print with all working digits; error magnitudes with six.
struct Format {
    int digits = 64;
};

inline std::string num(const Real& x, const Format& f) { return format_real(x, f.digits); }
inline std::string num(const Complex& z, const Format& f) { return format_complex(z, f.digits); }
inline std::string err(const Real& x) { return format_real(x, 6); }

// One component of z, printed as 0 when negligible at the working precision.
inline std::string part(const Real& x, const Complex& z, const Format& f)
{
    return bmp::abs(x) <= abs(z) * ten_pow(-f.digits) ? std::string("0") : num(x, f);
}

inline json integer(const Integer& z)
{
    if (bmp::abs(z) < Integer(1) << 53)
        return z.convert_to<long long>();
    return z.str();
}

inline json integers(const std::vector<Integer>& v)
{
    json a = json::array();
    for (const auto& z : v)
        a.push_back(integer(z));
    return a;
}

inline json integers(const std::vector<long>& v)
{
    json a = json::array();
    for (long z : v)
        a.push_back(z);
    return a;
}

inline json complexes(const std::vector<Complex>& v, const Format& f)
{
    json a = json::array();
    for (const auto& z : v)
        a.push_back(num(z, f));
    return a;
}

inline json to_json(const PeriodPair& p, const Format& f)
{
    return json{{"lambda", num(p.lambda, f)},
                {"f", num(p.f, f)},
                {"g", num(p.g, f)},
                {"tau", num(p.tau, f)},
                {"branch_log", p.branch_log}};
}

inline json to_json(const EllipticLog& e, const BettiCoords& b, const Format& f)
{
    return json{{"lambda", num(e.periods.lambda, f)},
                {"x", num(e.point.x, f)},
                {"y", num(e.point.y, f)},
                {"z", num(e.z, f)},
                {"u", num(b.u, f)},
                {"v", num(b.v, f)},
                {"f", num(e.periods.f, f)},
                {"g", num(e.periods.g, f)}};
}

inline json to_json(const BettiGrid& g, const Format& f)
{
    json samples = json::array();
    for (const auto& s : g.samples) {
        json uv = json::array();
        for (const auto& t : s.uv)
            uv.push_back(num(t, f));
        samples.push_back(json{{"i", s.i}, {"j", s.j}, {"lambda", num(s.lambda, f)}, {"uv", uv}});
    }
    return json{{"center", num(g.region.center, f)},
                {"radius", num(g.region.radius, f)},
                {"resolution", num(g.resolution, f)},
                {"abscissas", complexes(g.abscissas, f)},
                {"samples", samples},
                {"branch_log", g.branch_log}};
}

inline json to_json(const RelationLattice& L, const Format& f)
{
    json basis = json::array();
    for (const auto& r : L.basis)
        basis.push_back(json{{"a", integers(r.a)},
                             {"rhs", json::array({integer(r.rhs[0]), integer(r.rhs[1])})},
                             {"residuals",
                              json{{"working", err(r.residual)},
                                   {"doubled", err(r.residual_doubled)},
                                   {"group", err(r.group_residual)}}},
                             {"passed", r.passed}});
    return json{{"lambda0", num(L.lambda0, f)},
                {"abscissas", complexes(L.abscissas, f)},
                {"rank", L.rank},
                {"basis", basis},
                {"coeff_bound", integer(L.coeff_bound)},
                {"precision", L.precision_used},
                {"residual_floor", err(L.residual_floor)},
                {"floor_method", L.floor_method},
                {"notes", L.notes}};
}

inline json to_json(const AlgebraicNumber& a)
{
    return json{{"minpoly", to_string(a.minpoly)}, {"degree", a.degree}};
}

inline json to_json(const HeightReport& h, const Format& f)
{
    json j{{"subject", h.subject}, {"height", num(h.h, f)}, {"method", to_string(h.method)},
           {"precision", h.precision}};
    if (h.method == HeightMethod::duplication_limit)
        j.update(json{{"error", err(h.error)}, {"steps", h.steps}, {"partial", h.partial}});
    return j;
}

inline json to_json(const ZimmerAudit& a)
{
    return json{{"difference", err(a.difference)}, {"allowance", err(a.allowance)}, {"passed", a.passed}};
}

inline json to_json(const ConjugateAudit& a, const Format& f)
{
    return json{{"total", a.total},
                {"inside", a.inside},
                {"fraction", err(a.fraction)},
                {"passed", a.passed},
                {"conjugates", complexes(a.conjugates, Format{std::min(f.digits, 20)})}};
}

inline json to_json(const TorsionHit& h, const Format& f)
{
    json j{{"lambda0", num(h.lambda0, f)},
           {"order", h.order},
           {"betti_target", json::array({format_rational(h.betti_target[0]), format_rational(h.betti_target[1])})},
           {"newton_residual", err(h.newton_residual)},
           {"torsion_residual", err(h.torsion_residual)}};
    if (h.psi_residual)
        j["psi_residual"] = err(*h.psi_residual);
    j["recognized"] = h.recognized ? to_json(*h.recognized) : json(nullptr);
    j["weil_height"] = h.weil_height ? json(num(*h.weil_height, Format{20})) : json(nullptr);
    return j;
}

inline json to_json(const RelationVector& r)
{
    return json{{"a", integers(r.a)},
                {"rhs", json::array({integer(r.rhs[0]), integer(r.rhs[1])})},
                {"residual", err(r.residual)},
                {"residual_doubled", err(r.residual_doubled)},
                {"group_residual", err(r.group_residual)},
                {"passed", r.passed}};
}

inline json to_json(const IntersectionRecord& r, const Format& f)
{
    json j{{"lambda0", num(r.lambda0, f)},
           {"scanned", integers(r.scanned)},
           {"first_relation", to_json(r.first_relation)},
           {"second_relation", r.second_relation ? to_json(*r.second_relation) : json(nullptr)},
           {"rank", r.rank},
           {"coeff_bound", integer(r.coeff_bound)},
           {"certified", r.certified},
           {"notes", r.notes}};
    return j;
}

inline json to_json(const ScanStats& s)
{
    return json{{"seeds", s.seeds},
                {"converged", s.converged},
                {"distinct", s.distinct},
                {"rejected", s.rejected},
                {"notes", s.notes}};
}

inline json to_json(const CountReport& r, const Format& f)
{
    auto opt = [](const std::optional<double>& e) { return e ? json(*e) : json(nullptr); };
    return json{{"center", num(r.region.center, f)},
                {"radius", num(r.region.radius, f)},
                {"abscissas", complexes(r.abscissas, f)},
                {"T", integers(r.T_list)},
                {"one_relation_counts", integers(r.one_relation_counts)},
                {"two_relation_counts", integers(r.two_relation_counts)},
                {"two_relation_candidates", integers(r.two_relation_candidates)},
                {"tolerance", err(r.tolerance)},
                {"lipschitz_step", r.lipschitz_step},
                {"one_relation_exponent", opt(r.one_relation_exponent)},
                {"two_relation_exponent", opt(r.two_relation_exponent)},
                {"notes", r.notes}};
}

// ------------------------------------------------------------------------ CSV

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& cells)
{
    for (std::size_t k = 0; k < cells.size(); ++k)
        os << (k ? "," : "") << csv_field(cells[k]);
    os << "\n";
}

// re_lambda, im_lambda, u1, v1, u2, v2, ...
inline void write_csv(std::ostream& os, const BettiGrid& g, const Format& f)
{
    std::vector<std::string> head{"re_lambda", "im_lambda"};
    for (std::size_t j = 1; j <= g.abscissas.size(); ++j) {
        head.push_back("u" + std::to_string(j));
        head.push_back("v" + std::to_string(j));
    }
    csv_row(os, head);
    for (const auto& s : g.samples) {
        std::vector<std::string> row{part(s.lambda.re, s.lambda, f), part(s.lambda.im, s.lambda, f)};
        for (const auto& t : s.uv)
            row.push_back(num(t, f));
        csv_row(os, row);
    }
}

// order, re_lambda0, im_lambda0, p_over_m, r_over_m, newton_residual, torsion_residual, minpoly_degree, weil_height
inline void write_csv(std::ostream& os, const std::vector<TorsionHit>& hits, const Format& f)
{
    csv_row(os, {"order", "re_lambda0", "im_lambda0", "p_over_m", "r_over_m", "newton_residual", "torsion_residual",
                 "minpoly_degree", "weil_height"});
    for (const auto& h : hits)
        csv_row(os, {std::to_string(h.order), part(h.lambda0.re, h.lambda0, f), part(h.lambda0.im, h.lambda0, f),
                     format_rational(h.betti_target[0]), format_rational(h.betti_target[1]),
                     err(h.newton_residual), err(h.torsion_residual),
                     h.recognized ? std::to_string(h.recognized->degree) : "",
                     h.weil_height ? num(*h.weil_height, Format{20}) : ""});
}

// re_lambda0, im_lambda0, scanned (a_1 .. a_n p r, space separated), rank, certified, second_a
inline void write_csv(std::ostream& os, const std::vector<IntersectionRecord>& recs, const Format& f)
{
    auto joined = [](const auto& v) {
        std::ostringstream s;
        for (std::size_t k = 0; k < v.size(); ++k)
            s << (k ? " " : "") << v[k];
        return s.str();
    };
    csv_row(os, {"re_lambda0", "im_lambda0", "scanned", "rank", "certified", "second_a"});
    for (const auto& r : recs)
        csv_row(os, {part(r.lambda0.re, r.lambda0, f), part(r.lambda0.im, r.lambda0, f), joined(r.scanned), std::to_string(r.rank),
                     r.certified ? "1" : "0",
                     r.second_relation ? joined(r.second_relation->a) : ""});
}

// T, one_relation, two_relation, two_relation_candidates
inline void write_csv(std::ostream& os, const CountReport& r)
{
    csv_row(os, {"T", "one_relation", "two_relation", "two_relation_candidates"});
    for (std::size_t k = 0; k < r.T_list.size(); ++k)
        csv_row(os, {std::to_string(r.T_list[k]), std::to_string(r.one_relation_counts[k]),
                     std::to_string(r.two_relation_counts[k]), std::to_string(r.two_relation_candidates[k])});
}

// ------------------------------------------------------------------------ SVG

struct SvgMarker {
    ComplexD at;
    int group = 0;          // colour index (torsion order)
    bool highlight = false; // drawn with a red ring (rank-2 records)
    std::string title;
};

// Static SVG 1.1 plot of the lambda plane around a region: the disc outline,
// the real and imaginary axes where visible, and one marker per point.
inline void write_svg(std::ostream& os, const Region& region, const std::vector<SvgMarker>& markers,
                      const std::string& caption, const std::vector<std::string>& comments = {})
{
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79"};
    const double size = 480, pad = 40;
    const ComplexD c = to_double(region.center);
    const double r = static_cast<double>(region.radius) * 1.15;
    const double scale = (size - 2 * pad) / (2 * r);
    auto px = [&](double x) { return pad + (x - (c.real() - r)) * scale; };
    auto py = [&](double y) { return pad + ((c.imag() + r) - y) * scale; };

    std::ostringstream s;
    s << std::setprecision(6);
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    for (const auto& line : comments)
        s << "<!-- " << line << " -->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size + 30
      << "\" viewBox=\"0 0 " << size << " " << size + 30 << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (c.imag() - r <= 0 && 0 <= c.imag() + r)
        s << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << size - pad << "\" y2=\"" << py(0)
          << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    if (c.real() - r <= 0 && 0 <= c.real() + r)
        s << "<line x1=\"" << px(0) << "\" y1=\"" << pad << "\" x2=\"" << px(0) << "\" y2=\"" << size - pad
          << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    s << "<circle cx=\"" << px(c.real()) << "\" cy=\"" << py(c.imag()) << "\" r=\""
      << static_cast<double>(region.radius) * scale << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.5\"/>\n";
    s << "<text x=\"" << pad << "\" y=\"" << size - pad + 18 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << "re " << c.real() - r << " .. " << c.real() + r << ", im " << c.imag() - r << " .. " << c.imag() + r
      << "</text>\n";
    for (const auto& m : markers) {
        const char* colour = palette[static_cast<std::size_t>(std::max(m.group, 0)) % 10];
        s << "<circle cx=\"" << px(m.at.real()) << "\" cy=\"" << py(m.at.imag()) << "\" r=\"3.5\" fill=\"" << colour
          << "\"><title>" << m.title << "</title></circle>\n";
        if (m.highlight)
            s << "<circle cx=\"" << px(m.at.real()) << "\" cy=\"" << py(m.at.imag())
              << "\" r=\"8\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
    }
    s << "<text x=\"" << pad << "\" y=\"" << size + 20 << "\" font-family=\"sans-serif\" font-size=\"13\">" << caption
      << "</text>\n";
    s << "</svg>\n";
    os << s.str();
}

inline std::vector<SvgMarker> markers(const std::vector<TorsionHit>& hits)
{
    std::vector<SvgMarker> out;
    for (const auto& h : hits)
        out.push_back({to_double(h.lambda0), h.order, false, "order " + std::to_string(h.order)});
    return out;
}

inline std::vector<SvgMarker> markers(const std::vector<IntersectionRecord>& recs)
{
    std::vector<SvgMarker> out;
    for (const auto& r : recs)
        out.push_back({to_double(r.lambda0), r.rank, r.rank >= 2, "rank " + std::to_string(r.rank)});
    return out;
}

} // namespace legendre::io
