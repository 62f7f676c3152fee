#include "legendre/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <thread>
#include <vector>

namespace legendre::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// "2,3,5" or, for complex entries, "1,1;2;3,-1" (a single complex entry is "1,1;").
std::vector<ComplexRational> parse_complex_list(const std::string& text, const char* what)
{
    if (text.empty())
        throw input_error(std::string("missing --") + what);
    std::vector<ComplexRational> out;
    if (text.find(';') != std::string::npos) {
        for (const auto& item : split(text, ';'))
            if (!item.empty())
                out.push_back(parse_complex_rational(item));
    } else {
        for (const auto& item : split(text, ','))
            out.push_back(ComplexRational{parse_rational(item), Rational(0)});
    }
    return out;
}

ComplexRational parse_one(const std::string& text, const char* what)
{
    if (text.empty())
        throw input_error(std::string("missing --") + what);
    return parse_complex_rational(text);
}

std::vector<long> parse_longs(const std::string& text, const char* what)
{
    std::vector<long> out;
    for (const auto& item : split(text, ',')) {
        try {
            std::size_t used = 0;
            long v = std::stol(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw input_error(std::string("--") + what + ": cannot parse integer '" + item + "'");
        }
    }
    return out;
}

// Integer coefficients from the leading term down: "1,0,-2" is x^2 - 2.
IntPoly parse_poly(const std::string& text)
{
    if (text.empty())
        throw input_error("missing --poly");
    std::vector<Integer> c;
    for (const auto& item : split(text, ',')) {
        Rational r = parse_rational(item);
        if (denominator(r) != 1)
            throw input_error("--poly coefficients must be integers");
        c.push_back(numerator(r));
    }
    std::reverse(c.begin(), c.end());
    IntPoly p(std::move(c));
    if (p.degree() < 1)
        throw input_error("--poly must have degree >= 1");
    return p;
}

Region parse_region(const RunConfig& c)
{
    Region r{parse_complex(c.center), Real(parse_rational(c.radius))};
    if (!(r.radius > 0))
        throw input_error("--radius must be positive");
    return r;
}

std::vector<Abscissa> parse_abscissas(const RunConfig& c)
{
    std::vector<Abscissa> out;
    for (const auto& q : parse_complex_list(c.abscissas, "abscissas"))
        out.push_back(Abscissa::of(q));
    return out;
}

// Writes the chosen format with a provenance header.
class Emitter {
public:
    Emitter(const RunConfig& cfg, std::ostream& os) : cfg_(cfg), os_(os) {}

    json provenance() const
    {
        return json{{"tool", "legendre"},
                    {"version", LEGENDRE_VERSION},
                    {"command", cfg_.command},
                    {"precision", precision::digits()},
                    {"config_hash", cfg_.hash()}};
    }

    std::string header_line() const
    {
        return std::string("legendre ") + LEGENDRE_VERSION + " " + cfg_.command +
               " precision=" + std::to_string(precision::digits()) + " config=" + cfg_.hash();
    }

    void document(const json& result) const
    {
        json doc{{"provenance", provenance()}, {"result", result}};
        os_ << doc.dump(2) << "\n";
    }

    void lines(const std::vector<json>& records, const json& summary) const
    {
        os_ << json{{"provenance", provenance()}}.dump() << "\n";
        for (const auto& r : records)
            os_ << r.dump() << "\n";
        os_ << json{{"summary", summary}}.dump() << "\n";
    }

    void csv(const std::function<void(std::ostream&)>& body) const
    {
        os_ << "# " << header_line() << "\n";
        body(os_);
    }

    void svg(const Region& region, const std::vector<io::SvgMarker>& m, const std::string& caption) const
    {
        io::write_svg(os_, region, m, caption, {header_line()});
    }

private:
    const RunConfig& cfg_;
    std::ostream& os_;
};

void require_format(const std::string& f, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed)
        if (f == a)
            return;
    std::string list;
    for (const char* a : allowed)
        list += (list.empty() ? "" : ", ") + std::string(a);
    throw input_error("format '" + f + "' not available for this command (use " + list + ")");
}

io::Format fmt() { return io::Format{precision::digits()}; }

Real parse_resolution(const RunConfig& c)
{
    Real r(parse_rational(c.resolution));
    if (!(r > 0))
        throw input_error("--resolution must be positive");
    return r;
}

ScanOptions scan_options(const RunConfig& c)
{
    ScanOptions o;
    o.resolution = static_cast<double>(parse_resolution(c));
    o.margin = c.margin;
    return o;
}

// ------------------------------------------------------------------ commands

void cmd_periods(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"json"});
    auto p = period_pair(parse_one(c.lambda, "lambda").value());
    e.document(io::to_json(p, fmt()));
}

void cmd_ellog(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"json"});
    const Complex l = parse_one(c.lambda, "lambda").value();
    LegendreCurve curve(l);
    const Complex x = parse_one(c.x, "x").value();
    const Complex y = c.y.empty() ? sqrt(cubic(curve, x)) : parse_complex(c.y);
    const CurvePoint P = CurvePoint::affine(x, y);
    auto periods = period_pair(l);
    auto lg = elliptic_log(curve, P, periods);
    e.document(io::to_json(lg, betti_coords(lg.z, periods), fmt()));
}

void cmd_betti(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"json", "csv"});
    std::vector<Complex> xs;
    for (const auto& q : parse_complex_list(c.abscissas, "abscissas"))
        xs.push_back(q.value());
    auto grid = betti_grid(parse_region(c), xs, parse_resolution(c), c.margin);
    if (f == "csv")
        e.csv([&](std::ostream& os) { io::write_csv(os, grid, fmt()); });
    else
        e.document(io::to_json(grid, fmt()));
}

void cmd_relations(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"json"});
    const ComplexRational l = parse_one(c.lambda, "lambda");
    const auto xs = parse_complex_list(c.abscissas, "abscissas");
    std::vector<int> yb;
    if (!c.ybranches.empty())
        for (long s : parse_longs(c.ybranches, "ybranches")) {
            if (s != 1 && s != -1)
                throw input_error("--ybranches entries must be 1 or -1");
            yb.push_back(static_cast<int>(s));
        }
    if (!yb.empty() && yb.size() != xs.size())
        throw input_error("--ybranches needs one sign per abscissa");
    if (c.bound < 1)
        throw input_error("--bound must be >= 1");
    auto L = relation_lattice(make_problem(l, xs, yb), Integer(c.bound));
    json out = io::to_json(L, fmt());

    // Reference values of the coefficient-bound schemas; reported, never enforced.
    BoundSchema s;
    s.n = static_cast<int>(xs.size());
    s.gamma1 = c.gamma1, s.gamma2 = c.gamma2, s.gamma5 = c.gamma5;
    s.gamma6 = c.gamma6, s.gamma7 = c.gamma7, s.gamma9 = c.gamma9;
    Real h = l.im == 0 ? rational_height(l.re) : Real(0);
    for (const auto& x : xs)
        if (x.im == 0 && rational_height(x.re) > h)
            h = rational_height(x.re);
    auto b = coefficient_bounds(s, 1, h, Real(c.q));
    out["bound_schemas"] = json{{"generator_bound", io::err(b.generator_bound)},
                                {"torsion_bound", io::err(b.torsion_bound)},
                                {"eta_floor", io::err(b.eta_floor)},
                                {"independence_bound", io::err(b.independence_bound)},
                                {"note", "configured constants, reference only"}};
    e.document(out);
}

void cmd_torsion_scan(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"jsonl", "json", "csv", "svg"});
    auto xs = parse_abscissas(c);
    if (xs.size() != 1)
        throw input_error("torsion-scan takes exactly one abscissa");
    const Region region = parse_region(c);
    auto scan = torsion_scan(xs[0], c.max_order, region, scan_options(c));
    const auto F = fmt();
    if (f == "csv")
        return e.csv([&](std::ostream& os) { io::write_csv(os, scan.hits, F); });
    if (f == "svg")
        return e.svg(region, io::markers(scan.hits),
                     "torsion parameters for x = " + xs[0].label() + ", colour = order");
    std::vector<json> recs;
    for (const auto& h : scan.hits)
        recs.push_back(io::to_json(h, F));
    json summary = io::to_json(scan.stats);
    summary["hits"] = scan.hits.size();
    if (f == "json")
        e.document(json{{"hits", recs}, {"stats", summary}});
    else
        e.lines(recs, summary);
}

void cmd_intersect_scan(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"jsonl", "json", "csv", "svg"});
    const Region region = parse_region(c);
    auto scan = two_relation_scan(parse_abscissas(c), c.T, region, scan_options(c));
    const auto F = fmt();
    if (f == "csv")
        return e.csv([&](std::ostream& os) { io::write_csv(os, scan.records, F); });
    if (f == "svg")
        return e.svg(region, io::markers(scan.records),
                     "two-relation scan, T = " + std::to_string(c.T) + ", ringed = rank 2");
    std::vector<json> recs;
    long rank2 = 0;
    for (const auto& r : scan.records) {
        recs.push_back(io::to_json(r, F));
        rank2 += r.rank >= 2;
    }
    json summary = io::to_json(scan.stats);
    summary["records"] = scan.records.size();
    summary["rank2_records"] = rank2;
    if (f == "json")
        e.document(json{{"records", recs}, {"stats", summary}});
    else
        e.lines(recs, summary);
}

void cmd_count(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"json", "csv"});
    std::vector<Complex> xs;
    for (const auto& q : parse_complex_list(c.abscissas, "abscissas"))
        xs.push_back(q.value());
    auto grid = betti_grid(parse_region(c), xs, parse_resolution(c), c.margin);
    const Real tol = c.tolerance == "lipschitz" ? Real(grid_lipschitz_step(grid)) : Real(parse_rational(c.tolerance));
    auto rep = count_rational_hits(grid, parse_longs(c.T_list, "T-list"), tol, scan_options(c));
    if (f == "csv")
        e.csv([&](std::ostream& os) { io::write_csv(os, rep); });
    else
        e.document(io::to_json(rep, fmt()));
}

void cmd_height(const RunConfig& c, const Emitter& e, const std::string& f)
{
    require_format(f, {"json"});
    const auto F = fmt();
    if (!c.poly.empty()) {
        IntPoly p = parse_poly(c.poly);
        AlgebraicNumber a{primitive_part(p), Complex(0), p.degree()};
        e.document(json{{"weil_height", io::to_json(weil_height(a), F)}});
        return;
    }
    const ComplexRational l = parse_one(c.lambda, "lambda");
    if (l.im != 0)
        throw input_error("height: Neron-Tate heights need a rational --lambda");
    if (c.point.empty())
        throw input_error("height: give --point x,y (rational) or --poly");
    auto parts = split(c.point, ',');
    if (parts.size() != 2)
        throw input_error("--point must be x,y");
    RationalPoint P{false, parse_rational(parts[0]), parse_rational(parts[1])};
    auto nt = neron_tate(l.re, P);
    e.document(json{{"neron_tate", io::to_json(nt, F)},
                    {"naive_x_height", io::num(rational_height(P.x), F)},
                    {"zimmer_audit", io::to_json(zimmer_audit(l.re, P, Real(c.zimmer_c)))}});
}

void cmd_audit_conjugates(const RunConfig& c, const Emitter& e, const std::string& f)
{
    const auto F = fmt();
    std::vector<Complex> excluded;
    for (const auto& q : parse_complex_list(c.excluded, "excluded"))
        excluded.push_back(q.value());
    const Real delta(c.delta);
    if (!c.poly.empty()) {
        require_format(f, {"json"});
        IntPoly p = primitive_part(parse_poly(c.poly));
        AlgebraicNumber a{p, Complex(0), p.degree()};
        e.document(io::to_json(conjugate_audit(a, delta, excluded), F));
        return;
    }
    require_format(f, {"jsonl", "json"});
    auto xs = parse_abscissas(c);
    if (xs.size() != 1)
        throw input_error("audit-conjugates scans take exactly one abscissa");
    auto scan = torsion_scan(xs[0], c.max_order, parse_region(c), scan_options(c));
    std::vector<json> recs;
    long audited = 0, passed = 0;
    for (const auto& h : scan.hits) {
        if (!h.recognized)
            continue;
        auto a = conjugate_audit(*h.recognized, delta, excluded);
        ++audited;
        passed += a.passed;
        json j{{"lambda0", io::num(h.lambda0, F)}, {"order", h.order}, {"minpoly", to_string(h.recognized->minpoly)}};
        j["audit"] = io::to_json(a, F);
        recs.push_back(j);
    }
    json summary{{"hits", scan.hits.size()}, {"audited", audited}, {"passed", passed}};
    if (f == "json")
        e.document(json{{"audits", recs}, {"summary", summary}});
    else
        e.lines(recs, summary);
}

struct Command {
    const char* name;
    const char* help;
    const char* default_format;
    void (*run)(const RunConfig&, const Emitter&, const std::string&);
};

const std::vector<Command>& commands()
{
    static const std::vector<Command> list{
        {"periods", "period basis f, g and tau at --lambda", "json", cmd_periods},
        {"ellog", "elliptic logarithm and Betti coordinates of (--x, --y) at --lambda", "json", cmd_ellog},
        {"betti", "Betti map samples over a disc", "json", cmd_betti},
        {"relations", "relation lattice at --lambda for --abscissas up to --bound", "json", cmd_relations},
        {"torsion-scan", "torsion parameters of one abscissa in a disc", "jsonl", cmd_torsion_scan},
        {"intersect-scan", "parameters carrying two independent relations", "jsonl", cmd_intersect_scan},
        {"count", "relation counts on a Betti grid as T grows", "json", cmd_count},
        {"height", "Neron-Tate height of --point or Weil height of a root of --poly", "json", cmd_height},
        {"audit-conjugates", "share of conjugates inside the delta-region", "jsonl", cmd_audit_conjugates},
    };
    return list;
}

void add_options(CLI::App& app, RunConfig& c)
{
    app.add_option("--precision", c.precision, "working precision in decimal digits (>= 32)");
    app.add_option("--workers", c.workers, "worker threads (0 = hardware threads)");
    app.add_option("--format", c.format, "json, jsonl, csv or svg");
    app.add_option("--output,-o", c.output, "output file (default standard output)");
    app.add_option("--lambda", c.lambda, "parameter, \"re\" or \"re,im\", exact decimals or fractions")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--x", c.x, "abscissa of the point")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--y", c.y, "ordinate of the point (default principal square root)")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--abscissas", c.abscissas, "\"2,3,5\" or, with complex entries, \"1,1;2\"")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--ybranches", c.ybranches, "sign of y per abscissa, e.g. \"1,-1\"")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--point", c.point, "rational point x,y")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--poly", c.poly, "integer polynomial, coefficients from the leading term down")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--excluded", c.excluded, "excluded parameter values for conjugate audits")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--center", c.center, "disc center")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--radius", c.radius, "disc radius");
    app.add_option("--resolution", c.resolution, "Betti grid step");
    app.add_option("--margin", c.margin, "distance kept from {0, 1} (>= 0.01)");
    app.add_option("--bound", c.bound, "coefficient bound for relations");
    app.add_option("--T", c.T, "height bound for intersect-scan");
    app.add_option("--max-order", c.max_order, "largest torsion order");
    app.add_option("--T-list", c.T_list, "bounds for count, e.g. \"4,8,16\"")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--tolerance", c.tolerance, "count tolerance, a number or \"lipschitz\"");
    app.add_option("--delta", c.delta, "delta for conjugate audits");
    app.add_option("--zimmer-c", c.zimmer_c, "constant of the Zimmer audit");
    app.add_option("--q", c.q, "height floor fed to the bound schemas");
    app.add_option("--gamma1", c.gamma1);
    app.add_option("--gamma2", c.gamma2);
    app.add_option("--gamma5", c.gamma5);
    app.add_option("--gamma6", c.gamma6);
    app.add_option("--gamma7", c.gamma7);
    app.add_option("--gamma9", c.gamma9);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Period lattices, Betti coordinates and relation scans for y^2 = x(x-1)(x-lambda)", "legendre"};
    app.set_version_flag("--version", LEGENDRE_VERSION);
    app.set_config("--config", "", "plain key=value file; flags given on the command line take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    add_options(app, cfg);
    for (const auto& c : commands())
        app.add_subcommand(c.name, c.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << LEGENDRE_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    const auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    const Command* cmd = nullptr;
    for (const auto& c : commands())
        if (cfg.command == c.name)
            cmd = &c;
    std::string format = cfg.format.empty() ? cmd->default_format : cfg.format;
    if (cfg.format.empty() && cfg.command == "audit-conjugates" && !cfg.poly.empty())
        format = "json";
    cfg.format = format;

    try {
        if (cfg.precision < 32)
            throw input_error("--precision must be at least 32 digits");
        if (cfg.margin < 0.01)
            throw input_error("--margin must be at least 0.01");
        precision::set_digits(cfg.precision);
        parallel::set_workers(cfg.workers > 0 ? cfg.workers
                                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));

        // Build the whole output before touching the destination.
        std::ostringstream buf;
        Emitter emitter(cfg, buf);
        cmd->run(cfg, emitter, format);
        if (cfg.output.empty()) {
            out << buf.str();
        } else {
            std::ofstream f(cfg.output, std::ios::binary);
            if (!f)
                throw input_error("cannot open output file " + cfg.output);
            f << buf.str();
        }
        return 0;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const precision_error& e) {
        err << "precision error: " << e.what();
        if (e.required_digits() > 0)
            err << " (needs about " << e.required_digits() << " digits)";
        err << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace legendre::cli
