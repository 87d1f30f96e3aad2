// speclab: bound functionals, eigenvalue counts and constructions for 2D Schroedinger operators.

#include "speclab/bounds.hpp"
#include "speclab/constructions.hpp"
#include "speclab/partition.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/report.hpp"
#include "speclab/spectral1d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef SPECLAB_VERSION
#define SPECLAB_VERSION "0.0.0"
#endif

using namespace speclab;
using nlohmann::json;

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Options {
    std::string potential;
    std::string estimates;
    std::string alpha = "1";
    std::string range;
    std::string sequence;
    std::optional<double> p;
    double c = 0.046;
    double c_A = 0.25;
    double tol = 1e-11;
    std::string out;
    std::string format = "json";
    int jobs = 0;
    std::string id;
    bool unchecked = false;
    bool no_strict = false;
    double kappa = 1.559;
    double a = 1.0, b = std::exp(1.0);
    std::optional<double> x;
    std::optional<double> cutoff;
    ConstructionParams cp;
    std::string targets;
    VerifyBudget budget;
};

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const Value& v)
{
    if (v.is_finite())
        return fmt(v.value());
    return v.is_infinite() ? "inf" : "unknown";
}

// Doubles rounded to 12 significant digits so that reruns give identical bytes.
json canonical(const json& j)
{
    if (j.is_number_float())
        return std::stod(fmt(j.get<double>()));
    if (j.is_object() || j.is_array()) {
        json r = j;
        for (auto it = r.begin(); it != r.end(); ++it)
            *it = canonical(*it);
        return r;
    }
    return j;
}

std::string fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep = ',')
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep))
        if (!tok.empty())
            out.push_back(tok);
    return out;
}

// "0.999", "1-1e-3" or "1+0.05"; the second form keeps the complement exact.
Coupling parse_alpha(const std::string& s)
{
    try {
        if (s.size() > 2 && s[0] == '1' && s[1] == '-')
            return Coupling::from_complement(std::stod(s.substr(2)));
        if (s.size() > 2 && s[0] == '1' && s[1] == '+')
            return Coupling::from_complement(-std::stod(s.substr(2)));
        return Coupling::of(std::stod(s));
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad --alpha '" + s + "'");
    }
}

std::vector<EstimateId> parse_estimates(const std::string& s)
{
    if (s.empty() || s == "all")
        return all_estimates();
    std::vector<EstimateId> ids;
    for (auto& tok : split(s)) {
        std::string lower;
        for (char ch : tok)
            lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        bool found = false;
        for (EstimateId id : all_estimates()) {
            std::string n;
            for (char ch : to_string(id))
                n += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (n == lower) {
                ids.push_back(id);
                found = true;
            }
        }
        if (!found)
            throw ConfigError("unknown estimate '" + tok + "'");
    }
    return ids;
}

std::optional<NamedConstruction> builtin_construction(const Options& o)
{
    const std::string pre = "builtin:";
    if (o.potential.rfind(pre, 0) != 0)
        return std::nullopt;
    std::string name = o.potential.substr(pre.size());
    if (name == "zero")
        return std::nullopt;
    return build(name, o.cp);
}

Potential load_potential(const Options& o)
{
    if (o.potential.empty())
        throw ConfigError("--potential is required");
    const std::string pre = "builtin:";
    if (o.potential.rfind(pre, 0) == 0)
        return builtin_potential(o.potential.substr(pre.size()), o.cp);
    std::ifstream in(o.potential);
    if (!in)
        throw ConfigError("cannot read potential file '" + o.potential + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Potential V = Potential::from_config(ss.str());
    V.validate();
    return V;
}

std::string potential_key(const Options& o)
{
    if (o.potential.rfind("builtin:", 0) == 0 || o.potential.empty())
        return o.potential;
    std::ifstream in(o.potential);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json construction_params(const ConstructionParams& cp)
{
    json j{{"N", cp.N},         {"a1", cp.a1},       {"K", cp.K},     {"alpha_seq", cp.alpha_seq},
           {"unchecked", cp.unchecked}, {"coupling", cp.coupling}, {"psi", cp.psi}, {"disks", cp.disks},
           {"r0", cp.r0},       {"W_bound", cp.W_bound}, {"targets", cp.targets}};
    if (cp.alpha0)
        j["alpha0"] = *cp.alpha0;
    if (cp.k0)
        j["k0"] = *cp.k0;
    if (cp.p)
        j["p"] = *cp.p;
    return j;
}

// ---- commands ----

struct Output {
    json result;
    Table table;
    int status = 0;
};

BoundParams bound_params(const Options& o)
{
    BoundParams bp;
    bp.c = o.c;
    bp.c_A = o.c_A;
    bp.p = o.p;
    return bp;
}

Output cmd_bounds(const Options& o)
{
    Potential V = load_potential(o);
    Output out;
    BoundParams bp = bound_params(o);
    out.table.header = {"estimate", "value", "robust", "unknown_constants"};
    json reports = json::array();
    for (EstimateId id : parse_estimates(o.estimates)) {
        if (needs_p(id) && !bp.p)
            continue;
        auto r = evaluate(V, id, bp);
        reports.push_back(to_json(r));
        std::string consts;
        for (const auto& c : r.constants)
            if (!c.known)
                consts += (consts.empty() ? "" : " ") + c.symbol;
        out.table.rows.push_back({to_string(id), fmt(r.value), r.robust ? "yes" : "no", consts});
    }
    out.result["potential"] = V.name();
    out.result["reports"] = reports;
    if (!o.sequence.empty()) {
        SeqId sid = seq_from_string(o.sequence);
        std::optional<std::pair<long, long>> range;
        if (!o.range.empty()) {
            auto parts = split(o.range, ':');
            if (parts.size() != 2)
                throw ConfigError("--range expects lo:hi");
            range = std::make_pair(std::stol(parts[0]), std::stol(parts[1]));
        }
        auto prof = profile(V, sid, range, o.p);
        json seq = json::array();
        for (const auto& [n, v] : prof.values) {
            json e{{"n", n}};
            put_value(e, "value", v);
            seq.push_back(e);
            out.table.rows.push_back({to_string(sid) + "_" + std::to_string(n), fmt(v), "", ""});
        }
        out.result["sequence"] = {{"id", to_string(sid)},
                                  {"entries", seq},
                                  {"tail_below", prof.below.justification},
                                  {"tail_above", prof.above.justification}};
    }
    return out;
}

Output cmd_eigencount(const Options& o)
{
    Coupling al = parse_alpha(o.alpha);
    Output out;
    EigencountResult r;
    std::string name;
    auto con = builtin_construction(o);
    if (con && con->profile) {
        name = con->id;
        r = o.cutoff ? mode_count(*con->profile, al, 0, o.cutoff) : radial_eigencount(*con->profile, al);
    } else {
        Potential V = load_potential(o);
        name = V.name();
        if (o.cutoff)
            r = mode_count(log_reduce(V), al, 0, o.cutoff);
        else
            r = radial_eigencount(V, al.alpha);
    }
    out.result = to_json(r);
    out.result["potential"] = name;
    out.result["alpha"] = al.alpha;
    out.table.header = {"potential", "alpha", "mode", "count", "lower", "upper", "method"};
    out.table.rows.push_back({name, fmt(al.alpha), "all", fmt(r.count), std::to_string(r.lower),
                              r.count.is_infinite() ? "inf" : std::to_string(r.upper), r.method});
    for (const auto& m : r.modes) {
        std::string c = m.infinite ? "inf" : m.lower == m.upper ? std::to_string(m.lower) : "";
        out.table.rows.push_back({name, fmt(al.alpha), std::to_string(m.m), c, std::to_string(m.lower),
                                  m.infinite ? "inf" : std::to_string(m.upper), ""});
    }
    return out;
}

Output cmd_compare(const Options& o)
{
    Potential V = load_potential(o);
    BoundParams bp = bound_params(o);
    std::vector<EstimateId> ids;
    for (EstimateId id : parse_estimates(o.estimates))
        if (!needs_p(id) || bp.p)
            ids.push_back(id);
    Output out;
    Comparison cmp = compare(V, ids, bp, !o.no_strict);
    out.table.header = {"estimate", "verdict", "value", "robust"};
    json reps = json::array();
    for (const auto& r : cmp.reports) {
        reps.push_back(to_json(r));
        std::string verdict = r.value.is_finite() ? "finite" : r.value.is_infinite() ? "infinite" : "unknown";
        out.table.rows.push_back({to_string(r.id), verdict, fmt(r.value), r.robust ? "yes" : "no"});
    }
    out.result = {{"potential", V.name()}, {"reports", reps}, {"inconsistencies", cmp.inconsistencies}};
    if (!cmp.inconsistencies.empty())
        out.status = 3;
    return out;
}

NamedConstruction make_construction(const Options& o)
{
    if (o.id.empty())
        throw ConfigError("--id is required (one of: alpha1_i alpha1_ii alpha1_iii llogl_sharpness log3 ...)");
    if (o.id == "alpha1_iii" && o.unchecked)
        return build_alpha1_iii_unchecked(o.cp);
    return build(o.id, o.cp);
}

Output cmd_construct(const Options& o)
{
    auto c = make_construction(o);
    Output out;
    out.result = {{"id", c.id},
                  {"params", c.params},
                  {"data", c.data},
                  {"log_junctions", c.log_junctions},
                  {"warnings", c.warnings}};
    json claims = json::array();
    for (const auto& cl : c.claims)
        claims.push_back(cl.name);
    out.result["claims"] = claims;
    if (c.potential)
        out.result["config"] = c.potential->to_config();
    out.table.header = {"key", "value"};
    out.table.rows.push_back({"id", c.id});
    for (auto it = c.params.begin(); it != c.params.end(); ++it)
        out.table.rows.push_back({it.key(), it->dump()});
    for (std::size_t k = 0; k < c.log_junctions.size(); ++k)
        out.table.rows.push_back({"ln a_" + std::to_string(k + 1), fmt(c.log_junctions[k])});
    for (const auto& w : c.warnings)
        out.table.rows.push_back({"warning", w});
    return out;
}

Output cmd_verify(const Options& o)
{
    auto c = make_construction(o);
    auto rep = verify_claims(c, o.budget);
    Output out;
    out.result = to_json(rep);
    out.result["warnings"] = c.warnings;
    out.table.header = {"claim", "status", "detail"};
    for (const auto& r : rep.results)
        out.table.rows.push_back({r.name, to_string(r.status), r.detail});
    return out;
}

Output cmd_sharp(const Options& o)
{
    if (!(o.kappa > 0.0))
        throw ConfigError("--kappa must be positive");
    if (!(o.a > 0.0 && o.b > o.a))
        throw ConfigError("need 0 < a < b");
    SharpSobolev s{o.kappa, o.a, o.b};
    SharpSobolev0 z{o.kappa, o.a, o.b};
    double x = o.x ? *o.x : o.a;
    if (!(x >= o.a && x <= o.b))
        throw ConfigError("--x must lie in [a, b]");
    Output out;
    double phi = phi_kappa(o.kappa);
    out.result = {{"kappa", o.kappa}, {"a", o.a},       {"b", o.b},         {"x", x},
                  {"phi", phi},       {"C", s.C()},     {"C_at_x", s.C_at(x)}, {"C0", z.C0()},
                  {"C0_at_x", z.C0_at(x)}};
    out.table.header = {"kappa", "phi", "C", "C_at_x", "C0", "C0_at_x"};
    out.table.rows.push_back({fmt(o.kappa), fmt(phi), fmt(s.C()), fmt(s.C_at(x)), fmt(z.C0()), fmt(z.C0_at(x))});
    return out;
}

Output cmd_phi_max(const Options&)
{
    auto m = maximize_phi();
    double g = std::sqrt(2.0 * (4.0 * m.kappa + 1.0) * m.phi);
    Output out;
    out.result = {{"kappa_star", m.kappa}, {"phi_star", m.phi}, {"sqrt_2_4k1_phi", g}};
    out.table.header = {"kappa_star", "phi_star", "sqrt(2(4k+1)phi)"};
    out.table.rows.push_back({fmt(m.kappa), fmt(m.phi), fmt(g)});
    return out;
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string r = "\"";
    for (char ch : s)
        r += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return r + "\"";
}

void emit(std::ostream& os, const Options& o, const std::string& command, const json& config, const Output& out)
{
    std::string hash = fnv1a(canonical(config).dump());
    if (o.format == "json") {
        json env{{"tool", "speclab"},
                 {"version", SPECLAB_VERSION},
                 {"command", command},
                 {"config_hash", hash},
                 {"config", config},
                 {"result", out.result}};
        os << canonical(env).dump(2) << "\n";
        return;
    }
    os << "# speclab " << SPECLAB_VERSION << " " << command << " config " << hash << "\n";
    if (o.format == "csv") {
        for (std::size_t i = 0; i < out.table.header.size(); ++i)
            os << (i ? "," : "") << csv_cell(out.table.header[i]);
        os << "\n";
        for (const auto& row : out.table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return;
    }
    std::vector<std::size_t> w(out.table.header.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = out.table.header[i].size();
    for (const auto& row : out.table.rows)
        for (std::size_t i = 0; i < row.size() && i < w.size(); ++i)
            w[i] = std::max(w[i], row[i].size());
    auto line = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << row[i];
            if (i + 1 < row.size())
                os << std::string(w[i] - row[i].size() + 2, ' ');
        }
        os << "\n";
    };
    line(out.table.header);
    for (const auto& row : out.table.rows)
        line(row);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"speclab: eigenvalue-counting bounds for 2D Schroedinger operators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SPECLAB_VERSION);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
        s->add_option("--out", o.out, "write the report to this file");
        s->add_option("--jobs", o.jobs, "worker threads (SPECLAB_JOBS overrides)");
        s->add_option("--tol", o.tol, "relative quadrature tolerance");
    };
    auto potential = [&](CLI::App* s) {
        s->add_option("--potential", o.potential, "builtin:NAME or a potential config file");
    };
    auto con_params = [&](CLI::App* s) {
        s->add_option("--N", o.cp.N, "alpha1_i target count");
        s->add_option("--a1", o.cp.a1, "first junction in t = ln r");
        s->add_option("--K", o.cp.K, "pieces kept by alpha1_ii / alpha1_iii");
        s->add_option("--alpha-seq", o.cp.alpha_seq, "pow:q, gauss:q or list:a0,a1,...");
        s->add_option("--alpha0", o.cp.alpha0, "alpha_0 for alpha1_ii");
        s->add_option("--targets", o.targets, "N_k for alpha1_ii, comma separated");
        s->add_option("--k0", o.cp.k0, "k0 for alpha1_iii");
        s->add_option("--coupling", o.cp.coupling, "coupling of grig_radial");
        s->add_option("--psi", o.cp.psi, "N-function for llogl_sharpness: B, power:p, slog:q");
        s->add_option("--disks", o.cp.disks, "disks for llogl_sharpness");
    };
    auto est = [&](CLI::App* s) {
        s->add_option("--estimates", o.estimates, "comma separated estimate ids, or all");
        s->add_option("--p", o.p, "exponent for GrigNad, LNS3, LNS4");
        s->add_option("--c", o.c, "threshold for the B/D/G/B_p sums");
        s->add_option("--cA", o.c_A, "threshold for the sqrt(A_n) sums");
    };

    auto* bounds = app.add_subcommand("bounds", "evaluate the right-hand sides of named estimates");
    common(bounds);
    potential(bounds);
    con_params(bounds);
    est(bounds);
    bounds->add_option("--sequence", o.sequence, "also print one annular sequence (A, BoldA, ScriptB, ...)");
    bounds->add_option("--range", o.range, "index range lo:hi for --sequence");

    auto* eig = app.add_subcommand("eigencount", "count negative eigenvalues of a radial potential");
    common(eig);
    potential(eig);
    con_params(eig);
    eig->add_option("--alpha", o.alpha, "coupling: a number, 1-eps or 1+eps");
    eig->add_option("--cutoff", o.cutoff, "truncate the m = 0 problem at s = ln t");

    auto* cmp = app.add_subcommand("compare", "evaluate several estimates and check the implication diagram");
    common(cmp);
    potential(cmp);
    con_params(cmp);
    est(cmp);
    cmp->add_flag("--no-strict", o.no_strict, "report inconsistencies without failing");

    auto* cons = app.add_subcommand("construct", "build a named construction");
    common(cons);
    con_params(cons);
    cons->add_option("--id", o.id, "construction id");
    cons->add_flag("--unchecked", o.unchecked, "alpha1_iii: skip the k0 condition");
    cons->add_option("--p", o.cp.p, "exponent for the estimates that need one");

    auto* ver = app.add_subcommand("verify", "check the claims attached to a construction");
    common(ver);
    con_params(ver);
    ver->add_option("--id", o.id, "construction id");
    ver->add_flag("--unchecked", o.unchecked, "alpha1_iii: skip the k0 condition");
    ver->add_option("--p", o.cp.p, "exponent for the estimates that need one");
    ver->add_option("--doublings", o.budget.doublings, "cutoff doublings for divergence evidence");

    auto* sharp = app.add_subcommand("sharp-constants", "Phi(kappa) and the sharp Sobolev constants");
    common(sharp);
    sharp->add_option("--kappa", o.kappa, "kappa > 0");
    sharp->add_option("--a", o.a, "left end");
    sharp->add_option("--b", o.b, "right end");
    sharp->add_option("--x", o.x, "evaluation point (default a)");

    auto* phi = app.add_subcommand("phi-max", "maximise Phi(kappa)");
    common(phi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    int status = 0;
    try {
        if (o.jobs > 0 && !std::getenv("SPECLAB_JOBS"))
            setenv("SPECLAB_JOBS", std::to_string(o.jobs).c_str(), 1);
        set_quad_tolerance(o.tol);
        for (const auto& t : split(o.targets))
            o.cp.targets.push_back(std::stol(t));
        if (!o.cp.p)
            o.cp.p = o.p;
        o.cp.unchecked = o.unchecked;

        json config{{"command", command}, {"tol", o.tol}, {"format", o.format}};
        if (!o.potential.empty())
            config["potential"] = potential_key(o);
        if (command == "bounds" || command == "compare") {
            config["estimates"] = o.estimates.empty() ? "all" : o.estimates;
            config["c"] = o.c;
            config["c_A"] = o.c_A;
            if (o.p)
                config["p"] = *o.p;
            config["sequence"] = o.sequence;
            config["range"] = o.range;
        }
        if (command == "eigencount") {
            config["alpha"] = o.alpha;
            if (o.cutoff)
                config["cutoff"] = *o.cutoff;
        }
        if (command == "construct" || command == "verify" || o.potential.rfind("builtin:", 0) == 0) {
            config["id"] = o.id;
            config["construction"] = construction_params(o.cp);
        }
        if (command == "verify")
            config["budget"] = {{"doublings", o.budget.doublings}, {"below", o.budget.below},
                                {"above", o.budget.above}};
        if (command == "sharp-constants") {
            config["kappa"] = o.kappa;
            config["a"] = o.a;
            config["b"] = o.b;
            if (o.x)
                config["x"] = *o.x;
        }

        Output out;
        if (command == "bounds")
            out = cmd_bounds(o);
        else if (command == "eigencount")
            out = cmd_eigencount(o);
        else if (command == "compare")
            out = cmd_compare(o);
        else if (command == "construct")
            out = cmd_construct(o);
        else if (command == "verify")
            out = cmd_verify(o);
        else if (command == "sharp-constants")
            out = cmd_sharp(o);
        else
            out = cmd_phi_max(o);
        status = out.status;

        if (o.out.empty()) {
            emit(std::cout, o, command, config, out);
        } else {
            std::ofstream f(o.out);
            if (!f)
                throw ConfigError("cannot write '" + o.out + "'");
            emit(f, o, command, config, out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidParameters& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 1;
    } catch (const MissingDecayClass& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InconsistentVerdict& e) {
        std::cerr << "inconsistent verdict: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
    return status;
}
