// Acceptance suite: one line per criterion, exit status 1 if any criterion fails.

#include "speclab/bounds.hpp"
#include "speclab/constructions.hpp"
#include "speclab/orlicz.hpp"
#include "speclab/partition.hpp"
#include "speclab/potentials.hpp"
#include "speclab/spectral1d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace speclab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool informational = false;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    va_list ap, aq;
    va_start(ap, f);
    va_copy(aq, ap);
    std::string out(std::vsnprintf(nullptr, 0, f, ap), '\0');
    va_end(ap);
    std::vsnprintf(out.data(), out.size() + 1, f, aq);
    va_end(aq);
    return out;
}

int failures = 0;

void run(const std::string& label, double limit_s, const std::function<Outcome()>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = limit_s <= 0.0 || dt < limit_s;
    bool pass = o.pass && in_time;
    if (!in_time)
        o.detail += fmt("; runtime %.2fs exceeds %.0fs", dt, limit_s);
    if (!pass && !o.informational)
        ++failures;
    std::printf("%s %s: %s (%.2fs)\n", o.informational ? (pass ? "[INFO pass]" : "[INFO fail]") : (pass ? "[PASS]" : "[FAIL]"),
                label.c_str(), o.detail.c_str(), dt);
    std::fflush(stdout);
}

// 1
Outcome phi_max()
{
    auto m = maximize_phi();
    double lhs = std::sqrt(2.0 * (4.0 * m.kappa + 1.0) * m.phi);
    bool ok = std::fabs(m.kappa - 1.559) <= 0.01 && std::fabs(m.phi - 0.046) <= 0.001 && std::fabs(lhs - 0.816) <= 0.005;
    return {ok, fmt("kappa*=%.6f Phi*=%.7f sqrt(2(4kappa*+1)Phi*)=%.6f", m.kappa, m.phi, lhs)};
}

// 2
Outcome dirichlet_oracle()
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int bad = 0, near = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        double a = std::exp(-2.0 + 4.0 * U(rng));
        double b = a * std::exp(0.3 + 6.0 * U(rng));
        double L = std::log(b / a);
        double beta = 20.0 * (1.0 - U(rng)); // (0, 20]
        if (i < 20) {
            // largest threshold not above 20, approached from a random side
            int N = std::max(1, static_cast<int>(std::floor(std::sqrt(19.75) * L / kPi)));
            N = 1 + static_cast<int>(U(rng) * N);
            double th = 0.25 + std::pow(N * kPi / L, 2);
            double off = (0.05 + 0.9 * U(rng)) * 1e-6;
            beta = th + (U(rng) < 0.5 ? -off : off);
            if (beta > 20.0)
                beta = th - off;
            ++near;
        }
        SturmProblem p{[beta](double t) { return beta / (t * t); }, a, b};
        long closed = dirichlet_count(a, b, beta);
        auto r = pruefer_count(p, 1.0);
        if (!(r.count.is_finite() && r.lower == closed)) {
            if (bad++ == 0)
                first = fmt("; first mismatch a=%g b=%g beta=%.12g closed=%ld pruefer=[%ld,%ld]", a, b, beta, closed,
                            r.lower, r.upper);
        }
    }
    return {bad == 0, fmt("200 cases (%d within 1e-6 of a threshold), %d mismatches", near, bad) + first};
}

// 3
Outcome sharp_constants()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int bad = 0;
    double worst_ratio = 0.0, worst_ratio0 = 0.0, lo_grid = 1e9, hi_grid = 0.0, lo_grid0 = 1e9, hi_grid0 = 0.0;
    std::string first;
    auto fail = [&](const std::string& m) {
        if (bad++ == 0)
            first = "; first failure: " + m;
    };
    for (int i = 0; i < 25; ++i) {
        double kappa = std::exp(std::log(0.05) + U(rng) * std::log(400.0)); // 0.05 .. 20
        double a = 0.1 + 4.9 * U(rng);
        double b = a * (1.2 + 19.0 * U(rng));

        SharpSobolev s{kappa, a, b};
        double C = s.C();
        double rr = s.rayleigh(a);
        worst_ratio = std::max(worst_ratio, std::fabs(rr / s.C_at(a) - 1.0));
        if (std::fabs(rr / s.C_at(a) - 1.0) > 1e-6 || std::fabs(C / s.C_at(a) - 1.0) > 1e-12)
            fail(fmt("Rayleigh ratio kappa=%g a=%g b=%g: %.12g vs %.12g", kappa, a, b, rr, s.C_at(a)));
        // a generic interior point too
        double x = a + (b - a) * (0.1 + 0.8 * U(rng));
        if (std::fabs(s.rayleigh(x) / s.C_at(x) - 1.0) > 1e-6)
            fail(fmt("Rayleigh ratio at interior x=%g", x));
        int arg = 0;
        double best = -1.0;
        for (int j = 0; j <= 400; ++j) {
            double v = s.C_at(a + (b - a) * j / 400.0);
            if (v > best * (1.0 + 1e-12)) {
                best = v;
                arg = j;
            }
        }
        if (arg != 0)
            fail(fmt("argmax of C(kappa;x) at grid node %d", arg));
        auto g = grid_rayleigh_max(s, 2000);
        lo_grid = std::min(lo_grid, g.value / C);
        hi_grid = std::max(hi_grid, g.value / C);
        if (!(g.value >= 0.999 * C && g.value <= C * (1.0 + 1e-3)))
            fail(fmt("grid maximum %.10g vs C %.10g", g.value, C));

        SharpSobolev0 z{kappa, a, b};
        double C0 = z.C0();
        double want = 1.0 / (std::tanh(std::sqrt(kappa)) * std::sqrt(kappa));
        if (std::fabs(C0 / want - 1.0) > 1e-12)
            fail("C0 closed form");
        double r0 = z.rayleigh(a);
        worst_ratio0 = std::max(worst_ratio0, std::fabs(r0 / C0 - 1.0));
        if (std::fabs(r0 / C0 - 1.0) > 1e-6)
            fail(fmt("C0 Rayleigh ratio %.12g vs %.12g", r0, C0));
        if (std::fabs(z.rayleigh(x) / z.C0_at(x) - 1.0) > 1e-6)
            fail("C0 Rayleigh ratio at interior x");
        best = -1.0;
        arg = 0;
        for (int j = 0; j <= 400; ++j) {
            double v = z.C0_at(a + (b - a) * j / 400.0);
            if (v > best * (1.0 + 1e-12)) {
                best = v;
                arg = j;
            }
        }
        if (arg != 0)
            fail(fmt("argmax of C0(kappa;x) at grid node %d", arg));
        auto g0 = grid_rayleigh_max(z, 2000);
        lo_grid0 = std::min(lo_grid0, g0.value / C0);
        hi_grid0 = std::max(hi_grid0, g0.value / C0);
        if (!(g0.value >= 0.999 * C0 && g0.value <= C0 * (1.0 + 1e-3)))
            fail(fmt("C0 grid maximum %.10g vs %.10g", g0.value, C0));
    }
    return {bad == 0, fmt("25 cases; Rayleigh rel err C %.2e, C0 %.2e; grid/C in [%.6f, %.6f], grid/C0 in [%.6f, %.6f]",
                          worst_ratio, worst_ratio0, lo_grid, hi_grid, lo_grid0, hi_grid0) +
                          first};
}

// 4
Outcome alpha1_i_counts()
{
    std::string d;
    bool ok = true;
    for (int N : {1, 2, 3, 5}) {
        ConstructionParams P;
        P.N = N;
        auto c = build("alpha1_i", P);
        const LogProfile& G = *c.profile;
        auto r = radial_eigencount(G, Coupling::from_complement(1e-3));
        bool exact = r.count.is_finite() && r.lower == N && r.upper == N;
        // cutoffs T, 2T, 4T in s = ln t, doubled from s2 until growth past 3N shows
        double T = c.log_junctions[1];
        long n[3] = {0, 0, 0};
        bool grew = false;
        for (int i = 0; i <= 12 && !grew; ++i) {
            if (i > 0)
                T *= 2.0;
            for (int j = 0; j < 3; ++j)
                n[j] = mode_count(G, Coupling::of(1.05), 0, T * (1 << j)).lower;
            grew = n[0] < n[1] && n[1] < n[2] && n[2] > 3 * N;
        }
        ok = ok && exact && grew;
        d += fmt("%sN=%d: count(1-1e-3)=%s, counts at s=%g x{1,2,4}: %ld,%ld,%ld", d.empty() ? "" : "; ", N,
                 r.count.str().c_str(), T, n[0], n[1], n[2]);
    }
    return {ok, d};
}

// 5
struct Alpha3 {
    std::vector<long> counts, zeros;
};

Alpha3 alpha1_iii_run(const std::string& seq, long k0, int kmax)
{
    ConstructionParams P;
    P.alpha_seq = seq;
    P.k0 = k0;
    P.K = kmax + 2;
    auto c = build_alpha1_iii_unchecked(P);
    const LogProfile& G = *c.profile;
    auto seqp = AlphaSequence::parse(seq);
    Alpha3 out;
    for (int k = 1; k <= kmax + 1; ++k) {
        Coupling b = Coupling::from_complement(seqp.complement(k0 - 1 + k));
        auto r = radial_eigencount(G, b);
        out.counts.push_back(r.count.is_finite() ? r.lower : -1);
        if (k <= kmax)
            out.zeros.push_back(interval_zero_count(G, b, c.log_junctions[0], c.log_junctions[k]));
    }
    return out;
}

Outcome alpha1_iii_check(const std::string& seq, long k0, bool informational)
{
    auto r = alpha1_iii_run(seq, k0, 5);
    bool ok = true;
    std::string cs, ds, zs;
    for (std::size_t i = 0; i < r.counts.size(); ++i) {
        cs += (i ? "," : "") + std::to_string(r.counts[i]);
        if (i + 1 < r.counts.size()) {
            long gap = r.counts[i + 1] - r.counts[i];
            ds += (i ? "," : "") + std::to_string(gap);
            ok = ok && r.counts[i] >= 0 && r.counts[i + 1] >= 0 && gap == 1;
        }
    }
    for (std::size_t i = 0; i < r.zeros.size(); ++i) {
        zs += (i ? "," : "") + std::to_string(r.zeros[i]);
        ok = ok && r.zeros[i] == static_cast<long>(i) + 1;
    }
    Outcome o{ok, fmt("alpha_k from %s, k0=%ld: counts k=1..6 %s (gaps %s, want all 1); zeros k=1..5 %s (want 1..5)",
                      seq.c_str(), k0, cs.c_str(), ds.c_str(), zs.c_str())};
    if (!informational) {
        Value s = k0_sum(AlphaSequence::parse(seq), k0);
        o.detail += "; k0 condition sum = " + s.str() + " (needs <= 1/8)";
    }
    o.informational = informational;
    return o;
}

// 6
struct CorpusItem {
    std::string name;
    LogProfile G;
};

Potential radial_piece(const std::string& name, double r_lo, double r_hi, const std::string& f)
{
    Region r;
    r.r_lo = r_lo;
    r.r_hi = r_hi;
    r.radial = Formula::parse(f);
    return Potential(name, {r});
}

std::vector<CorpusItem> radial_corpus()
{
    std::vector<CorpusItem> v;
    auto add = [&](const Potential& V) { v.push_back({V.name(), log_reduce(V)}); };
    // plateaus h on r_lo < r < r_hi
    const double plat[][3] = {{0.5, 0.2, 1.0}, {3.0, 1.0, 2.0}, {40.0, 0.5, 3.0},
                              {0.02, 1.0, 1e4}, {200.0, 0.1, 0.9}, {5.0, 10.0, 30.0}};
    for (const auto& p : plat)
        add(radial_piece(fmt("plateau_%g_%g_%g", p[0], p[1], p[2]), p[1], p[2], fmt("%.17g", p[0])));
    {
        Region a, b;
        a.r_lo = 0.5;
        a.r_hi = 2.0;
        a.radial = Formula::constant(8.0);
        b.r_lo = 2.0;
        b.r_hi = 6.0;
        b.radial = Formula::constant(1.5);
        add(Potential("plateau_stack", {a, b}));
    }
    // beta/r^2 pieces
    const double inv[][3] = {{0.3, 1.0, 10.0}, {1.0, 1.0, 1e3}, {2.5, 0.5, 50.0},
                             {0.2, 1.0, 1e6}, {6.0, 2.0, 20.0}, {12.0, 1.0, 1e4}};
    for (const auto& p : inv)
        add(radial_piece(fmt("inv_square_%g_%g_%g", p[0], p[1], p[2]), p[1], p[2], fmt("%.17g/r^2", p[0])));
    // constructions
    for (int N : {1, 2, 3, 5}) {
        ConstructionParams P;
        P.N = N;
        v.push_back({"alpha1_i_N" + std::to_string(N), *build("alpha1_i", P).profile});
    }
    {
        ConstructionParams P;
        P.K = 5;
        v.push_back({"alpha1_ii", *build("alpha1_ii", P).profile});
    }
    {
        ConstructionParams P;
        P.alpha_seq = "gauss:2";
        P.k0 = 3;
        P.K = 3; // K = 5 already reaches s ~ 2e6, millions of dyadic annuli
        v.push_back({"alpha1_iii_gauss2", *build("alpha1_iii", P).profile});
    }
    add(radial_piece("grig_truncated", std::exp(-3.0), std::exp(3.0), "0.5/(r^2*(1+t^2))"));
    return v;
}

Outcome sandwich()
{
    auto corpus = radial_corpus();
    int bad = 0, unknown = 0;
    std::string first, rows;
    for (const auto& item : corpus) {
        auto A = profile_A(item.G);
        auto low = lower_bound_10pi(A);
        auto direct = radial_eigencount(item.G, Coupling::of(1.0));
        auto m0 = mode_count(item.G, Coupling::of(2.0), 0);
        auto rm = rad_main_bound(A);
        bool ok1, ok2;
        if (low.bound.is_infinite())
            ok1 = direct.count.is_infinite();
        else
            ok1 = direct.count.is_infinite() || low.bound.value() <= static_cast<double>(direct.lower);
        if (direct.count.is_unknown())
            ++unknown;
        if (rm.value.is_infinite())
            ok2 = true;
        else
            ok2 = !m0.count.is_infinite() && static_cast<double>(m0.upper) <= rm.value.value();
        if (!(ok1 && ok2) && bad++ == 0)
            first = "; first violation " + item.name;
        rows += fmt("%s%s %s/%s, %s/%s", rows.empty() ? "" : " | ", item.name.c_str(), low.bound.str().c_str(),
                    direct.count.str().c_str(), m0.count.str().c_str(), rm.value.str().c_str());
    }
    return {bad == 0, fmt("%zu potentials, %d violations, %d bracketed counts%s [lower/direct, N0(2V)/RadMain: %s]",
                          corpus.size(), bad, unknown, first.c_str(), rows.c_str())};
}

// 7
Outcome section_table()
{
    BoundParams bp;
    bp.p = 1.5;
    const std::map<std::string, std::vector<std::pair<std::string, bool>>> expect = {
        {"log3", {{"Sol", true}, {"clCLR", false}}},
        {"grig_radial", {{"GrigNad", true}, {"LNS2", false}}},
        {"boundary_blowup_L1", {{"Laptev", false}, {"LNS4", true}}},
        {"boundary_blowup_LB", {{"GrigNad", false}, {"clCLR", true}}},
        {"angular_L1", {{"LNS", false}, {"Laptev", true}}},
        {"angular_LB", {{"LNS3", false}, {"clCLR", true}}},
    };
    int wrong = 0;
    std::size_t inconsistent = 0;
    std::string d;
    for (const auto& id : {"log3", "inverse_square", "inverse_rlogr", "grig_radial", "boundary_blowup_L1",
                           "boundary_blowup_LB", "angular_L1", "angular_LB"}) {
        Potential V = builtin_potential(id);
        auto cmp = compare(V, all_estimates(), bp, false);
        inconsistent += cmp.inconsistencies.size();
        std::vector<std::pair<std::string, Value>> got;
        if (auto it = expect.find(id); it != expect.end()) {
            for (const auto& [name, fin] : it->second)
                for (const auto& r : cmp.reports)
                    if (to_string(r.id) == name) {
                        got.push_back({name, r.value});
                        if (r.value.is_finite() != fin || r.value.is_unknown())
                            ++wrong;
                    }
        } else if (std::string(id) == "inverse_square") {
            Value b = sequence_sum(profile(V, SeqId::BoldB));
            Value o = sequence_sum(profile(V, SeqId::OmegaNorm));
            got = {{"sum BoldB", b}, {"sum OmegaNorm", o}};
            wrong += !b.is_infinite() + !o.is_finite();
        } else {
            Value o = sequence_sum(profile(V, SeqId::OmegaNorm));
            Value b = orlicz_norm(AnnulusSample(V, -INFINITY, INFINITY), NFunction::B()).norm;
            got = {{"sum OmegaNorm", o}, {"B-norm on R^2", b}};
            wrong += !o.is_infinite() + !b.is_finite();
        }
        d += std::string(d.empty() ? "" : "; ") + id + ":";
        for (const auto& [n, v] : got)
            d += " " + n + (v.is_finite() ? " finite" : v.is_infinite() ? " infinite" : " unknown");
    }
    // the L log L sharpness construction carries no potential; its closed-form claims stand in
    auto rep = verify_claims(build("llogl_sharpness"));
    d += fmt("; llogl_sharpness: %zu/%zu claims pass", rep.passed(), rep.results.size());
    bool ok = wrong == 0 && inconsistent == 0 && rep.failed() == 0 && rep.passed() == rep.results.size();
    return {ok, fmt("%d verdict mismatches, %zu diagram inconsistencies; ", wrong, inconsistent) + d};
}

// 8
Outcome orlicz_suite()
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const NFunction B = NFunction::B(), A = NFunction::A();
    const double slack = 1e-9;
    std::map<std::string, int> viol;
    for (const auto* k : {"sandwich", "gauge", "holder", "avequiv", "avequivB", "elem", "ABelem", "Aelem", "dual"})
        viol[k] = 0;
    double worst_dual = 0.0;
    auto random_cells = [&](int max_cells) {
        int n = 1 + static_cast<int>(U(rng) * max_cells);
        std::vector<double> v(n), m(n);
        double total = std::exp(std::log(0.05) + U(rng) * std::log(400.0)); // 0.05 .. 20
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = U(rng) < 0.1 ? 0.0 : std::exp(-4.0 + 8.0 * U(rng));
            m[i] = 0.05 + U(rng);
            sum += m[i];
        }
        for (auto& x : m)
            x *= total / sum;
        if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
            v[0] = 1.0;
        return CellSample(v, m);
    };
    for (int i = 0; i < 1000; ++i) {
        CellSample f = random_cells(12);
        const NFunction& psi = i % 2 ? A : B;
        double lux = luxemburg_norm(f, psi).norm.value();
        double orl = orlicz_norm(f, psi).norm.value();
        if (!(lux <= orl * (1 + slack) && orl <= 2.0 * lux * (1 + slack)))
            ++viol["sandwich"];

        // kappa0 around the norm; an infinite gauge integral leaves the hypothesis unmet
        double k0 = lux * std::exp(-1.5 + 3.0 * U(rng));
        Value I = f.integrate(psi_map(psi, 1.0 / k0));
        double C0 = I.is_finite() ? std::max(1.0, I.value() * (1.0 + U(rng))) : 0.0;
        if (I.is_finite() && !(lux <= C0 * k0 * (1 + slack)))
            ++viol["gauge"];

        // Hoelder with (B, A); g on the same cells
        std::vector<double> gv(f.values().size());
        double fg = 0.0;
        for (std::size_t j = 0; j < gv.size(); ++j) {
            gv[j] = std::exp(-3.0 + 5.0 * U(rng));
            fg += f.values()[j] * gv[j] * f.measures()[j];
        }
        CellSample g(gv, f.measures());
        double fB = psi.kind() == NFunction::Kind::LLogLB ? orl : orlicz_norm(f, B).norm.value();
        double gA = luxemburg_norm(g, A).norm.value();
        if (!(fg <= fB * gA * (1 + slack)))
            ++viol["holder"];

        double mu = f.measure();
        double av = average_norm(f, psi).norm.value();
        if (!(std::min(1.0, mu) * orl <= av * (1 + slack) && av <= std::max(1.0, mu) * orl * (1 + slack)))
            ++viol["avequiv"];
        if (mu > 1.0) {
            double avB = psi.kind() == NFunction::Kind::LLogLB ? av : average_norm(f, B).norm.value();
            double l1 = 0.0;
            for (std::size_t j = 0; j < gv.size(); ++j)
                l1 += f.values()[j] * f.measures()[j];
            if (!(avB <= (fB + std::log(3.5 * mu) * l1) * (1 + slack)))
                ++viol["avequivB"];
        }

        double s = std::exp(-10.0 + 20.0 * U(rng));
        double ls = ln_plus(s);
        double Bs = B(s);
        if (!(0.5 * s * ls <= Bs * (1 + slack) + 1e-300 && Bs <= (s + 2.0 * s * ls) * (1 + slack)))
            ++viol["elem"];
        double u = U(rng);
        if (!(B(u) <= 0.5 * u * u * (1 + slack) && 0.5 * u * u <= A(u) * (1 + slack) &&
              A(u) <= std::exp(1.0) / 2.0 * u * u * (1 + slack)))
            ++viol["ABelem"];
        double w = 50.0 * U(rng);
        if (!(std::exp(w) <= (2.0 * A(w) + 1.5) * (1 + slack)))
            ++viol["Aelem"];

        CellSample small = random_cells(12);
        double level = i % 3 == 0 ? 1.0 : small.measure();
        const NFunction& dpsi = i % 4 == 0 ? A : B;
        double dual = dual_norm(small, dpsi, level).norm.value();
        double brute = dual_norm_bruteforce(small, dpsi, level);
        double rel = std::fabs(dual - brute) / std::max(brute, 1e-300);
        worst_dual = std::max(worst_dual, rel);
        if (rel > 1e-6)
            ++viol["dual"];
    }
    int total = 0;
    std::string d;
    for (const auto& [k, n] : viol) {
        total += n;
        d += fmt("%s%s %d", d.empty() ? "" : ", ", k.c_str(), n);
    }
    return {total == 0, fmt("1000 trials each; violations: %s; worst dual vs brute force %.2e", d.c_str(), worst_dual)};
}

// 9
Outcome m_of_p()
{
    double prev = INFINITY;
    bool ok = true;
    std::string d;
    for (double p : {1.1, 1.05, 1.01}) {
        double x = embedding_constant_M(p).M * std::exp(1.0) * (p - 1.0);
        ok = ok && x >= 0.8 && x <= 1.2 && std::fabs(x - 1.0) < prev;
        prev = std::fabs(x - 1.0);
        d += fmt("%sp=%g: %.6f", d.empty() ? "" : ", ", p, x);
    }
    return {ok, "M(p)e(p-1) " + d};
}

// 10
double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

Outcome sequence_lemma()
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int bad = 0;
    double tight = 0.0;
    for (int i = 0; i < 500; ++i) {
        int n = 1 + static_cast<int>(U(rng) * 300);
        std::vector<double> a(n);
        int shape = i % 3;
        for (int j = 0; j < n; ++j) {
            if (shape == 0)
                a[j] = std::exp(-6.0 + 10.0 * U(rng));
            else if (shape == 1)
                a[j] = (U(rng) < 0.5 ? -1.0 : 1.0) * (1.0 + 3.0 * U(rng)) / (j + 1);
            else
                a[j] = U(rng) < 0.3 ? 0.0 : std::pow(j + 1.0, -0.5 - U(rng));
        }
        double c = std::exp(-5.0 + 7.0 * U(rng));
        double lhs = thresholded_sqrt_sum(a, c);
        double rhs = 2.0 / std::sqrt(c) * weak_l1(a);
        if (!(lhs <= rhs * (1 + 1e-12)))
            ++bad;
        if (rhs > 0)
            tight = std::max(tight, lhs / rhs);
    }
    // (alph) <=> (s): a_n = n^{-1/q}
    std::string d;
    bool slopes_ok = true;
    const double c = 1.0;
    for (auto [q, sigma] : {std::pair{0.5, 0.25}, std::pair{1.0, 0.5}, std::pair{1.5, 0.5}, std::pair{2.0, 1.0}}) {
        const std::size_t n = 2000000;
        std::vector<double> a(n);
        for (std::size_t j = 0; j < n; ++j)
            a[j] = std::pow(static_cast<double>(j + 1), -1.0 / q);
        // thresholds c/alpha stay above the smallest entry
        double amax = c / (4.0 * a.back());
        std::vector<double> la, ls, lc, lsx;
        for (int k = 0; k <= 20; ++k) {
            double alpha = std::exp(std::log(amax) * (0.5 + 0.5 * k / 20.0));
            la.push_back(std::log(alpha));
            ls.push_back(std::log(std::pow(alpha, sigma) * thresholded_power_sum(a, c / alpha, sigma)));
            double s = c / alpha;
            std::size_t cnt = std::count_if(a.begin(), a.end(), [s](double x) { return x > s; });
            lsx.push_back(std::log(1.0 / s));
            lc.push_back(std::log(static_cast<double>(cnt)));
        }
        double s1 = slope(la, ls), s2 = slope(lsx, lc);
        slopes_ok = slopes_ok && std::fabs(s1 - q) <= 0.1 && std::fabs(s2 - q) <= 0.1;
        d += fmt("; q=%g sigma=%g: sum slope %.4f, count slope %.4f", q, sigma, s1, s2);
    }
    return {bad == 0 && slopes_ok,
            fmt("500 sequences, %d violations (max ratio %.4f)", bad, tight) + d};
}

} // namespace

int main()
{
    std::printf("speclab acceptance\n");
    run("1 phi maximum", 1.0, phi_max);
    run("2 Dirichlet closed form vs Pruefer", 30.0, dirichlet_oracle);
    run("3 sharp Sobolev constants", 60.0, sharp_constants);
    run("4 alpha1_i counts and divergence", 120.0, alpha1_i_counts);
    run("5 alpha1_iii with alpha_k = 1 - 4^-k", 120.0, [] { return alpha1_iii_check("pow:4", 1, false); });
    run("5 alpha1_iii with alpha_k = 1 - 2^-(k^2)", 120.0, [] { return alpha1_iii_check("gauss:2", 3, true); });
    run("6 lower and RadMain sandwich on a radial corpus", 300.0, sandwich);
    run("7 section 8 verdict table", 120.0, section_table);
    run("8 Orlicz property suite", 0.0, orlicz_suite);
    run("9 M(p) near p = 1", 5.0, m_of_p);
    run("10 sequence lemma", 0.0, sequence_lemma);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
