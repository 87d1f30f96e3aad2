#include "speclab/constructions.hpp"

#include "speclab/parallel.hpp"
#include "speclab/partition.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace speclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ClaimResult verdict(std::string name, bool ok, std::string detail, nlohmann::json data = nlohmann::json::object())
{
    return {std::move(name), ok ? ClaimStatus::Pass : ClaimStatus::Fail, std::move(detail), std::move(data)};
}

LogPiece euler(double lo, double hi, double eta)
{
    LogPiece p;
    p.kind = LogPiece::Kind::Euler;
    p.lo = lo;
    p.hi = hi;
    p.eta = eta;
    return p;
}

// Sup of G over Euler pieces: (1+eta)/(4t^2) is largest at the left end.
double euler_sup(const LogProfile& G)
{
    double m = 0.0;
    for (const auto& p : G.pieces)
        m = std::max(m, (1.0 + p.eta) / 4.0 * std::exp(-2.0 * p.lo));
    return m;
}

// Radial potential G(ln r)/r^2 from the Euler pieces, when every radius fits a double.
std::optional<Potential> euler_potential(const std::string& name, const LogProfile& G)
{
    std::vector<Region> regs;
    double last = G.pieces.empty() ? 0.0 : G.pieces.back().hi;
    if (std::exp(last) > 700.0)
        return std::nullopt;
    for (const auto& p : G.pieces) {
        Region r;
        r.r_lo = std::exp(std::exp(p.lo));
        r.r_hi = std::exp(std::exp(p.hi));
        r.radial = Formula::parse(num((1.0 + p.eta) / 4.0) + "/(r^2*t^2)");
        regs.push_back(r);
    }
    if (G.tail_eta) {
        Region r;
        double k = (1.0 + *G.tail_eta) / 4.0;
        r.r_lo = std::exp(std::exp(last));
        r.radial = Formula::parse(num(k) + "/(r^2*t^2)");
        r.at_infinity = Decay{k, -2, -2, 0};
        regs.push_back(r);
    }
    return Potential(name, std::move(regs));
}

std::string str_count(const EigencountResult& r)
{
    if (r.count.is_finite())
        return std::to_string(r.lower);
    return r.count.str() + " [" + std::to_string(r.lower) + "," + std::to_string(r.upper) + "]";
}

// ---- alpha1_i ----

NamedConstruction alpha1_i(const ConstructionParams& P)
{
    if (P.N < 1)
        throw InvalidParameters("alpha1_i needs N >= 1");
    if (!(P.a1 > 0.0))
        throw InvalidParameters("alpha1_i needs a1 > 0");
    NamedConstruction c;
    c.id = "alpha1_i";
    c.params = {{"N", P.N}, {"a1", P.a1}};
    const double s1 = std::log(P.a1);
    const double len = std::sqrt(3.0) * (2.0 * P.N - 1.5) * kPi;
    const double s2 = s1 + len;
    LogProfile G;
    G.pieces.push_back(euler(s1, s2, 1.0 / 3.0));
    G.tail_eta = 0.0;
    G.sup_G = euler_sup(G);
    c.profile = G;
    c.log_junctions = {s1, s2};
    c.potential = euler_potential("alpha1_i", G);
    c.data = {{"ln_a2_over_a1", len}, {"gamma", 1.0 / 3.0}, {"sup_G", G.sup_G}};

    const int N = P.N;
    c.claims.push_back({"count below critical coupling equals N", [G, N](const VerifyBudget& b) {
                            auto r = radial_eigencount(G, Coupling::from_complement(b.below));
                            bool ok = r.count.is_finite() && r.lower == N;
                            return verdict("count(alpha=1-" + num(b.below) + ") = " + std::to_string(N), ok,
                                           "count " + str_count(r), to_json(r));
                        }});
    c.claims.push_back({"Dirichlet count on (a1, a2) equals N - 1", [G, N, s1, s2](const VerifyBudget& b) {
                            if (s2 > 700.0)
                                return ClaimResult{"Dirichlet count on (a1,a2) = N-1", ClaimStatus::Inconclusive,
                                                   "a2 out of range", {}};
                            long n = dirichlet_count(std::exp(s1), std::exp(s2), (1.0 - b.below) / 3.0);
                            return verdict("Dirichlet count on (a1,a2) = N-1", n == N - 1,
                                           "closed form gives " + std::to_string(n));
                        }});
    c.claims.push_back({"divergence above critical coupling", [G, N, s1, len](const VerifyBudget& b) {
                            // cutoffs T, 2T, 4T in s = ln t, T doubled until growth past 3N is visible
                            double T = s1 + len;
                            nlohmann::json tried = nlohmann::json::array();
                            for (int i = 0; i <= b.doublings; ++i, T *= 2.0) {
                                long n[3];
                                for (int j = 0; j < 3; ++j)
                                    n[j] = mode_count(G, Coupling::of(1.0 + b.above), 0, T * (1 << j)).lower;
                                tried.push_back({{"T", T}, {"counts", {n[0], n[1], n[2]}}});
                                if (n[0] < n[1] && n[1] < n[2] && n[2] > 3 * N)
                                    return verdict("count grows past 3N at alpha=1+" + num(b.above), true,
                                                   "counts " + std::to_string(n[0]) + ", " + std::to_string(n[1]) +
                                                       ", " + std::to_string(n[2]) + " at s = " + num(T) +
                                                       " x {1,2,4}",
                                                   tried);
                            }
                            return ClaimResult{"count grows past 3N at alpha=1+" + num(b.above),
                                               ClaimStatus::Inconclusive, "cutoff budget exhausted", tried};
                        }});
    return c;
}

// ---- alpha1_ii ----

NamedConstruction alpha1_ii(const ConstructionParams& P)
{
    auto seq = AlphaSequence::parse(P.alpha_seq.empty() ? "pow:2" : P.alpha_seq);
    if (P.K < 2)
        throw InvalidParameters("alpha1_ii needs K >= 2");
    if (!(P.a1 > 0.0))
        throw InvalidParameters("alpha1_ii needs a1 > 0");
    if (seq.length >= 0 && seq.length < P.K + 1)
        throw InvalidParameters("alpha1_ii needs alpha_0..alpha_K");
    const int K = P.K;
    std::vector<double> c(K + 1);
    for (int k = 1; k <= K; ++k)
        c[k] = seq.complement(k);
    double a0 = P.alpha0 ? *P.alpha0 : (1.0 - c[1]) / 2.0;
    if (!(a0 > 0.0 && a0 < 1.0 - c[1]))
        throw InvalidParameters("alpha1_ii needs 0 < alpha_0 < alpha_1");
    c[0] = P.alpha0 ? 1.0 - a0 : (1.0 + c[1]) / 2.0;
    for (int k = 1; k <= K; ++k)
        if (!(c[k] > 0.0 && c[k] < c[k - 1]))
            throw InvalidParameters("alpha1_ii needs alpha_{k-1} < alpha_k < 1 (fails at k = " + std::to_string(k) +
                                    ")");
    std::vector<long> Nk(K + 1, 0);
    for (int k = 1; k <= K; ++k) {
        Nk[k] = P.targets.empty() ? k : P.targets[std::min<std::size_t>(k - 1, P.targets.size() - 1)];
        if (Nk[k] < 0)
            throw InvalidParameters("alpha1_ii targets must be nonnegative");
    }

    NamedConstruction out;
    out.id = "alpha1_ii";
    out.params = {{"alpha_seq", seq.spec}, {"alpha0", a0}, {"K", K}, {"a1", P.a1}, {"targets", Nk}};
    LogProfile G;
    double s = std::log(P.a1);
    out.log_junctions.push_back(s);
    nlohmann::json mu = nlohmann::json::array(), eta = nlohmann::json::array();
    for (int k = 1; k <= K; ++k) {
        double e = (c[k] + c[k - 1]) / (2.0 - c[k] - c[k - 1]);
        double m = 0.5 * std::sqrt(Coupling::from_complement(c[k]).excess(e));
        double len = (Nk[k - 1] + 2.5) * kPi / m;
        G.pieces.push_back(euler(s, s + len, e));
        s += len;
        out.log_junctions.push_back(s);
        mu.push_back(m);
        eta.push_back(e);
    }
    G.tail_eta = 0.0;
    G.sup_G = euler_sup(G);
    out.profile = G;
    out.potential = euler_potential("alpha1_ii", G);
    out.data = {{"mu", mu}, {"eta", eta}, {"sup_G", G.sup_G}, {"truncated_after", K}};

    for (int k = 1; k < K; ++k) {
        double ck = c[k], cn = c[k + 1];
        long target = Nk[k];
        out.claims.push_back({"count increment at k=" + std::to_string(k), [G, k, ck, cn, target](const VerifyBudget&) {
                                  auto lo = radial_eigencount(G, Coupling::from_complement(ck));
                                  auto hi = radial_eigencount(G, Coupling::from_complement(cn));
                                  std::string name = "N(alpha_" + std::to_string(k + 1) + ") - N(alpha_" +
                                                     std::to_string(k) + ") >= " + std::to_string(target);
                                  if (!lo.count.is_finite() || !hi.count.is_finite())
                                      return ClaimResult{name, ClaimStatus::Inconclusive,
                                                         "counts " + str_count(lo) + ", " + str_count(hi), {}};
                                  long d = hi.lower - lo.lower;
                                  return verdict(name, d >= target,
                                                 "counts " + std::to_string(lo.lower) + " -> " +
                                                     std::to_string(hi.lower),
                                                 {{"lower", lo.lower}, {"upper", hi.lower}});
                              }});
    }
    double cK = c[K];
    out.claims.push_back({"only the radial mode contributes", [G, cK](const VerifyBudget&) {
                              double x = (1.0 - cK) * G.sup_G;
                              return verdict("alpha_K sup G < 1", x < 1.0, "alpha_K sup G = " + num(x));
                          }});
    return out;
}

// ---- alpha1_iii ----

NamedConstruction alpha1_iii_impl(const ConstructionParams& P, bool checked)
{
    auto seq = AlphaSequence::parse(P.alpha_seq.empty() ? "pow:4" : P.alpha_seq);
    if (P.K < 2)
        throw InvalidParameters("alpha1_iii needs K >= 2");
    if (!(P.a1 > 0.0))
        throw InvalidParameters("alpha1_iii needs a1 > 0");
    std::vector<std::string> warnings;
    long k0 = 0;
    Value sum;
    if (P.k0) {
        k0 = *P.k0;
        if (k0 < 1)
            throw InvalidParameters("alpha1_iii needs k0 >= 1");
        sum = k0_sum(seq, k0);
        if (!(sum.is_finite() && sum.value() <= 0.125)) {
            std::string msg = "k0 condition sum_{k>=k0-1} (1-alpha_{k+1})/(alpha_{k+1}-alpha_k) <= 1/8 fails for k0 = " +
                              std::to_string(k0) + ": sum = " + sum.str();
            if (checked)
                throw InvalidParameters(msg);
            warnings.push_back(msg);
        }
    } else {
        for (long k = 1; k <= 200 && k0 == 0; ++k) {
            Value s = k0_sum(seq, k);
            if (s.is_infinite()) {
                sum = s;
                break;
            }
            if (s.is_finite() && s.value() <= 0.125) {
                k0 = k;
                sum = s;
            }
        }
        if (k0 == 0) {
            std::string msg = "no k0 <= 200 satisfies sum_{k>=k0-1} (1-alpha_{k+1})/(alpha_{k+1}-alpha_k) <= 1/8 (k0 = 1: " +
                              k0_sum(seq, 1).str() + ")";
            if (checked)
                throw InvalidParameters(msg);
            warnings.push_back(msg + "; using k0 = 1");
            k0 = 1;
        }
    }
    const int K = P.K;
    if (seq.length >= 0 && seq.length < k0 + K)
        throw InvalidParameters("alpha1_iii needs alpha_{k0-1}..alpha_{k0-1+K}");
    std::vector<double> cb(K + 2);
    for (int k = 0; k <= K + 1; ++k)
        cb[k] = seq.length >= 0 && k0 - 1 + k >= seq.length ? 0.0 : seq.complement(k0 - 1 + k);
    for (int k = 1; k <= K; ++k)
        if (!(cb[k] > 0.0 && cb[k] < cb[k - 1]))
            throw InvalidParameters("alpha1_iii needs beta_{k-1} < beta_k < 1 (fails at k = " + std::to_string(k) +
                                    ")");

    NamedConstruction out;
    out.id = "alpha1_iii";
    out.params = {{"alpha_seq", seq.spec}, {"k0", k0}, {"K", K}, {"a1", P.a1}, {"checked", checked}};
    out.warnings = warnings;
    LogProfile G;
    double s = std::log(P.a1);
    out.log_junctions.push_back(s);
    std::vector<double> eta(K + 1), mu1(K + 1), eps(K + 1), len(K + 1);
    nlohmann::json jmu = nlohmann::json::array(), jeps = nlohmann::json::array(), jmu2 = nlohmann::json::array();
    double gamma = 0.0;
    for (int k = 1; k <= K; ++k) {
        eta[k] = (cb[k] + cb[k - 1]) / (2.0 - cb[k] - cb[k - 1]);
        mu1[k] = 0.5 * std::sqrt((cb[k - 1] - cb[k]) / (2.0 - cb[k] - cb[k - 1]));
        eps[k] = 8.0 * kPi / 9.0 * cb[k] / (cb[k - 1] - cb[k]);
        len[k] = (kPi + eps[k]) / mu1[k];
        G.pieces.push_back(euler(s, s + len[k], eta[k]));
        s += len[k];
        out.log_junctions.push_back(s);
        gamma = std::max(gamma, (1.0 + eta[k]) / 4.0);
        jmu.push_back(mu1[k]);
        jeps.push_back(eps[k]);
        jmu2.push_back(0.5 - 0.5 * std::sqrt((cb[k] - cb[k + 1]) / (2.0 - cb[k + 1] - cb[k])));
    }
    G.tail_eta = 0.0;
    G.sup_G = euler_sup(G);
    out.profile = G;
    out.potential = euler_potential("alpha1_iii", G);
    out.data = {{"mu1", jmu}, {"mu2", jmu2}, {"eps", jeps}, {"gamma", gamma}, {"sup_G", G.sup_G},
                {"k0_sum", sum.is_finite() ? nlohmann::json(sum.value()) : nlohmann::json(sum.str())},
                {"truncated_after", K}};
    std::vector<double> cbv(cb.begin(), cb.end());
    std::vector<double> lj = out.log_junctions;

    for (int k = 1; k < K; ++k) {
        out.claims.push_back({"count at beta_" + std::to_string(k), [G, cbv, k, k0](const VerifyBudget&) {
                                  auto r = radial_eigencount(G, Coupling::from_complement(cbv[k]));
                                  std::string name = "N(beta_" + std::to_string(k) + " G) = " + std::to_string(k + 1);
                                  bool ok = r.count.is_finite() && r.lower == k + 1;
                                  return verdict(name, ok, "count " + str_count(r),
                                                 {{"k", k}, {"alpha_index", k0 - 1 + k}, {"count", r.lower},
                                                  {"exact", r.count.is_finite()}});
                              }});
    }
    for (int k = 1; k <= K; ++k) {
        out.claims.push_back({"zero structure at beta_" + std::to_string(k), [G, cbv, lj, k](const VerifyBudget&) {
                                  long z = interval_zero_count(G, Coupling::from_complement(cbv[k]), lj[0], lj[k]);
                                  return verdict("zeros of u_2 on (a_1, a_" + std::to_string(k + 1) + ") = " +
                                                     std::to_string(k),
                                                 z == k, std::to_string(z) + " zeros", {{"k", k}, {"zeros", z}});
                              }});
    }
    out.claims.push_back({"phase bracket", [cbv, eta, eps, len, K](const VerifyBudget&) {
                              int bad = 0;
                              std::string first;
                              for (int k = 1; k <= K; ++k) {
                                  Coupling b = Coupling::from_complement(cbv[k]);
                                  for (int j = 1; j <= k; ++j) {
                                      double ph = 0.5 * std::sqrt(b.excess(eta[j])) * len[j];
                                      double lo = kPi + eps[j];
                                      double hi = kPi + 2.0 * kPi * cbv[j] / (cbv[j - 1] - cbv[j]);
                                      if (ph < lo * (1.0 - 1e-12) || ph >= hi) {
                                          if (!bad++)
                                              first = "k=" + std::to_string(k) + " j=" + std::to_string(j) +
                                                      ": " + num(ph) + " not in [" + num(lo) + ", " + num(hi) + ")";
                                      }
                                  }
                              }
                              return verdict("mu_{1,k,j} ln(a_{j+1}/a_j) in [pi+eps_j, pi+2pi(1-beta_j)/(beta_j-beta_{j-1}))",
                                             bad == 0, bad ? first : "all " + std::to_string(K * (K + 1) / 2) + " pairs");
                          }});
    out.claims.push_back({"structural bound", [G, gamma](const VerifyBudget&) {
                              // sampled where t fits a double
                              double worst = 0.0;
                              for (const auto& p : G.pieces)
                                  for (int i = 1; i < 16 && p.lo < 700.0; ++i) {
                                      double t = std::exp(p.lo + (std::min(p.hi, 700.0) - p.lo) * i / 16.0);
                                      worst = std::max(worst, t * t * G.G(t));
                                  }
                              return verdict("0 <= t^2 G <= gamma", std::isfinite(gamma) && worst <= gamma * (1 + 1e-12),
                                             "gamma = " + num(gamma) + ", sampled max " + num(worst));
                          }});
    return out;
}

// ---- L log L sharpness ----

// ln B(e^lt), accurate for every lt.
double ln_B_of_log(double lt)
{
    if (lt < 30.0) {
        double t = std::exp(lt);
        return std::log((1.0 + t) * std::log1p(t) - t);
    }
    return lt + std::log(lt - 1.0 + lt * std::exp(-lt));
}

struct PsiLog {
    std::string name;
    std::function<double(double)> ln_psi; // ln Psi(e^lt)
};

PsiLog parse_psi(const std::string& spec)
{
    if (spec == "B")
        return {spec, ln_B_of_log};
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidParameters("unknown psi '" + spec + "' (B, power:p, slog:q)");
    std::string kind = spec.substr(0, colon);
    double x = 0.0;
    try {
        x = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw InvalidParameters("bad psi parameter in '" + spec + "'");
    }
    if (kind == "power") {
        if (!(x > 1.0))
            throw InvalidParameters("power psi needs p > 1");
        return {spec, [x](double lt) { return x * lt - std::log(x); }};
    }
    if (kind == "slog") {
        if (!(x > 0.0))
            throw InvalidParameters("slog psi needs q > 0");
        return {spec, [x](double lt) {
                    double l1 = lt < 30.0 ? std::log1p(std::exp(lt)) : lt + std::exp(-lt);
                    return lt + x * std::log(l1);
                }};
    }
    throw InvalidParameters("unknown psi '" + spec + "' (B, power:p, slog:q)");
}

// gamma(e^ls) = sup_{t >= e^ls} Psi/B, sampled on a log-log grid.
double gamma_of_log(const PsiLog& psi, double ls)
{
    double m = 0.0;
    double start = std::max(ls, 1e-3);
    double top = std::max(1e15, 4.0 * start);
    for (int i = 0; i <= 400; ++i) {
        double lt = start * std::pow(top / start, i / 400.0);
        if (i == 0)
            lt = ls;
        m = std::max(m, std::exp(psi.ln_psi(lt) - ln_B_of_log(lt)));
    }
    return m;
}

NamedConstruction llogl(const ConstructionParams& P)
{
    PsiLog psi = parse_psi(P.psi);
    if (P.disks < 1)
        throw InvalidParameters("llogl_sharpness needs at least one disk");
    if (!(P.r0 > 0.0))
        throw InvalidParameters("llogl_sharpness needs r0 > 0");
    // Psi/B must tend to 0
    double g_far = gamma_of_log(psi, 1e6);
    double g_mid = gamma_of_log(psi, 1e3);
    if (!(g_far < 0.05 && g_far < g_mid))
        throw InvalidParameters("psi = " + psi.name + ": Psi(s)/B(s) does not tend to 0 (sampled " + num(g_mid) +
                                " at ln s = 1e3, " + num(g_far) + " at ln s = 1e6)");
    // s0 >= e with Psi(s) >= s and gamma(s) <= 1 beyond it
    double ls0 = 1.0;
    auto good = [&](double l) {
        if (gamma_of_log(psi, l) > 1.0)
            return false;
        for (int i = 0; i <= 60; ++i) {
            double lt = l + i * (1.0 + l) / 4.0;
            if (psi.ln_psi(lt) < lt)
                return false;
        }
        return true;
    };
    while (!good(ls0) && ls0 < 1e12)
        ls0 *= 2.0;
    if (!good(ls0))
        throw InvalidParameters("psi = " + psi.name + ": no s0 with Psi(s) >= s and gamma(s) <= 1");

    // L_k = ln(1/r_k): r_k < 1/s0, 3 r_1 <= r0, 3 r_k < r_{k-1}, gamma(1/r_k) <= 2^-k
    std::vector<double> L;
    double floor_L = std::max({ls0, std::log(3.0 / P.r0), 0.0}) + 1e-9;
    for (int k = 1; k <= P.disks; ++k) {
        double lo = k == 1 ? floor_L : L.back() + std::log(3.0) + 1e-9;
        double want = std::ldexp(1.0, -k);
        double hi = lo;
        while (gamma_of_log(psi, hi) > want) {
            hi *= 2.0;
            if (hi > 1e150)
                throw InvalidParameters("llogl_sharpness: gamma decays too slowly for the disk budget");
        }
        if (hi > lo) {
            double a = hi / 2.0 < lo ? lo : hi / 2.0;
            for (int i = 0; i < 80; ++i) {
                double m = 0.5 * (a + hi);
                (gamma_of_log(psi, m) > want ? a : hi) = m;
            }
        }
        L.push_back(hi);
    }

    NamedConstruction out;
    out.id = "llogl_sharpness";
    out.params = {{"psi", psi.name}, {"disks", P.disks}, {"r0", P.r0}, {"W_bound", P.W_bound}};
    nlohmann::json disks = nlohmann::json::array();
    std::vector<double> ln_t, ln_psi_term, gam;
    for (double l : L) {
        double lt = std::log(3.0) + 4.0 * l - std::log(l);
        ln_t.push_back(lt);
        ln_psi_term.push_back(std::log(kPi) - 4.0 * l + psi.ln_psi(lt));
        gam.push_back(gamma_of_log(psi, l));
        disks.push_back({{"ln_inv_r", l}, {"center_over_r", 2.0}, {"ln_t", lt}});
    }
    out.data = {{"disks", disks}, {"ln_s0", ls0}};
    const double W = P.W_bound, r0 = P.r0;

    out.claims.push_back({"Psi-integral bounded", [ln_psi_term, gam](const VerifyBudget&) {
                              double s = 0.0, g = 0.0;
                              bool each = true;
                              for (std::size_t k = 0; k < gam.size(); ++k) {
                                  double term = std::exp(ln_psi_term[k]);
                                  s += term;
                                  g += gam[k];
                                  each = each && term <= 72.0 * kPi * gam[k];
                              }
                              return verdict("int Psi(V) = sum pi r_k^4 Psi(t_k) <= 72 pi sum gamma(1/r_k)",
                                             each && s <= 72.0 * kPi * g,
                                             "int Psi(V) = " + num(s) + ", 72 pi sum gamma = " + num(72.0 * kPi * g),
                                             {{"int_psi", s}, {"gamma_sum", g}});
                          }});
    out.claims.push_back({"V and VW integrable", [L, ln_psi_term, W](const VerifyBudget&) {
                              double iv = 0.0, ip = 0.0;
                              for (std::size_t k = 0; k < L.size(); ++k) {
                                  iv += 3.0 * kPi / L[k];
                                  ip += std::exp(ln_psi_term[k]);
                              }
                              return verdict("int V <= int Psi(V) and int VW <= W int V", iv <= ip,
                                             "int V = " + num(iv) + ", int VW <= " + num(W * iv),
                                             {{"int_V", iv}, {"int_VW_bound", W * iv}});
                          }});
    out.claims.push_back({"test functions have negative energy", [L](const VerifyBudget&) {
                              namespace q = boost::math::quadrature;
                              int bad = 0;
                              nlohmann::json e = nlohmann::json::array();
                              for (double l : L) {
                                  // |grad w|^2 = 1/(l rho)^2 on r^2 < rho < r, in u = ln rho
                                  double grad = q::gauss_kronrod<double, 15>::integrate(
                                      [l](double u) { return 2.0 * kPi / (l * l) + 0.0 * u; }, -2.0 * l, -l);
                                  double pot = 3.0 * kPi / l; // int_{B(2r, r^2)} t_k
                                  double energy = grad - pot;
                                  bad += !(energy < 0.0) || std::fabs(grad - 2.0 * kPi / l) > 1e-12 * grad;
                                  e.push_back(energy);
                              }
                              return verdict("E_V[w_k] = 2pi/L_k - 3pi/L_k < 0 for every k", bad == 0,
                                             std::to_string(L.size()) + " disks", {{"energies", e}});
                          }});
    out.claims.push_back({"disks disjoint inside B(0, r0)", [L, r0](const VerifyBudget&) {
                              bool ok = std::log(3.0 / r0) <= L[0];
                              for (std::size_t k = 1; k < L.size(); ++k)
                                  ok = ok && L[k] - L[k - 1] > std::log(3.0);
                              return verdict("3 r_k < r_{k-1} and 3 r_1 <= r0", ok, "");
                          }});
    return out;
}

// ---- section examples ----

struct Expect {
    enum class Kind { Estimate, SeqSum, BNorm, BoldA };
    Kind kind;
    EstimateId est = EstimateId::RadMain;
    SeqId seq = SeqId::A;
    bool finite = true;
};

std::string describe_expect(const Expect& e)
{
    std::string what;
    switch (e.kind) {
    case Expect::Kind::Estimate: what = to_string(e.est); break;
    case Expect::Kind::SeqSum: what = "sum " + to_string(e.seq); break;
    case Expect::Kind::BNorm: what = "||V||_B(R^2)"; break;
    case Expect::Kind::BoldA: what = "boldA_n"; break;
    }
    return what + (e.finite ? " finite" : " infinite");
}

void attach_expectations(NamedConstruction& c, const Potential& V, std::vector<Expect> ex, std::optional<double> p)
{
    BoundParams bp;
    bp.p = p ? p : std::optional<double>(1.5);
    for (const auto& e : ex) {
        c.claims.push_back({describe_expect(e), [V, e, bp](const VerifyBudget&) {
                                Value v;
                                bool robust = true;
                                switch (e.kind) {
                                case Expect::Kind::Estimate: {
                                    auto r = evaluate(V, e.est, bp);
                                    v = r.value;
                                    robust = r.robust;
                                    break;
                                }
                                case Expect::Kind::SeqSum: v = sequence_sum(profile(V, e.seq)); break;
                                case Expect::Kind::BNorm:
                                    v = orlicz_norm(AnnulusSample(V, -kInf, kInf), NFunction::B()).norm;
                                    break;
                                case Expect::Kind::BoldA: break;
                                }
                                nlohmann::json d = {{"value", v.str()}, {"robust", robust}};
                                if (v.is_unknown())
                                    return ClaimResult{describe_expect(e), ClaimStatus::Inconclusive, v.str(), d};
                                return verdict(describe_expect(e), v.is_finite() == e.finite, v.str(), d);
                            }});
    }
}

Potential product(const std::string& name, Region r) { return Potential(name, {std::move(r)}); }

Region shell(double lo, double hi)
{
    Region r;
    r.r_lo = lo;
    r.r_hi = hi;
    return r;
}

NamedConstruction section_example(const std::string& id, const ConstructionParams& P)
{
    using K = Expect::Kind;
    using E = EstimateId;
    NamedConstruction c;
    c.id = id;
    const double e = std::exp(1.0);
    Region r;
    std::vector<Expect> ex;
    if (id == "log3") {
        r = shell(std::exp(2.0), kInf);
        r.radial = Formula::parse("1/(2*pi*r^2*t^2*ln(t))");
        r.at_infinity = Decay{1.0 / (2.0 * kPi), -2, -2, -1};
        ex = {{K::Estimate, E::Sol, SeqId::A, true}, {K::Estimate, E::clCLR, SeqId::A, false}};
    } else if (id == "inverse_square") {
        r = shell(e, kInf);
        r.radial = Formula::parse("1/r^2");
        r.at_infinity = Decay{1, -2, 0, 0};
        ex = {{K::SeqSum, E::RadMain, SeqId::BoldB, false}, {K::SeqSum, E::RadMain, SeqId::OmegaNorm, true}};
    } else if (id == "inverse_rlogr") {
        r = shell(e, kInf);
        r.radial = Formula::parse("1/(r*t)");
        r.at_infinity = Decay{1, -1, -1, 0};
        ex = {{K::SeqSum, E::RadMain, SeqId::OmegaNorm, false}, {K::BNorm, E::RadMain, SeqId::A, true}};
    } else if (id == "grig_radial") {
        if (!(P.coupling > 0.0))
            throw InvalidParameters("grig_radial needs coupling > 0");
        c.params = {{"coupling", P.coupling}};
        r = shell(0.0, kInf);
        r.radial = Formula::parse(num(P.coupling) + "/(r^2*(1+t^2))");
        r.at_r_lo = Decay{P.coupling, -2, -2, 0};
        r.at_infinity = Decay{P.coupling, -2, -2, 0};
        ex = {{K::Estimate, E::GrigNad, SeqId::A, true}, {K::Estimate, E::LNS2, SeqId::A, false}};
    } else if (id == "boundary_blowup_L1") {
        r = shell(1.0, e);
        r.radial = Formula::parse("1/(d*(1+ln(d)^2))");
        r.at_r_lo = Decay{1, -1, -2, 0};
        ex = {{K::Estimate, E::Laptev, SeqId::A, false}, {K::Estimate, E::LNS4, SeqId::A, true}};
    } else if (id == "boundary_blowup_LB") {
        r = shell(1.0, e);
        r.radial = Formula::parse("1/(d*(1+abs(ln(d))^3))");
        r.at_r_lo = Decay{1, -1, -3, 0};
        ex = {{K::Estimate, E::GrigNad, SeqId::A, false}, {K::Estimate, E::clCLR, SeqId::A, true}};
    } else if (id == "angular_L1") {
        r = shell(1.0, e);
        r.angular = Formula::parse("1/(abs(th)*(1+ln(abs(th))^2))");
        r.angular_singularity = AngularSingularity{0.0, Decay{1, -1, -2, 0}};
        ex = {{K::Estimate, E::LNS, SeqId::A, false}, {K::Estimate, E::Laptev, SeqId::A, true}};
    } else if (id == "angular_LB") {
        r = shell(1.0, e);
        r.angular = Formula::parse("1/(abs(th)*(1+abs(ln(abs(th)))^3))");
        r.angular_singularity = AngularSingularity{0.0, Decay{1, -1, -3, 0}};
        ex = {{K::Estimate, E::LNS3, SeqId::A, false}, {K::Estimate, E::clCLR, SeqId::A, true}};
    } else {
        throw InvalidParameters("unknown construction '" + id + "'");
    }
    Potential V = product(id, r);
    c.potential = V;
    attach_expectations(c, V, ex, P.p);
    if (id == "log3") {
        c.claims.push_back({"boldA_n = ln(1 + 1/(n-1))", [V](const VerifyBudget&) {
                                auto prof = profile(V, SeqId::BoldA, std::make_pair(0L, 8L));
                                double worst = 0.0;
                                nlohmann::json d = nlohmann::json::array();
                                for (long n = 2; n <= 8; ++n) {
                                    double want = std::log1p(1.0 / (n - 1));
                                    double got = prof.values.at(n).value();
                                    worst = std::max(worst, std::fabs(got - want) / want);
                                    d.push_back({{"n", n}, {"value", got}, {"closed_form", want}});
                                }
                                return verdict("boldA_n = ln(1 + 1/(n-1)), 2 <= n <= 8", worst < 1e-6,
                                               "max relative error " + num(worst), d);
                            }});
    }
    return c;
}

const std::vector<std::string> kSection{"log3",          "inverse_square",     "inverse_rlogr",
                                        "grig_radial",   "boundary_blowup_L1", "boundary_blowup_LB",
                                        "angular_L1",    "angular_LB"};

} // namespace

std::string to_string(ClaimStatus s)
{
    switch (s) {
    case ClaimStatus::Pass: return "pass";
    case ClaimStatus::Fail: return "fail";
    case ClaimStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

AlphaSequence AlphaSequence::parse(const std::string& spec)
{
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidParameters("alpha sequence '" + spec + "' (pow:q, gauss:q, list:a0,a1,...)");
    std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
    AlphaSequence s;
    s.spec = spec;
    try {
        if (kind == "pow" || kind == "gauss") {
            double q = std::stod(rest);
            if (!(q > 1.0))
                throw InvalidParameters("alpha sequence base must exceed 1");
            double lq = std::log(q);
            if (kind == "pow")
                s.complement = [lq](long k) { return std::exp(-lq * k); };
            else
                s.complement = [lq](long k) { return std::exp(-lq * double(k) * double(k)); };
            return s;
        }
        if (kind == "list") {
            std::vector<double> a;
            std::stringstream ss(rest);
            std::string tok;
            while (std::getline(ss, tok, ','))
                a.push_back(std::stod(tok));
            if (a.empty())
                throw InvalidParameters("empty alpha list");
            s.length = static_cast<long>(a.size());
            s.complement = [a](long k) {
                if (k < 0 || k >= static_cast<long>(a.size()))
                    throw InvalidParameters("alpha list too short for index " + std::to_string(k));
                return 1.0 - a[k];
            };
            return s;
        }
    } catch (const std::invalid_argument&) {
        throw InvalidParameters("bad number in alpha sequence '" + spec + "'");
    }
    throw InvalidParameters("unknown alpha sequence kind '" + kind + "'");
}

Value k0_sum(const AlphaSequence& seq, long k0)
{
    double s = 0.0, first = -1.0, last = 0.0;
    long stop = seq.length >= 0 ? seq.length - 1 : k0 - 1 + 100000;
    for (long k = std::max(0L, k0 - 1); k < stop; ++k) {
        double a = seq.complement(k), b = seq.complement(k + 1);
        if (b <= 0.0) {
            if (last > 1e-6)
                return Value::infinite("terms do not decay (last " + std::to_string(last) + ")");
            return Value::finite(s);
        }
        if (!(a > b))
            return Value::infinite("alpha_" + std::to_string(k + 1) + " <= alpha_" + std::to_string(k));
        last = b / (a - b);
        if (first < 0.0)
            first = last;
        s += last;
        if (last < 1e-18 * s)
            return Value::finite(s);
    }
    if (seq.length >= 0)
        return Value::finite(s);
    return Value::infinite("terms do not decay (last " + std::to_string(last) + ")");
}

const std::vector<std::string>& construction_ids()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v{"alpha1_i", "alpha1_ii", "alpha1_iii", "llogl_sharpness"};
        v.insert(v.end(), kSection.begin(), kSection.end());
        return v;
    }();
    return ids;
}

NamedConstruction build(const std::string& id, const ConstructionParams& params)
{
    if (id == "alpha1_i")
        return alpha1_i(params);
    if (id == "alpha1_ii")
        return alpha1_ii(params);
    if (id == "alpha1_iii")
        return alpha1_iii_impl(params, !params.unchecked);
    if (id == "llogl_sharpness")
        return llogl(params);
    return section_example(id, params);
}

NamedConstruction build_alpha1_iii_unchecked(const ConstructionParams& params)
{
    return alpha1_iii_impl(params, false);
}

Potential builtin_potential(const std::string& name, const ConstructionParams& params)
{
    if (name == "zero")
        return Potential::zero();
    auto c = build(name, params);
    if (!c.potential)
        throw ConfigError("construction '" + name + "' has radii beyond double range; only its log profile exists");
    return *c.potential;
}

std::string export_config(const NamedConstruction& c)
{
    if (!c.potential)
        throw ConfigError("construction '" + c.id + "' has no potential to export");
    return c.potential->to_config();
}

std::size_t ClaimReport::passed() const
{
    return std::count_if(results.begin(), results.end(), [](auto& r) { return r.status == ClaimStatus::Pass; });
}

std::size_t ClaimReport::failed() const
{
    return std::count_if(results.begin(), results.end(), [](auto& r) { return r.status == ClaimStatus::Fail; });
}

ClaimReport verify_claims(const NamedConstruction& c, const VerifyBudget& budget)
{
    ClaimReport rep;
    rep.id = c.id;
    rep.results.resize(c.claims.size());
    parallel_for(c.claims.size(), [&](std::size_t i) {
        try {
            rep.results[i] = c.claims[i].check(budget);
        } catch (const std::exception& ex) {
            rep.results[i] = {c.claims[i].name, ClaimStatus::Inconclusive, ex.what(), {}};
        }
    });
    return rep;
}

nlohmann::json to_json(const ClaimReport& r)
{
    nlohmann::json out = {{"construction", r.id}, {"passed", r.passed()}, {"failed", r.failed()}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : r.results)
        arr.push_back({{"claim", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}, {"data", c.data}});
    out["claims"] = arr;
    return out;
}

} // namespace speclab
