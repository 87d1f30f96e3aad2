#include "speclab/partition.hpp"

#include "speclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace speclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

bool dyadic(SeqId id) { return id == SeqId::A || id == SeqId::BoldA; }

AnnulusFamily family_of(SeqId id)
{
    if (dyadic(id))
        return {FamilyKind::DyadicU};
    if (id == SeqId::D || id == SeqId::DN || id == SeqId::Lp || id == SeqId::LpN || id == SeqId::G)
        return {FamilyKind::LogIntervalI};
    return {FamilyKind::ExponentialOmega};
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// ---- circle-wise and ray-wise ingredients ----

enum class CircleNorm { Orlicz, Lp };

Value circle_norm(const AngularSample& s, CircleNorm kind, double p)
{
    if (kind == CircleNorm::Orlicz)
        return orlicz_norm(s, NFunction::B()).norm;
    Value I = s.integrate(power_map(p));
    if (!I.is_finite())
        return I;
    return Value::finite(std::pow(I.value(), 1.0 / p));
}

Value times(const Value& a, const Value& b)
{
    if (a.is_finite() && a.value() == 0.0 && b.is_finite())
        return a;
    if (b.is_finite() && b.value() == 0.0 && a.is_finite())
        return b;
    if (a.is_infinite())
        return a;
    if (b.is_infinite())
        return b;
    if (a.is_unknown() || b.is_unknown())
        return Value::unknown(a.is_unknown() ? a.reason() : b.reason(), a.value() * b.value());
    return Value::finite(a.value() * b.value());
}

double sector_mean(const Region& reg)
{
    Value m = angular_integral(reg);
    if (!m.is_finite())
        throw NonIntegrable("angular factor not integrable on its sector");
    return m.value() / (2.0 * kPi);
}

bool singular_at(const Region& reg, double t, bool lower)
{
    if (lower)
        return std::isinf(t) || (reg.r_lo > 0.0 && same(t, reg.t_lo()) && reg.at_r_lo.has_value());
    return std::isinf(t);
}

// int_{I} N(V(r, .)) r dr over t in [n, n+1], N a norm on the circle; V_N when `centred`.
Value circle_mixed(const Potential& V, double t1, double t2, CircleNorm kind, double p, bool centred)
{
    std::set<double> cuts{t1, t2};
    for (const auto& reg : V.regions())
        for (double t : {reg.t_lo(), reg.t_hi()})
            if (t > t1 && t < t2)
                cuts.insert(t);
    std::vector<double> c(cuts.begin(), cuts.end());
    Value total = Value::finite(0.0);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double u = c[i], v = c[i + 1];
        std::vector<const Region*> act;
        for (const auto& reg : V.regions())
            if (reg.t_lo() <= u && reg.t_hi() >= v)
                act.push_back(&reg);
        if (act.empty())
            continue;
        Value part;
        if (act.size() == 1) {
            const Region& reg = *act[0];
            double sub = centred ? sector_mean(reg) : 0.0;
            Value N = circle_norm(AngularSample(reg, sub), kind, p);
            Value R = RadialSample(reg, u, v, 1.0, 0.0).integrate(power_map(1.0));
            part = times(R, N);
        } else {
            bool all_const = true;
            for (const Region* r : act)
                all_const = all_const && r->radial_constant();
            auto norm_at = [&](auto radial_value) {
                std::vector<std::pair<Region, double>> parts;
                double sub = 0.0;
                for (const Region* r : act) {
                    double fk = radial_value(*r);
                    parts.emplace_back(*r, fk);
                    if (centred)
                        sub += fk * sector_mean(*r);
                }
                return circle_norm(AngularSample(parts, sub), kind, p);
            };
            if (all_const) {
                Value N = norm_at([](const Region& r) { return r.radial.constant_value(); });
                double area = std::isinf(v) ? kInf : 0.5 * (std::exp(2.0 * v) - std::exp(2.0 * u));
                part = times(Value::finite(area), N);
                if (std::isinf(area) && !(N.is_finite() && N.value() == 0.0))
                    part = Value::infinite("nonzero circle norm on an unbounded range");
            } else {
                for (const Region* r : act)
                    if (singular_at(*r, u, true) || singular_at(*r, v, false))
                        throw MissingDecayClass(
                            "overlapping sectors with a singular radial end: circle norms do not factorise");
                bool inf = false;
                std::string why;
                auto integrand = [&](double t) {
                    Value N = norm_at([t](const Region& r) { return r.f_at_t(t).to_double(); });
                    if (!N.is_finite()) {
                        inf = true;
                        why = N.reason();
                        return 0.0;
                    }
                    return N.value() * std::exp(2.0 * t);
                };
                double val = integrate(integrand, u, v, 1e-8).value;
                part = inf ? Value::infinite(why) : Value::finite(val);
            }
        }
        total = total + part;
        if (total.is_infinite())
            return total;
    }
    return total;
}

Region restrict_sector(Region r, double a, double b)
{
    r.th_lo = a;
    r.th_hi = b;
    if (r.angular_singularity && (r.angular_singularity->theta < a || r.angular_singularity->theta > b))
        r.angular_singularity.reset();
    return r;
}

// e^n int_S ||V(., th)||^{av}_{B, (e^n, e^{n+1})} dth.
Value ray_mixed(const Potential& V, long n)
{
    const double t1 = static_cast<double>(n), t2 = t1 + 1.0;
    const double len = std::exp(t2) - std::exp(t1);
    std::vector<const Region*> hit;
    std::set<double> cuts{-kPi, kPi};
    for (const auto& reg : V.regions())
        if (reg.t_lo() < t2 && reg.t_hi() > t1) {
            hit.push_back(&reg);
            cuts.insert(reg.th_lo);
            cuts.insert(reg.th_hi);
        }
    std::vector<double> c(cuts.begin(), cuts.end());
    Value total = Value::finite(0.0);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double a = c[i], b = c[i + 1];
        std::vector<const Region*> act;
        for (const Region* r : hit)
            if (r->th_lo <= a && r->th_hi >= b)
                act.push_back(r);
        if (act.empty())
            continue;
        Value part;
        if (act.size() == 1) {
            const Region& reg = *act[0];
            FunctionSample ray(radial_pieces(reg, t1, t2, 0.0), len);
            Value N = average_norm(ray, NFunction::B()).norm;
            Value ang = angular_integral(restrict_sector(reg, a, b));
            part = times(N, ang);
        } else {
            bool all_const = true;
            for (const Region* r : act)
                all_const = all_const && r->angular_constant() && !r->angular_singularity;
            auto norm_at = [&](auto angular_value) {
                std::vector<Piece> pieces;
                for (const Region* r : act)
                    for (auto& pc : radial_pieces(*r, t1, t2, 0.0, angular_value(*r)))
                        pieces.push_back(std::move(pc));
                return average_norm(FunctionSample(std::move(pieces), len), NFunction::B()).norm;
            };
            if (all_const) {
                Value N = norm_at([](const Region& r) { return r.angular.constant_value(); });
                part = times(N, Value::finite(b - a));
            } else {
                for (const Region* r : act)
                    if (r->angular_singularity)
                        throw MissingDecayClass("overlapping radial ranges with an angular singularity");
                bool inf = false;
                std::string why;
                auto integrand = [&](double th) {
                    Value N = norm_at([th](const Region& r) { return r.g(th); });
                    if (!N.is_finite()) {
                        inf = true;
                        why = N.reason();
                        return 0.0;
                    }
                    return N.value();
                };
                double val = integrate(integrand, a, b, 1e-8).value;
                part = inf ? Value::infinite(why) : Value::finite(val);
            }
        }
        total = total + part;
        if (total.is_infinite())
            return total;
    }
    return total.scaled(std::exp(t1));
}

// ---- tails ----

std::optional<Decay> end_class(const Potential& V, bool above, bool& present)
{
    present = false;
    std::optional<Decay> out;
    for (const auto& reg : V.regions()) {
        bool reaches = above ? std::isinf(reg.r_hi) : reg.r_lo == 0.0;
        if (!reaches)
            continue;
        present = true;
        std::optional<Decay> c = above ? reg.at_infinity : reg.at_r_lo;
        if (!c && reg.radial_constant())
            c = Decay{reg.radial.constant_value(), 0.0, 0.0, 0.0};
        if (!c)
            throw MissingDecayClass(std::string("tail certification needs a class ") +
                                    (above ? "at infinity" : "at the origin"));
        bool slower = above ? std::tie(c->a, c->b, c->c) > (out ? std::tie(out->a, out->b, out->c)
                                                                : std::tie(c->a, c->b, c->c))
                            : std::tie(c->a, c->b, c->c) < (out ? std::tie(out->a, out->b, out->c)
                                                                : std::tie(c->a, c->b, c->c));
        if (!out || slower)
            out = c;
    }
    return out;
}

void classify(TailCertificate& tc)
{
    using T = TailCertificate::Trend;
    if (tc.superexponential)
        return;
    if (tc.rho < 1.0 - 1e-12)
        tc.trend = T::Vanishing;
    else if (tc.rho > 1.0 + 1e-12)
        tc.trend = T::Growing;
    else if (tc.beta < 0.0 || (tc.beta == 0.0 && tc.gamma < 0.0))
        tc.trend = T::Vanishing;
    else if (tc.beta == 0.0 && tc.gamma == 0.0)
        tc.trend = T::Constant;
    else
        tc.trend = T::Growing;
}

TailCertificate make_tail(const Potential& V, SeqId id, bool above, long from, long last, const Value& last_v)
{
    using T = TailCertificate::Trend;
    TailCertificate tc;
    tc.from = from;
    if (!above && first_index(id) >= 0) {
        tc.trend = T::None;
        return tc;
    }
    bool present = false;
    auto cls = end_class(V, above, present);
    if (!present) {
        tc.trend = T::Zero;
        tc.justification = "support of V ends inside the computed range";
        return tc;
    }
    if (last_v.is_infinite()) {
        tc.trend = T::Infinite;
        tc.justification = "last computed entry is infinite";
        return tc;
    }
    if (last_v.value() == 0.0) {
        tc.trend = T::Zero;
        tc.justification = "the unbounded part contributes nothing to this sequence";
        return tc;
    }
    const Decay& d = *cls;
    const double s = above ? 1.0 : -1.0; // t -> +inf or -inf
    if (dyadic(id)) {
        // A_n = 2 pi int t e^{(a+2) t} |t|^b (ln|t|)^c dt over |t| in [2^{m-1}, 2^m]
        double g = s * (d.a + 2.0);
        if (std::fabs(g) > 1e-12) {
            tc.superexponential = true;
            tc.trend = g < 0.0 ? T::Vanishing : T::Growing;
            tc.justification = "V ~ " + describe(d) + ": dyadic entries change faster than geometrically";
            return tc;
        }
        tc.rho = std::pow(2.0, d.b + 2.0);
        tc.beta = d.c;
        tc.gamma = 0.0;
    } else {
        double shift = id == SeqId::OmegaNorm ? 1.0 : 2.0;
        tc.rho = std::exp(s * (d.a + shift));
        tc.beta = d.b;
        tc.gamma = d.c;
    }
    classify(tc);
    const double m = std::max(1.0, std::fabs(static_cast<double>(last)));
    tc.K = last_v.value() / (std::pow(tc.rho, m) * std::pow(m, tc.beta) * std::pow(std::log(m + 1.0), tc.gamma));
    tc.justification = "V ~ " + describe(d) + (above ? " at infinity" : " at the origin") + ": entries ~ K " +
                       num(tc.rho) + "^|n| |n|^" + num(tc.beta) + " ln^" + num(tc.gamma) + "|n|, K anchored at n = " +
                       std::to_string(last);
    return tc;
}

// Asymptotic entries past the computed range, up to `extra` of them; stops early once they
// fall below `floor` after at least 50 terms.
std::vector<double> virtual_tail(const TailCertificate& tc, long extra, double floor)
{
    std::vector<double> out;
    using T = TailCertificate::Trend;
    if (tc.trend != T::Vanishing || tc.superexponential)
        return out;
    long m0 = std::labs(tc.from);
    for (long k = 0; k < extra; ++k) {
        double v = tc.entry(m0 + k);
        if (k > 50 && v < floor)
            break;
        out.push_back(v);
    }
    return out;
}

} // namespace

// ---- families ----

std::pair<double, double> AnnulusFamily::t_range(long n) const
{
    switch (kind) {
    case FamilyKind::DyadicU:
        if (n == 0)
            return {-1.0, 1.0};
        if (n > 0)
            return {std::ldexp(1.0, static_cast<int>(n - 1)), std::ldexp(1.0, static_cast<int>(n))};
        return {-std::ldexp(1.0, static_cast<int>(-n)), -std::ldexp(1.0, static_cast<int>(-n - 1))};
    case FamilyKind::ExponentialOmega:
    case FamilyKind::LogIntervalI:
        return {static_cast<double>(n), static_cast<double>(n) + 1.0};
    case FamilyKind::BoldOmega0:
        if (n != 0)
            throw InvalidParameters("the disk |x| <= e has the single member n = 0");
        return {-kInf, 1.0};
    }
    return {0.0, 0.0};
}

long AnnulusFamily::index_of(double t) const
{
    switch (kind) {
    case FamilyKind::DyadicU:
        if (std::fabs(t) <= 1.0)
            return 0;
        return (t > 0 ? 1 : -1) * static_cast<long>(std::ceil(std::log2(std::fabs(t))));
    case FamilyKind::ExponentialOmega:
    case FamilyKind::LogIntervalI:
        return static_cast<long>(std::floor(t));
    case FamilyKind::BoldOmega0:
        return 0;
    }
    return 0;
}

std::string to_string(SeqId id)
{
    switch (id) {
    case SeqId::A:
        return "A";
    case SeqId::BoldA:
        return "boldA";
    case SeqId::ScriptB:
        return "scriptB";
    case SeqId::BoldB:
        return "boldB";
    case SeqId::Bp:
        return "Bp";
    case SeqId::OmegaNorm:
        return "omega_norm";
    case SeqId::D:
        return "D";
    case SeqId::DN:
        return "DN";
    case SeqId::Lp:
        return "Lp";
    case SeqId::LpN:
        return "LpN";
    case SeqId::G:
        return "G";
    }
    return "?";
}

SeqId seq_from_string(const std::string& s)
{
    for (SeqId id : {SeqId::A, SeqId::BoldA, SeqId::ScriptB, SeqId::BoldB, SeqId::Bp, SeqId::OmegaNorm, SeqId::D,
                     SeqId::DN, SeqId::Lp, SeqId::LpN, SeqId::G})
        if (to_string(id) == s)
            return id;
    throw ConfigError("unknown sequence '" + s + "'");
}

bool needs_p(SeqId id) { return id == SeqId::Bp || id == SeqId::Lp || id == SeqId::LpN; }

long first_index(SeqId id)
{
    switch (id) {
    case SeqId::BoldA:
    case SeqId::BoldB:
        return 0;
    case SeqId::OmegaNorm:
        return 1;
    default:
        return std::numeric_limits<long>::min();
    }
}

bool TailCertificate::summable() const
{
    switch (trend) {
    case Trend::None:
    case Trend::Zero:
        return true;
    case Trend::Vanishing:
        if (superexponential || rho < 1.0 - 1e-12)
            return true;
        return beta < -1.0 || (beta == -1.0 && gamma < -1.0);
    default:
        return false;
    }
}

bool TailCertificate::weak_l1_finite() const
{
    switch (trend) {
    case Trend::None:
    case Trend::Zero:
        return true;
    case Trend::Vanishing:
        if (superexponential || rho < 1.0 - 1e-12)
            return true;
        return beta < -1.0 || (beta == -1.0 && gamma <= 0.0);
    default:
        return false;
    }
}

double TailCertificate::entry(long m) const
{
    double x = static_cast<double>(std::labs(m));
    return K * std::pow(rho, x) * std::pow(x, beta) * std::pow(std::log(x + 1.0), gamma);
}

std::string AnnularProfile::to_csv() const
{
    std::ostringstream os;
    os << "n,value,status\n";
    for (const auto& [n, v] : values) {
        os << n << ",";
        if (v.is_finite())
            os << num(v.value()) << ",finite\n";
        else if (v.is_infinite())
            os << "inf,infinite\n";
        else
            os << num(v.value()) << ",unknown\n";
    }
    return os.str();
}

// ---- entries ----

Value sequence_entry(const Potential& V, SeqId id, long n, std::optional<double> p)
{
    if (n < first_index(id))
        throw InvalidParameters(to_string(id) + " is indexed from " + std::to_string(first_index(id)));
    if (needs_p(id) && (!p || !(*p > 1.0)))
        throw InvalidParameters(to_string(id) + " needs p > 1");
    const NFunction B = NFunction::B();
    switch (id) {
    case SeqId::A: {
        auto [t1, t2] = AnnulusFamily{FamilyKind::DyadicU}.t_range(n);
        return integrate_potential(V, power_map(1.0), n == 0 ? Weight::One : Weight::AbsLog, t1, t2);
    }
    case SeqId::BoldA:
        if (n == 0)
            return integrate_potential(V, power_map(1.0), Weight::AbsLog, -kInf, 1.0);
        return sequence_entry(V, SeqId::A, n);
    case SeqId::ScriptB: {
        double t = static_cast<double>(n);
        return average_norm(AnnulusSample(V, t, t + 1.0), B).norm;
    }
    case SeqId::BoldB:
        if (n == 0)
            return average_norm(AnnulusSample(V, -kInf, 1.0), B).norm;
        return sequence_entry(V, SeqId::ScriptB, n);
    case SeqId::Bp: {
        double t = static_cast<double>(n);
        Value I = integrate_potential(V, power_map(*p), Weight::One, t, t + 1.0, 2.0 * (*p - 1.0));
        return I.is_finite() ? Value::finite(std::pow(I.value(), 1.0 / *p)) : I;
    }
    case SeqId::OmegaNorm: {
        double t = static_cast<double>(n);
        return orlicz_norm(AnnulusSample(V, t, t + 1.0), B).norm;
    }
    case SeqId::D:
    case SeqId::DN:
        return circle_mixed(V, n, n + 1.0, CircleNorm::Orlicz, 0.0, id == SeqId::DN);
    case SeqId::Lp:
    case SeqId::LpN:
        return circle_mixed(V, n, n + 1.0, CircleNorm::Lp, *p, id == SeqId::LpN);
    case SeqId::G:
        return ray_mixed(V, n);
    }
    return Value::unknown("unhandled sequence");
}

std::pair<long, long> default_range(const Potential& V, SeqId id, long cap)
{
    AnnulusFamily fam = family_of(id);
    double tmin = kInf, tmax = -kInf;
    for (const auto& reg : V.regions()) {
        tmin = std::min(tmin, reg.t_lo());
        tmax = std::max(tmax, reg.t_hi());
    }
    long lo, hi;
    if (V.is_zero()) {
        lo = -1;
        hi = 1;
    } else {
        lo = std::isinf(tmin) ? -cap : fam.index_of(tmin);
        // a member ending exactly at the support edge is the last one
        hi = std::isinf(tmax) ? cap : fam.index_of(std::nextafter(tmax, -kInf));
        if (!std::isinf(tmin) && !std::isinf(tmax) && hi < lo)
            hi = lo;
    }
    if (dyadic(id)) {
        // anchor tails at least a few members out
        if (std::isinf(tmin))
            lo = std::min(lo, -4L);
        if (std::isinf(tmax))
            hi = std::max(hi, 4L);
    }
    lo = std::max(lo, first_index(id));
    hi = std::max(hi, lo);
    return {lo, hi};
}

AnnularProfile profile(const Potential& V, SeqId id, std::optional<std::pair<long, long>> range,
                       std::optional<double> p)
{
    AnnularProfile out;
    out.id = id;
    out.p = p.value_or(0.0);
    auto def = default_range(V, id);
    auto [lo, hi] = range.value_or(def);
    lo = first_index(id) >= 0 ? first_index(id) : lo;
    // bounded support is always covered, so that entries past it are exactly zero
    bool has_inf = false, has_zero = false;
    for (const auto& reg : V.regions()) {
        has_inf = has_inf || std::isinf(reg.r_hi);
        has_zero = has_zero || reg.r_lo == 0.0;
    }
    if (!V.is_zero()) {
        if (!has_zero)
            lo = std::min(lo, std::max(def.first, first_index(id)));
        if (!has_inf)
            hi = std::max(hi, def.second);
    }
    if (hi < lo)
        throw InvalidParameters("empty index range");
    if (hi - lo > 400)
        throw InvalidParameters("index range too long");
    out.n_low = lo;
    out.n_high = hi;

    std::vector<Value> vals(static_cast<std::size_t>(hi - lo + 1));
    parallel_for(vals.size(), [&](std::size_t i) { vals[i] = sequence_entry(V, id, lo + static_cast<long>(i), p); });
    for (std::size_t i = 0; i < vals.size(); ++i)
        out.values[lo + static_cast<long>(i)] = vals[i];

    out.above = make_tail(V, id, true, hi + 1, hi, vals.back());
    out.below = make_tail(V, id, false, lo - 1, lo, vals.front());
    return out;
}

// ---- sequence functionals ----

Value sequence_sum(const AnnularProfile& prof)
{
    double s = 0.0;
    bool unknown = false;
    std::string why;
    for (const auto& [n, v] : prof.values) {
        if (v.is_infinite())
            return Value::infinite("entry " + std::to_string(n) + " is infinite: " + v.reason());
        if (v.is_unknown()) {
            unknown = true;
            why = v.reason();
        }
        s += v.value();
    }
    for (const TailCertificate* tc : {&prof.below, &prof.above}) {
        if (!tc->summable())
            return Value::infinite("divergent tail: " + tc->justification);
        using T = TailCertificate::Trend;
        if (tc->trend == T::Vanishing && !tc->superexponential) {
            const TailCertificate& t = *tc;
            double m0 = static_cast<double>(std::labs(t.from)) - 0.5;
            auto a = [&t](double x) {
                return t.K * std::pow(t.rho, x) * std::pow(x, t.beta) * std::pow(std::log(x + 1.0), t.gamma);
            };
            s += integrate_tail(a, m0, TailClass{std::log(t.rho), t.beta, t.gamma, 0.0}).value;
        }
    }
    if (unknown)
        return Value::unknown(why, s);
    return Value::finite(s);
}

Value weak_l1(const AnnularProfile& prof)
{
    std::vector<double> a;
    for (const auto& [n, v] : prof.values) {
        if (v.is_infinite())
            return Value::infinite("entry " + std::to_string(n) + " is infinite");
        a.push_back(v.value());
    }
    for (const TailCertificate* tc : {&prof.below, &prof.above}) {
        if (!tc->weak_l1_finite())
            return Value::infinite("tail entries are not O(1/n): " + tc->justification);
        auto extra = virtual_tail(*tc, 200000, 0.0);
        a.insert(a.end(), extra.begin(), extra.end());
    }
    return Value::finite(weak_l1(a));
}

Verdict thresholded_sum(const AnnularProfile& prof, double c, double power)
{
    double s = 0.0;
    for (const auto& [n, v] : prof.values) {
        if (v.is_infinite())
            return {Value::infinite("entry " + std::to_string(n) + " is infinite"), true};
        if (v.value() > c)
            s += std::pow(v.value(), power);
    }
    bool robust = true;
    using T = TailCertificate::Trend;
    for (const TailCertificate* tc : {&prof.below, &prof.above}) {
        switch (tc->trend) {
        case T::Growing:
        case T::Infinite:
            return {Value::infinite("tail entries do not tend to zero: " + tc->justification), true};
        case T::Constant:
            robust = false;
            if (tc->K > c)
                return {Value::infinite("tail entries tend to " + num(tc->K) + " > c"), false};
            break;
        case T::Vanishing:
            for (double v : virtual_tail(*tc, 1000000, c))
                if (v > c)
                    s += std::pow(v, power);
            break;
        default:
            break;
        }
    }
    return {Value::finite(s), robust};
}

Verdict thresholded_sqrt_sum(const AnnularProfile& prof, double c) { return thresholded_sum(prof, c, 0.5); }

Value count_at_least(const AnnularProfile& prof, double level)
{
    double k = 0.0;
    for (const auto& [n, v] : prof.values)
        if (v.is_infinite() || v.value() >= level)
            k += 1.0;
    using T = TailCertificate::Trend;
    for (const TailCertificate* tc : {&prof.below, &prof.above}) {
        if (tc->trend == T::Growing || tc->trend == T::Infinite ||
            (tc->trend == T::Constant && tc->K >= level))
            return Value::infinite("infinitely many entries reach the level: " + tc->justification);
        for (double v : virtual_tail(*tc, 1000000, level))
            if (v >= level)
                k += 1.0;
    }
    return Value::finite(k);
}

double weak_l1(const std::vector<double>& a)
{
    std::vector<double> v;
    for (double x : a)
        if (std::fabs(x) > 0.0)
            v.push_back(std::fabs(x));
    std::sort(v.begin(), v.end(), std::greater<double>());
    // sup_s s card{|a| > s} is approached as s rises to each value v_k
    double best = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        std::size_t j = k;
        while (j + 1 < v.size() && v[j + 1] == v[k])
            ++j;
        best = std::max(best, v[k] * static_cast<double>(j + 1));
        k = j;
    }
    return best;
}

double thresholded_power_sum(const std::vector<double>& a, double c, double power)
{
    double s = 0.0;
    for (double x : a)
        if (std::fabs(x) > c)
            s += std::pow(std::fabs(x), power);
    return s;
}

double thresholded_sqrt_sum(const std::vector<double>& a, double c) { return thresholded_power_sum(a, c, 0.5); }

double rect_mixed_norm(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<std::vector<double>>& values, std::size_t x_lo, std::size_t x_hi,
                       std::size_t y_lo, std::size_t y_hi)
{
    if (x_hi > x.size() - 1 || y_hi > y.size() - 1 || x_lo >= x_hi || y_lo >= y_hi)
        throw InvalidDomain("sub-rectangle must be a nonempty union of grid cells");
    double total = 0.0;
    for (std::size_t i = x_lo; i < x_hi; ++i) {
        std::vector<double> v, m;
        for (std::size_t j = y_lo; j < y_hi; ++j) {
            v.push_back(values[i][j]);
            m.push_back(y[j + 1] - y[j]);
        }
        bool zero = std::all_of(v.begin(), v.end(), [](double s) { return s == 0.0; });
        double nrm = zero ? 0.0 : average_norm(CellSample(v, m), NFunction::B()).norm.value();
        total += (x[i + 1] - x[i]) * nrm;
    }
    return total;
}

} // namespace speclab

namespace speclab {

AnnularProfile profile_A(const LogProfile& G)
{
    AnnulusFamily fam{FamilyKind::DyadicU};
    AnnularProfile out;
    out.id = SeqId::A;
    if (G.pieces.empty()) {
        out.below.trend = out.above.trend = TailCertificate::Trend::Zero;
        return out;
    }
    // Support bounds in t (finite) or in s for Euler pieces.
    double t_min = kInf, s_max = -kInf, t_max = -kInf;
    for (const auto& pc : G.pieces) {
        if (pc.kind == LogPiece::Kind::Formula) {
            if (std::isinf(pc.lo) || std::isinf(pc.hi))
                throw InvalidParameters("profile_A needs bounded formula pieces");
            t_min = std::min(t_min, pc.lo);
            t_max = std::max(t_max, pc.hi);
        } else {
            t_min = std::min(t_min, std::exp(pc.lo));
            s_max = std::max(s_max, pc.hi);
        }
    }
    long lo = fam.index_of(t_min);
    long hi = s_max > -kInf ? std::max(fam.index_of(t_max > -kInf ? t_max : 0.0),
                                       static_cast<long>(std::ceil(s_max / std::log(2.0))))
                            : fam.index_of(t_max);
    if (hi - lo > 20000)
        throw InvalidParameters("profile_A range too long");

    // Closed form of 2 pi int G dt (n = 0) or 2 pi int |t| G dt over (e^{s0}, e^{s1}) for t^2 G = (1+eta)/4.
    auto euler_part = [&](double eta, double s0, double s1, long n) {
        auto [a, b] = fam.t_range(n);
        double c = 2.0 * kPi * (1.0 + eta) / 4.0;
        if (n == 0) {
            double v = std::min(s1, 0.0);
            return v > s0 ? c * (std::exp(-s0) - std::exp(-v)) : 0.0;
        }
        if (n < 0)
            return 0.0;
        double u = std::max(s0, std::log(a)), v = std::min(s1, std::log(b));
        return v > u ? c * (v - u) : 0.0;
    };
    double tail_start = kInf;
    const auto& last = G.pieces.back();
    if (G.tail_eta)
        tail_start = last.kind == LogPiece::Kind::Euler ? last.hi : std::log(last.hi);
    for (long n = lo; n <= hi; ++n) {
        double v = 0.0;
        auto [a, b] = fam.t_range(n);
        for (const auto& pc : G.pieces) {
            if (pc.kind == LogPiece::Kind::Euler) {
                v += euler_part(pc.eta, pc.lo, pc.hi, n);
            } else {
                double u = std::max(a, pc.lo), w = std::min(b, pc.hi);
                if (w > u) {
                    const auto& f = pc.G;
                    v += 2.0 * kPi *
                         integrate([&](double t) { return (n == 0 ? 1.0 : std::fabs(t)) * f(t); }, u, w).value;
                }
            }
        }
        if (G.tail_eta)
            v += euler_part(*G.tail_eta, tail_start, kInf, n);
        out.values[n] = Value::finite(v);
    }
    out.n_low = lo;
    out.n_high = hi;
    out.below.trend = TailCertificate::Trend::Zero;
    out.below.from = lo - 1;
    if (G.tail_eta) {
        out.above.trend = TailCertificate::Trend::Constant;
        out.above.K = 2.0 * kPi * (1.0 + *G.tail_eta) / 4.0 * std::log(2.0);
        out.above.justification = "Euler tail gives equal A_n on every dyadic interval";
    } else {
        out.above.trend = TailCertificate::Trend::Zero;
    }
    out.above.from = hi + 1;
    return out;
}

} // namespace speclab
