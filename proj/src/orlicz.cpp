#include "speclab/orlicz.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace speclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double a_eval(double s)
{
    if (s < 1e-3)
        return s * s * (0.5 + s * (1.0 / 6 + s * (1.0 / 24 + s * (1.0 / 120 + s / 720))));
    return std::expm1(s) - s;
}

double b_eval(double s)
{
    // sum_{n>=2} (-1)^n s^n / (n(n-1))
    if (s < 1e-3)
        return s * s * (0.5 - s * (1.0 / 6 - s * (1.0 / 12 - s * (1.0 / 20 - s / 30))));
    return (1.0 + s) * std::log1p(s) - s;
}

// Legendre transform sup_s (s t - psi(s)) for a convex psi with psi(0) = 0.
double legendre(const Fn& psi, double t)
{
    if (t <= 0.0)
        return 0.0;
    auto slope = [&](double s) {
        double h = 1e-6 * std::max(1.0, s);
        return (psi(s + h) - psi(std::max(0.0, s - h))) / (s + h - std::max(0.0, s - h));
    };
    double hi = 1.0;
    while (slope(hi) < t && hi < 1e150)
        hi *= 2.0;
    if (slope(hi) < t)
        return kInf;
    auto r = boost::math::tools::bisect([&](double s) { return slope(s) - t; }, 0.0, hi,
                                        boost::math::tools::eps_tolerance<double>(45));
    double s = 0.5 * (r.first + r.second);
    return s * t - psi(s);
}

} // namespace

NFunction NFunction::A()
{
    NFunction f;
    f.kind_ = Kind::ExpA;
    f.name_ = "A";
    return f;
}

NFunction NFunction::B()
{
    NFunction f;
    f.kind_ = Kind::LLogLB;
    f.name_ = "B";
    return f;
}

NFunction NFunction::power(double p)
{
    if (!(p > 1.0))
        throw InvalidParameters("power N-function needs p > 1");
    NFunction f;
    f.kind_ = Kind::Power;
    f.p_ = p;
    std::ostringstream os;
    os << "pow(" << p << ")";
    f.name_ = os.str();
    return f;
}

NFunction NFunction::custom(std::string name, Fn eval)
{
    NFunction f;
    f.kind_ = Kind::Custom;
    f.name_ = std::move(name);
    f.custom_ = std::move(eval);
    return f;
}

double NFunction::operator()(double s) const
{
    s = std::fabs(s);
    switch (kind_) {
    case Kind::ExpA:
        return a_eval(s);
    case Kind::LLogLB:
        return b_eval(s);
    case Kind::Power:
        return std::pow(s, p_) / p_;
    case Kind::Custom:
        return custom_(s);
    }
    return 0.0;
}

double NFunction::derivative(double s) const
{
    s = std::fabs(s);
    switch (kind_) {
    case Kind::ExpA:
        return std::expm1(s);
    case Kind::LLogLB:
        return std::log1p(s);
    case Kind::Power:
        return std::pow(s, p_ - 1.0);
    case Kind::Custom: {
        double h = 1e-6 * std::max(1.0, s);
        double lo = std::max(0.0, s - h);
        return (custom_(s + h) - custom_(lo)) / (s + h - lo);
    }
    }
    return 0.0;
}

NFunction NFunction::complementary() const
{
    switch (kind_) {
    case Kind::ExpA:
        return B();
    case Kind::LLogLB:
        return A();
    case Kind::Power:
        return power(p_ / (p_ - 1.0));
    case Kind::Custom: {
        Fn psi = custom_;
        return custom(name_ + "*", [psi](double t) { return legendre(psi, std::fabs(t)); });
    }
    }
    return *this;
}

std::optional<Decay> NFunction::compose(const Decay& f, double k, EndKind where) const
{
    int g = growth_sign(f, where);
    if (g == 0)
        return Decay{(*this)(k * f.K), 0.0, 0.0, 0.0};
    if (g < 0) {
        switch (kind_) {
        case Kind::ExpA:
        case Kind::LLogLB: {
            Decay d = speclab::power(f, 2.0);
            d.K *= 0.5 * k * k;
            return d;
        }
        case Kind::Power: {
            Decay d = speclab::power(f, p_);
            d.K *= std::pow(k, p_) / p_;
            return d;
        }
        case Kind::Custom: {
            // psi(s)/s is nondecreasing, so psi(k f) <= psi(1) k f once k f <= 1.
            Decay d = f;
            d.K *= k * std::max((*this)(1.0), 1e-300);
            return d;
        }
        }
    }
    switch (kind_) {
    case Kind::ExpA:
        if (std::fabs(f.a) < 1e-12 && std::fabs(f.b - 1.0) < 1e-12 && std::fabs(f.c) < 1e-12) {
            // e^{k K L} is a pure power of d (or of r at infinity).
            double e = k * f.K;
            return Decay{0.5, where == EndKind::Finite ? -e : e, 0.0, 0.0};
        }
        if (std::fabs(f.a) < 1e-12 && f.b < 1.0)
            throw MissingDecayClass("e^{L^b} with b < 1 has no power class");
        return std::nullopt;
    case Kind::LLogLB: {
        // (1+kf) ln(1+kf) - kf ~ kf ln f, and ln f ~ |a| L, or b ln L when a = 0.
        Decay d = f;
        if (std::fabs(f.a) > 1e-12) {
            d.K *= k * std::fabs(f.a);
            d.b += 1.0;
        } else if (std::fabs(f.b) > 1e-12) {
            d.K *= k * std::fabs(f.b);
            d.c += 1.0;
        } else {
            // ln f ~ c ln ln L: a triple-log factor below the class resolution.
            d.K *= k;
        }
        return d;
    }
    case Kind::Power: {
        Decay d = speclab::power(f, p_);
        d.K *= std::pow(k, p_) / p_;
        return d;
    }
    case Kind::Custom:
        throw MissingDecayClass("custom N-function composed with an unbounded function");
    }
    return std::nullopt;
}

bool NFunction::spot_check() const
{
    if ((*this)(0.0) != 0.0)
        return false;
    double prev = 0.0, prev_slope = 0.0;
    for (int i = 1; i <= 400; ++i) {
        double s = 1e-3 * std::pow(1.03, i);
        double v = (*this)(s);
        if (std::fabs(v - (*this)(-s)) > 1e-12 * std::max(1.0, v))
            return false;
        if (!(v > prev))
            return false;
        double slope = (v - prev) / (s - (i == 1 ? 0.0 : 1e-3 * std::pow(1.03, i - 1)));
        if (slope < prev_slope * (1.0 - 1e-6))
            return false;
        prev = v;
        prev_slope = slope;
    }
    return true;
}

double ln_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

PointwiseMap psi_map(const NFunction& psi, double k)
{
    PointwiseMap m;
    m.fn = [psi, k](double s) { return psi(k * s); };
    m.fn_log = [psi, k](LogReal s) {
        if (s.sign == 0)
            return LogReal{};
        double ls = s.lg + std::log(k);
        if (psi.kind() == NFunction::Kind::Power)
            return LogReal::exp_of(psi.exponent() * ls - std::log(psi.exponent()));
        if (ls < -230.0 && psi.kind() != NFunction::Kind::Custom)
            return LogReal::exp_of(2.0 * ls - std::log(2.0));
        return LogReal::from_double(psi(std::exp(ls)));
    };
    m.klass = [psi, k](const Decay& f, EndKind where) { return psi.compose(f, k, where); };
    return m;
}

PointwiseMap power_map(double p)
{
    PointwiseMap m;
    m.fn = [p](double s) { return std::pow(std::fabs(s), p); };
    m.fn_log = [p](LogReal s) { return s.sign == 0 ? LogReal{} : LogReal::exp_of(p * s.lg); };
    m.klass = [p](const Decay& f, EndKind) -> std::optional<Decay> { return power(f, p); };
    return m;
}

PointwiseMap unit_map()
{
    PointwiseMap m;
    m.fn = [](double) { return 1.0; };
    m.fn_log = [](LogReal) { return LogReal::exp_of(0.0); };
    m.klass = [](const Decay&, EndKind) -> std::optional<Decay> { return Decay{}; };
    return m;
}

CellSample::CellSample(std::vector<double> values, std::vector<double> measures)
    : v_(std::move(values)), m_(std::move(measures))
{
    if (v_.size() != m_.size() || v_.empty())
        throw InvalidDomain("cell sample needs matching nonempty value and measure lists");
    for (double m : m_)
        if (!(m > 0.0))
            throw InvalidDomain("cell measure must be positive");
}

double CellSample::measure() const { return std::accumulate(m_.begin(), m_.end(), 0.0); }

Value CellSample::integrate(const PointwiseMap& h) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i)
        s += m_[i] * h.fn(std::fabs(v_[i]));
    if (!std::isfinite(s))
        return Value::infinite("integrand overflow on a cell");
    return Value::finite(s);
}

// Past |t| ~ 1e8 the log-space products lose digits; the asymptotic remainder takes over.
constexpr double kLogChartLimit = 1e8;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

Value integrate_chart(const Chart1D& c, const std::function<LogReal(double)>& g,
                      const std::optional<Decay>& lo_cls, const std::optional<Decay>& hi_cls)
{
    const bool log_chart = c.kind == Chart1D::Kind::Log;
    const double lscale = std::log(c.scale);
    auto integrand = [&](double x) {
        double ld;
        if (log_chart)
            ld = (c.jac + 1.0) * x + lscale;
        else
            ld = (c.jac == 0.0 ? 0.0 : c.jac * std::log(c.rho0 + x)) + lscale;
        LogReal v = g(x);
        if (v.sign < 0)
            v.sign = 1;
        return (v * LogReal::exp_of(ld)).to_double();
    };

    double total = 0.0;
    const bool lo_inf = std::isinf(c.lo), hi_inf = std::isinf(c.hi);
    if (lo_inf && !log_chart)
        throw InvalidDomain("linear chart cannot start at -infinity");
    if (lo_inf && hi_inf && !log_chart)
        throw InvalidDomain("linear chart cannot be unbounded on both sides");

    double m_lo = c.lo, m_hi = c.hi;
    if (lo_inf || (lo_cls && !log_chart)) {
        if (!lo_cls)
            throw MissingDecayClass("singular lower end without a decay class");
        if (lo_inf) {
            m_lo = hi_inf ? 0.0 : std::min(0.0, c.hi - 1.0);
            TailClass tc{-(lo_cls->a + c.jac + 1.0), lo_cls->b, lo_cls->c, 0.0};
            if (!tail_integrable(tc))
                return Value::infinite("not integrable at the origin: " + describe(*lo_cls));
            Fn neg = [&](double y) { return integrand(-y); };
            total += integrate_tail(neg, -m_lo, tc, kLogChartLimit).value;
        } else {
            if (c.lo != 0.0)
                throw InvalidDomain("singular lower end must be at chart point 0");
            double pj = lo_cls->a + (c.rho0 == 0.0 ? c.jac : 0.0);
            if (!left_singular_integrable(pj, lo_cls->b, lo_cls->c))
                return Value::infinite("not integrable at the singular end: " + describe(*lo_cls));
            m_lo = hi_inf ? 1.0 : 0.5 * c.hi;
            total += integrate_left_singular(integrand, m_lo, pj, lo_cls->b, lo_cls->c).value;
        }
    }
    if (hi_inf) {
        if (!hi_cls)
            throw MissingDecayClass("infinite upper end without a decay class");
        TailClass tc = log_chart ? TailClass{hi_cls->a + c.jac + 1.0, hi_cls->b, hi_cls->c, 0.0}
                                 : TailClass{0.0, hi_cls->a + c.jac, hi_cls->b, hi_cls->c};
        if (!tail_integrable(tc))
            return Value::infinite("not integrable at infinity: " + describe(*hi_cls));
        m_hi = std::max(m_lo, 0.0) + 1.0;
        total += integrate_tail(integrand, m_hi, tc, log_chart ? kLogChartLimit : kInfinity).value;
    }
    if (m_hi > m_lo)
        total += integrate(integrand, m_lo, m_hi).value;
    if (!std::isfinite(total))
        return Value::infinite("integral overflow");
    return Value::finite(total);
}

Value integrate_piece(const Piece& p, const PointwiseMap& h)
{
    std::optional<Decay> lo, hi;
    if (p.lo_class) {
        lo = h.klass(*p.lo_class, EndKind::Finite);
        if (!lo)
            return Value::infinite("integrand grows faster than any power at the lower end");
    }
    if (p.hi_class) {
        hi = h.klass(*p.hi_class, EndKind::Infinity);
        if (!hi)
            return Value::infinite("integrand grows faster than any power at infinity");
    }
    auto g = [&](double x) {
        LogReal fx = p.f(x);
        if (fx.sign < 0)
            fx.sign = 1;
        return h.fn_log(fx);
    };
    return integrate_chart(p.chart, g, lo, hi);
}

FunctionSample::FunctionSample(std::vector<Piece> pieces, std::optional<double> measure)
    : pieces_(std::move(pieces))
{
    if (measure) {
        measure_ = *measure;
    } else {
        Value m = integrate(unit_map());
        measure_ = m.is_finite() ? m.value() : kInf;
    }
}

double FunctionSample::measure() const { return measure_; }

Value FunctionSample::integrate(const PointwiseMap& h) const
{
    Value v = Value::finite(0.0);
    for (const auto& p : pieces_) {
        v = v + integrate_piece(p, h);
        if (v.is_infinite())
            return v;
    }
    return v;
}

NormResult luxemburg_norm(const Sample& f, const NFunction& psi)
{
    auto gauge = [&](double kappa) { return f.integrate(psi_map(psi, 1.0 / kappa)); };
    Value far = gauge(1e12);
    if (far.is_infinite())
        return {Value::infinite(far.reason()), kInf, kInf};
    if (far.value() == 0.0)
        return {Value::finite(0.0), 0.0, 0.0};

    double lo = 1e-12, hi = 1e12;
    auto excess = [&](double lk) {
        Value v = gauge(std::exp(lk));
        return (v.is_infinite() ? kInf : v.value()) - 1.0;
    };
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < 40 && excess(lhi) > 0.0; ++i)
        lhi += 20.0;
    for (int i = 0; i < 40 && excess(llo) <= 0.0; ++i)
        llo -= 20.0;
    if (excess(lhi) > 0.0)
        throw NonIntegrable("gauge integral exceeds 1 for every trial kappa");
    // relative width 1e-10 in kappa
    auto tol = [](double a, double b) { return std::fabs(b - a) < 1e-10; };
    auto r = boost::math::tools::bisect(excess, llo, lhi, tol);
    return {Value::finite(std::exp(r.second)), std::exp(r.first), std::exp(r.second)};
}

NormResult dual_norm(const Sample& f, const NFunction& psi, double level)
{
    NormResult lux = luxemburg_norm(f, psi);
    if (!lux.norm.is_finite() || lux.norm.value() == 0.0)
        return lux;
    auto F = [&](double lk) {
        double k = std::exp(lk);
        Value v = f.integrate(psi_map(psi, k));
        return v.is_infinite() ? kInf : (level + v.value()) / k;
    };
    double centre = -std::log(lux.norm.value());
    const double step = 0.5;
    int lo = -12, hi = 12;
    std::vector<double> vals;
    auto scan = [&]() {
        vals.clear();
        for (int j = lo; j <= hi; ++j)
            vals.push_back(F(centre + step * j));
    };
    scan();
    for (int it = 0; it < 200; ++it) {
        auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
        if (best == 0) {
            lo -= 24;
        } else if (best == static_cast<long>(vals.size()) - 1) {
            hi += 24;
        } else {
            double a = centre + step * (lo + best - 1), b = centre + step * (lo + best + 1);
            auto r = boost::math::tools::brent_find_minima(F, a, b, std::numeric_limits<double>::digits);
            return {Value::finite(r.second), std::exp(r.first), std::exp(r.first)};
        }
        scan();
    }
    throw NumericFailure("dual norm minimiser not bracketed");
}

NormResult orlicz_norm(const Sample& f, const NFunction& psi) { return dual_norm(f, psi, 1.0); }

NormResult average_norm(const Sample& f, const NFunction& psi)
{
    double mu = f.measure();
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw InvalidDomain("average norm needs 0 < mu < infinity");
    return dual_norm(f, psi, mu);
}

double dual_norm_bruteforce(const CellSample& f, const NFunction& psi, double level)
{
    const auto& v = f.values();
    const auto& m = f.measures();
    NFunction phi = psi.complementary();
    // For multiplier lambda the maximiser is g_i = psi'(|f_i| / lambda).
    auto used = [&](double llam) {
        double lam = std::exp(llam), s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += m[i] * phi(psi.derivative(std::fabs(v[i]) / lam));
        // overflow of psi' gives inf or inf - inf; either way the constraint is violated
        return std::isnan(s) ? std::numeric_limits<double>::infinity() : s - level;
    };
    double fmax = 0.0;
    for (double x : v)
        fmax = std::max(fmax, std::fabs(x));
    if (fmax == 0.0)
        return 0.0;
    double lo = std::log(fmax) - 60.0, hi = std::log(fmax) + 60.0;
    for (int i = 0; !(used(lo) > 0.0); ++i) {
        if (i == 100)
            throw NumericFailure("dual multiplier bracket not found");
        lo -= 20.0;
    }
    for (int i = 0; used(hi) > 0.0; ++i) {
        if (i == 100)
            throw NumericFailure("dual multiplier bracket not found");
        hi += 20.0;
    }
    auto r = boost::math::tools::bisect(used, lo, hi, boost::math::tools::eps_tolerance<double>(52));
    double lam = std::exp(0.5 * (r.first + r.second));
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += m[i] * std::fabs(v[i]) * psi.derivative(std::fabs(v[i]) / lam);
    return s;
}

EmbeddingConstant embedding_constant_M(double p)
{
    if (!(p > 1.0) || p > 2.0)
        throw InvalidParameters("M(p) needs 1 < p <= 2");
    const NFunction B = NFunction::B();
    // h(u) = ln B(e^u) - p u, maximised over u = ln t.
    auto h = [&](double u) { return std::log(B(std::exp(u))) - p * u; };
    const double u0 = -20.0, u1 = 700.0, du = 0.25;
    std::vector<double> vals;
    for (double u = u0; u <= u1; u += du)
        vals.push_back(h(u));
    EmbeddingConstant out;
    out.local_maxima = 0;
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        if (vals[i] >= vals[i - 1] && vals[i] > vals[i + 1])
            ++out.local_maxima;
    auto best = std::max_element(vals.begin(), vals.end()) - vals.begin();
    if (best == 0 && std::fabs(p - 2.0) < 1e-12) {
        // B(t)/t^2 increases to 1/2 as t -> 0.
        out.t_p = 0.0;
        out.m_p = 0.5;
        out.M = std::sqrt(0.5);
        return out;
    }
    if (best == 0 || best == static_cast<long>(vals.size()) - 1)
        throw NumericFailure("B(t)/t^p maximiser outside the scanned range");
    double a = u0 + du * (best - 1), b = u0 + du * (best + 1);
    auto r = boost::math::tools::brent_find_minima([&](double u) { return -h(u); }, a, b,
                                                   std::numeric_limits<double>::digits);
    double hmax = -r.second;
    out.t_p = std::exp(r.first);
    out.m_p = std::exp(hmax);
    out.M = std::exp(hmax / p);
    return out;
}

} // namespace speclab
