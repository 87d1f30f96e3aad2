#include "speclab/potentials.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace speclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Decay scaled(Decay d, double k)
{
    d.K *= k;
    return d;
}

// ---- one-dimensional segments of the two factors ----

struct Segment {
    Chart1D chart;
    std::function<LogReal(double)> f;   // factor value at chart point x
    std::function<double(double)> t_of; // ln r at chart point x (radial segments)
    std::optional<Decay> lo_cls, hi_cls;
};

std::optional<Decay> radial_class_lo(const Region& reg)
{
    if (reg.at_r_lo)
        return reg.at_r_lo;
    if (reg.radial_constant())
        return Decay{reg.radial.constant_value(), 0.0, 0.0, 0.0};
    return std::nullopt;
}

std::optional<Decay> radial_class_inf(const Region& reg)
{
    if (reg.at_infinity)
        return reg.at_infinity;
    if (reg.radial_constant())
        return Decay{reg.radial.constant_value(), 0.0, 0.0, 0.0};
    return std::nullopt;
}

// Radial segments of reg over t in [u, v] (a sub-range of the region), measure r^jac dr.
void radial_segments(const Region& reg, double u, double v, double jac, std::vector<Segment>& out)
{
    if (!(v > u))
        return;
    const double tlo = reg.t_lo();
    const bool at_lo = u <= tlo;
    auto R = std::make_shared<const Region>(reg);
    auto log_seg = [&](double a, double b) {
        Segment s;
        s.chart.kind = Chart1D::Kind::Log;
        s.chart.lo = a;
        s.chart.hi = b;
        s.chart.jac = jac;
        s.f = [R](double t) { return R->f_at_t(t); };
        s.t_of = [](double t) { return t; };
        if (std::isinf(a)) {
            s.lo_cls = radial_class_lo(reg);
            if (!s.lo_cls)
                throw MissingDecayClass("region reaching the origin needs a class at r = 0");
        }
        if (std::isinf(b)) {
            s.hi_cls = radial_class_inf(reg);
            if (!s.hi_cls)
                throw MissingDecayClass("unbounded region needs a class at infinity");
        }
        out.push_back(std::move(s));
    };
    if (at_lo && reg.r_lo > 0.0 && reg.at_r_lo) {
        double rv = std::isinf(v) || v > 700.0 ? kInf : std::exp(v);
        double D = std::min(rv - reg.r_lo, reg.r_lo);
        Segment s;
        s.chart.kind = Chart1D::Kind::Linear;
        s.chart.lo = 0.0;
        s.chart.hi = D;
        s.chart.rho0 = reg.r_lo;
        s.chart.jac = jac;
        s.f = [R](double d) { return R->f_at_d(d); };
        const double lr = std::log(reg.r_lo);
        const double r0 = reg.r_lo;
        s.t_of = [lr, r0](double d) { return lr + std::log1p(d / r0); };
        s.lo_cls = reg.at_r_lo;
        out.push_back(std::move(s));
        double tb = std::log(reg.r_lo + D);
        if (tb < v)
            log_seg(tb, v);
        return;
    }
    log_seg(u, v);
}

std::vector<Segment> angular_segments(const Region& reg)
{
    std::vector<Segment> out;
    auto R = std::make_shared<const Region>(reg);
    auto plain = [&](double a, double b) {
        Segment s;
        s.chart.kind = Chart1D::Kind::Linear;
        s.chart.lo = 0.0;
        s.chart.hi = b - a;
        s.chart.rho0 = a;
        s.f = [R, a](double x) { return LogReal::from_double(R->g(a + x)); };
        out.push_back(std::move(s));
    };
    if (!reg.angular_singularity) {
        plain(reg.th_lo, reg.th_hi);
        return out;
    }
    const double ts = reg.angular_singularity->theta;
    const Decay cls = reg.angular_singularity->cls;
    if (ts > reg.th_lo) {
        Segment s;
        s.chart.kind = Chart1D::Kind::Linear;
        s.chart.lo = 0.0;
        s.chart.hi = ts - reg.th_lo;
        s.chart.rho0 = 1.0; // jac = 0, origin irrelevant
        s.f = [R, ts](double x) { return LogReal::from_double(R->g(ts - x)); };
        s.lo_cls = cls;
        out.push_back(std::move(s));
    }
    if (ts < reg.th_hi) {
        Segment s;
        s.chart.kind = Chart1D::Kind::Linear;
        s.chart.lo = 0.0;
        s.chart.hi = reg.th_hi - ts;
        s.chart.rho0 = 1.0;
        s.f = [R, ts](double x) { return LogReal::from_double(R->g(ts + x)); };
        s.lo_cls = cls;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> weight_kinks(Weight w)
{
    switch (w) {
    case Weight::LogPlusAbs:
    case Weight::LogPlusInv:
    case Weight::AbsLog:
        return {0.0};
    case Weight::LogLog:
        return {1.0};
    default:
        return {};
    }
}

// Class of the weight at the lower end of a radial segment and at infinity; empty = weight
// vanishes identically on the segment.
bool weight_vanishes_on(Weight w, double u, double v)
{
    switch (w) {
    case Weight::LogPlusAbs:
        return v <= 0.0;
    case Weight::LogPlusInv:
        return u >= 0.0;
    case Weight::LogLog:
        return v <= 1.0;
    default:
        return false;
    }
}

Decay weight_class_origin(Weight w)
{
    switch (w) {
    case Weight::Log1p:
        return {1.0, 1.0, 0.0, 0.0};
    case Weight::Log2p:
        return {std::log(2.0), 0.0, 0.0, 0.0};
    case Weight::LogPlusInv:
    case Weight::AbsLog:
        return {1.0, 0.0, 1.0, 0.0};
    default:
        return {};
    }
}

Decay weight_class_infinity(Weight w)
{
    switch (w) {
    case Weight::One:
        return {};
    case Weight::LogLog:
        return {1.0, 0.0, 0.0, 1.0};
    default:
        return {1.0, 0.0, 1.0, 0.0};
    }
}

Decay weight_class_at(Weight w, double t0)
{
    double w0 = weight_at_t(w, t0);
    if (w0 > 1e-14)
        return {w0, 0.0, 0.0, 0.0};
    return {1.0, 1.0, 0.0, 0.0};
}

double sampled_max(const std::function<double(double)>& f, double a, double b, int n = 400)
{
    double m = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = a + (b - a) * (i + 0.5) / (n + 1);
        double v = f(x);
        if (std::isfinite(v))
            m = std::max(m, std::fabs(v));
    }
    return m;
}

double angular_max(const Region& reg)
{
    if (reg.angular_constant())
        return std::fabs(reg.angular.constant_value());
    return sampled_max([&](double th) { return reg.g(th); }, reg.th_lo, reg.th_hi, 2000);
}

double radial_max(const Region& reg, double u, double v)
{
    if (reg.radial_constant())
        return std::fabs(reg.radial.constant_value());
    double a = std::isinf(u) ? std::max(-60.0, v - 60.0) : u;
    double b = std::isinf(v) ? std::min(a + 60.0, 700.0) : v;
    if (!(b > a))
        b = a + 1.0;
    return sampled_max([&](double t) { return reg.f_at_t(t).to_double(); }, a, b, 2000);
}

Value add_values(const Value& a, const Value& b) { return a + b; }

// int int h(f g) w(r) r^extra r dr dth over the region restricted to t in [t1, t2].
Value block_integral(const Region& reg, const PointwiseMap& h, Weight w, double t1, double t2,
                     double extra)
{
    double u = std::max(t1, reg.t_lo()), v = std::min(t2, reg.t_hi());
    if (!(v > u))
        return Value::finite(0.0);
    std::vector<double> cuts{u};
    for (double k : weight_kinks(w))
        if (k > u && k < v)
            cuts.push_back(k);
    cuts.push_back(v);

    const double jac = 1.0 + extra;
    std::vector<Segment> rsegs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (weight_vanishes_on(w, cuts[i], cuts[i + 1]))
            continue;
        double a = cuts[i];
        // A region that starts at a weight kink keeps its singular lower end.
        radial_segments(reg, a, cuts[i + 1], jac, rsegs);
    }
    auto weight_class_lo = [&](const Segment& s) {
        if (s.chart.kind == Chart1D::Kind::Log)
            return weight_class_origin(w);
        return weight_class_at(w, std::log(s.chart.rho0));
    };

    Value total = Value::finite(0.0);
    const bool g_const = reg.angular_constant() && !reg.angular_singularity;
    if (g_const) {
        const double c = reg.angular.constant_value();
        for (const auto& s : rsegs) {
            std::optional<Decay> lo, hi;
            if (s.lo_cls) {
                auto k = h.klass(scaled(*s.lo_cls, c), EndKind::Finite);
                if (!k)
                    return Value::infinite("integrand grows faster than any power at the inner radius");
                lo = multiply(*k, weight_class_lo(s));
            }
            if (s.hi_cls) {
                auto k = h.klass(scaled(*s.hi_cls, c), EndKind::Infinity);
                if (!k)
                    return Value::infinite("integrand grows faster than any power at infinity");
                hi = multiply(*k, weight_class_infinity(w));
            }
            auto g = [&](double x) {
                LogReal fx = s.f(x);
                fx.sign = fx.sign == 0 ? 0 : 1;
                return h.fn_log(fx * LogReal::from_double(c)) *
                       LogReal::from_double(weight_at_t(w, s.t_of(x)));
            };
            total = total + integrate_chart(s.chart, g, lo, hi).scaled(reg.sector());
            if (total.is_infinite())
                return total;
        }
        return total;
    }

    std::vector<Segment> asegs = angular_segments(reg);
    bool radial_singular = false;
    for (const auto& s : rsegs)
        radial_singular = radial_singular || s.lo_cls.has_value() || s.hi_cls.has_value();

    if (reg.angular_singularity && radial_singular && !reg.radial_constant())
        throw MissingDecayClass("region with both radial and angular singular factors");

    if (reg.angular_singularity) {
        // Outer angular integral, inner radial quadrature.
        const double fmax = radial_max(reg, u, v);
        for (const auto& a : asegs) {
            std::optional<Decay> lo;
            if (a.lo_cls) {
                auto k = h.klass(scaled(*a.lo_cls, fmax), EndKind::Finite);
                if (!k)
                    return Value::infinite("integrand grows faster than any power at the angular singularity");
                lo = k;
            }
            auto H = [&](double x) {
                LogReal gx = a.f(x);
                double acc = 0.0;
                for (const auto& s : rsegs) {
                    auto inner = [&](double y) {
                        LogReal fy = s.f(y);
                        fy.sign = fy.sign == 0 ? 0 : 1;
                        return h.fn_log(fy * gx) * LogReal::from_double(weight_at_t(w, s.t_of(y)));
                    };
                    Value vi = integrate_chart(s.chart, inner, std::nullopt, std::nullopt);
                    acc += vi.value();
                }
                return LogReal::from_double(acc);
            };
            total = total + integrate_chart(a.chart, H, lo, std::nullopt);
            if (total.is_infinite())
                return total;
        }
        return total;
    }

    // Outer radial integral, inner angular quadrature.
    const double gmax = angular_max(reg);
    for (const auto& s : rsegs) {
        std::optional<Decay> lo, hi;
        if (s.lo_cls) {
            auto k = h.klass(scaled(*s.lo_cls, gmax), EndKind::Finite);
            if (!k)
                return Value::infinite("integrand grows faster than any power at the inner radius");
            lo = multiply(*k, weight_class_lo(s));
        }
        if (s.hi_cls) {
            auto k = h.klass(scaled(*s.hi_cls, gmax), EndKind::Infinity);
            if (!k)
                return Value::infinite("integrand grows faster than any power at infinity");
            hi = multiply(*k, weight_class_infinity(w));
        }
        auto H = [&](double x) {
            LogReal fx = s.f(x);
            fx.sign = fx.sign == 0 ? 0 : 1;
            if (fx.sign == 0)
                return LogReal{};
            LogReal ref = h.fn_log(fx * LogReal::from_double(gmax));
            if (ref.sign == 0)
                return LogReal{};
            auto ratio = [&](double th) {
                return (h.fn_log(fx * LogReal::from_double(std::fabs(reg.g(th)))) / ref).to_double();
            };
            double q = integrate(ratio, reg.th_lo, reg.th_hi).value;
            return ref * LogReal::from_double(q * weight_at_t(w, s.t_of(x)));
        };
        total = total + integrate_chart(s.chart, H, lo, hi);
        if (total.is_infinite())
            return total;
    }
    return total;
}

std::string num(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_num(const std::string& s)
{
    if (s == "inf" || s == "+inf")
        return kInf;
    if (s == "-inf")
        return -kInf;
    if (s == "pi")
        return kPi;
    if (s == "-pi")
        return -kPi;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "'");
    }
    if (pos != s.size())
        throw ConfigError("bad number '" + s + "'");
    return v;
}

std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Decay parse_decay(std::istringstream& is)
{
    std::string k, a, b, c;
    if (!(is >> k >> a >> b >> c))
        throw ConfigError("decay class needs K a b c");
    return {parse_num(k), parse_num(a), parse_num(b), parse_num(c)};
}

std::string decay_str(const Decay& d) { return num(d.K) + " " + num(d.a) + " " + num(d.b) + " " + num(d.c); }

} // namespace

// ---- Region ----

double Region::t_lo() const { return r_lo > 0.0 ? std::log(r_lo) : -kInf; }
double Region::t_hi() const { return std::isinf(r_hi) ? kInf : std::log(r_hi); }
bool Region::full_circle() const { return th_lo <= -kPi + 1e-15 && th_hi >= kPi - 1e-15; }
bool Region::angular_constant() const { return angular.is_constant(); }
bool Region::radial_constant() const { return radial.is_constant(); }

LogReal Region::f_at_t(double t) const
{
    Formula::Env env;
    env.r = LogReal::exp_of(t);
    env.t = t;
    env.d = t < 700.0 ? std::exp(t) - r_lo : kInf;
    return radial.eval_log(env);
}

LogReal Region::f_at_d(double d) const
{
    Formula::Env env;
    double r = r_lo + d;
    env.r = LogReal::from_double(r);
    env.t = r_lo > 0.0 ? std::log(r_lo) + std::log1p(d / r_lo) : std::log(d);
    env.d = d;
    return radial.eval_log(env);
}

double Region::g(double th) const { return angular.of_th(th); }

// ---- Potential ----

Potential::Potential(std::string name, std::vector<Region> regions)
    : name_(std::move(name)), regions_(std::move(regions))
{
    for (const auto& r : regions_) {
        if (!(r.r_hi > r.r_lo) || r.r_lo < 0.0)
            throw ConfigError("region needs 0 <= r_lo < r_hi");
        if (!(r.th_hi > r.th_lo) || r.th_lo < -kPi - 1e-12 || r.th_hi > kPi + 1e-12)
            throw ConfigError("region needs -pi <= th_lo < th_hi <= pi");
        if (r.angular_singularity &&
            (r.angular_singularity->theta < r.th_lo || r.angular_singularity->theta > r.th_hi))
            throw ConfigError("angular singularity outside the sector");
    }
}

Potential Potential::zero() { return Potential("zero", {}); }

bool Potential::is_radial() const
{
    for (const auto& r : regions_)
        if (!r.full_circle() || !r.angular_constant())
            return false;
    return true;
}

Potential Potential::scaled(double c) const
{
    std::vector<Region> regs = regions_;
    for (auto& r : regs) {
        r.radial = Formula::parse(num(c) + " * (" + r.radial.str() + ")");
        if (r.at_r_lo)
            r.at_r_lo->K *= c;
        if (r.at_infinity)
            r.at_infinity->K *= c;
    }
    return Potential(name_, std::move(regs));
}

double Potential::value(double r, double th) const
{
    double v = 0.0;
    for (const auto& reg : regions_) {
        if (r > reg.r_lo && r < reg.r_hi && th > reg.th_lo && th < reg.th_hi)
            v += reg.f_at_t(std::log(r)).to_double() * reg.g(th);
    }
    return v;
}

void Potential::validate() const
{
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        const Region& a = regions_[i];
        for (std::size_t j = i + 1; j < regions_.size(); ++j) {
            const Region& b = regions_[j];
            bool r_overlap = std::max(a.r_lo, b.r_lo) < std::min(a.r_hi, b.r_hi);
            bool th_overlap = std::max(a.th_lo, b.th_lo) < std::min(a.th_hi, b.th_hi);
            if (r_overlap && th_overlap)
                throw ConfigError("regions " + std::to_string(i) + " and " + std::to_string(j) +
                                  " overlap");
        }
        double u = std::isinf(a.t_lo()) ? a.t_hi() - 30.0 : a.t_lo();
        if (std::isinf(u))
            u = -30.0;
        double v = std::isinf(a.t_hi()) ? u + 60.0 : a.t_hi();
        for (int k = 1; k < 50; ++k) {
            double t = u + (v - u) * k / 50.0;
            double f = a.f_at_t(t).to_double();
            if (std::isnan(f) || f < 0.0)
                throw ConfigError("radial factor negative or undefined at r = " + num(std::exp(t)));
            double th = a.th_lo + (a.th_hi - a.th_lo) * k / 50.0;
            double g = a.g(th);
            if (std::isnan(g) || g < 0.0)
                throw ConfigError("angular factor negative or undefined at th = " + num(th));
        }
        auto check = [](double got, double want, const char* where) {
            if (!(want > 0.0) || !(got > 0.0))
                return;
            double q = got / want;
            if (q < 0.5 || q > 2.0)
                throw ConfigError(std::string("declared class does not match samples ") + where);
        };
        if (a.at_r_lo) {
            for (double d : {1e-9, 1e-13}) {
                double got = a.r_lo > 0.0 ? a.f_at_d(d).to_double() : a.f_at_t(std::log(d)).to_double();
                check(got, decay_shape(*a.at_r_lo, EndKind::Finite, d), "at the inner radius");
            }
        }
        if (a.at_infinity && std::isinf(a.r_hi)) {
            for (double t : {200.0, 600.0}) {
                LogReal got = a.f_at_t(t);
                const Decay& c = *a.at_infinity;
                double lw = std::log(c.K) + c.a * t + (c.b != 0.0 ? c.b * std::log(t) : 0.0) +
                            (c.c != 0.0 ? c.c * std::log(std::log(t)) : 0.0);
                if (got.sign > 0 && std::fabs(got.lg - lw) > std::log(2.0))
                    throw ConfigError("declared class does not match samples at infinity");
            }
        }
        if (a.angular_singularity) {
            const auto& s = *a.angular_singularity;
            for (double d : {1e-9, 1e-13}) {
                for (double th : {s.theta - d, s.theta + d}) {
                    if (th <= a.th_lo || th >= a.th_hi)
                        continue;
                    check(a.g(th), decay_shape(s.cls, EndKind::Finite, d), "at the angular singularity");
                }
            }
        }
    }
}

std::string Potential::to_config() const
{
    std::ostringstream os;
    os << "potential " << name_ << "\n";
    for (const auto& r : regions_) {
        os << "region\n";
        os << "  r " << num(r.r_lo) << " " << num(r.r_hi) << "\n";
        os << "  theta " << num(r.th_lo) << " " << num(r.th_hi) << "\n";
        os << "  radial " << r.radial.str() << "\n";
        os << "  angular " << r.angular.str() << "\n";
        if (r.at_r_lo)
            os << "  class_lo " << decay_str(*r.at_r_lo) << "\n";
        if (r.at_infinity)
            os << "  class_inf " << decay_str(*r.at_infinity) << "\n";
        if (r.angular_singularity)
            os << "  angular_singularity " << num(r.angular_singularity->theta) << " "
               << decay_str(r.angular_singularity->cls) << "\n";
        os << "end\n";
    }
    return os.str();
}

Potential Potential::from_config(const std::string& text)
{
    std::istringstream in(text);
    std::string line, name = "unnamed";
    std::vector<Region> regs;
    std::optional<Region> cur;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest = trim(line.substr(key.size()));
        try {
            if (key == "potential") {
                name = rest;
            } else if (key == "region") {
                if (cur)
                    throw ConfigError("nested region");
                cur = Region{};
            } else if (key == "end") {
                if (!cur)
                    throw ConfigError("'end' outside a region");
                regs.push_back(*cur);
                cur.reset();
            } else {
                if (!cur)
                    throw ConfigError("key '" + key + "' outside a region");
                if (key == "r") {
                    std::string a, b;
                    ls >> a >> b;
                    cur->r_lo = parse_num(a);
                    cur->r_hi = parse_num(b);
                } else if (key == "theta") {
                    std::string a, b;
                    ls >> a >> b;
                    cur->th_lo = parse_num(a);
                    cur->th_hi = parse_num(b);
                } else if (key == "radial") {
                    cur->radial = Formula::parse(rest);
                } else if (key == "angular") {
                    cur->angular = Formula::parse(rest);
                } else if (key == "class_lo") {
                    cur->at_r_lo = parse_decay(ls);
                } else if (key == "class_inf") {
                    cur->at_infinity = parse_decay(ls);
                } else if (key == "angular_singularity") {
                    std::string th;
                    ls >> th;
                    AngularSingularity s;
                    s.theta = parse_num(th);
                    s.cls = parse_decay(ls);
                    cur->angular_singularity = s;
                } else {
                    throw ConfigError("unknown key '" + key + "'");
                }
            }
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (cur)
        throw ConfigError("region not closed with 'end'");
    return Potential(name, std::move(regs));
}

// ---- weights and integrals ----

std::string to_string(Weight w)
{
    switch (w) {
    case Weight::One:
        return "one";
    case Weight::Log1p:
        return "log1p";
    case Weight::Log2p:
        return "log2p";
    case Weight::LogPlusAbs:
        return "logplus";
    case Weight::LogPlusInv:
        return "logplusinv";
    case Weight::LogLog:
        return "loglog";
    case Weight::AbsLog:
        return "abslog";
    }
    return "?";
}

Weight weight_from_string(const std::string& s)
{
    for (Weight w : {Weight::One, Weight::Log1p, Weight::Log2p, Weight::LogPlusAbs, Weight::LogPlusInv,
                     Weight::LogLog, Weight::AbsLog})
        if (to_string(w) == s)
            return w;
    throw ConfigError("unknown weight '" + s + "'");
}

double weight_at_t(Weight w, double t)
{
    switch (w) {
    case Weight::One:
        return 1.0;
    case Weight::Log1p:
        return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    case Weight::Log2p:
        return t > 0.0 ? t + std::log1p(2.0 * std::exp(-t)) : std::log(2.0 + std::exp(t));
    case Weight::LogPlusAbs:
        return std::max(t, 0.0);
    case Weight::LogPlusInv:
        return std::max(-t, 0.0);
    case Weight::LogLog:
        return t > 1.0 ? std::log(t) : 0.0;
    case Weight::AbsLog:
        return std::fabs(t);
    }
    return 0.0;
}

Value integrate_potential(const Potential& V, const PointwiseMap& h, Weight w, double t1, double t2,
                          double extra)
{
    Value total = Value::finite(0.0);
    for (const auto& reg : V.regions()) {
        total = add_values(total, block_integral(reg, h, w, t1, t2, extra));
        if (total.is_infinite())
            return total;
    }
    return total;
}

Value weighted_integral(const Potential& V, Weight w)
{
    return integrate_potential(V, power_map(1.0), w, -kInf, kInf);
}

AnnulusSample::AnnulusSample(const Potential& V, double t1, double t2) : V_(&V), t1_(t1), t2_(t2)
{
    double hi = std::isinf(t2) ? kInf : std::exp(2.0 * t2);
    double lo = std::isinf(t1) ? 0.0 : std::exp(2.0 * t1);
    measure_ = kPi * (hi - lo);
}

Value AnnulusSample::integrate(const PointwiseMap& h) const
{
    return integrate_potential(*V_, h, Weight::One, t1_, t2_);
}

std::vector<Piece> radial_pieces(const Region& reg, double t1, double t2, double jac, double c)
{
    double u = std::max(t1, reg.t_lo()), v = std::min(t2, reg.t_hi());
    std::vector<Segment> segs;
    radial_segments(reg, u, v, jac, segs);
    std::vector<Piece> out;
    for (auto& s : segs) {
        Piece p{s.chart, s.f, s.lo_cls, s.hi_cls};
        if (c != 1.0) {
            auto f = s.f;
            LogReal lc = LogReal::from_double(c);
            p.f = [f, lc](double x) { return f(x) * lc; };
            if (p.lo_class)
                p.lo_class->K *= c;
            if (p.hi_class)
                p.hi_class->K *= c;
        }
        out.push_back(std::move(p));
    }
    return out;
}

RadialSample::RadialSample(const Region& reg, double t1, double t2, double jac, double measure)
    : reg_(reg), t1_(t1), t2_(t2), jac_(jac), measure_(measure)
{
}

Value RadialSample::integrate(const PointwiseMap& h) const
{
    Value total = Value::finite(0.0);
    for (const auto& p : radial_pieces(reg_, t1_, t2_, jac_)) {
        total = total + integrate_piece(p, h);
        if (total.is_infinite())
            break;
    }
    return total;
}

AngularSample::AngularSample(const Region& reg, double subtract) : parts_{{reg, 1.0}}, sub_(subtract) {}

AngularSample::AngularSample(std::vector<std::pair<Region, double>> parts, double subtract)
    : parts_(std::move(parts)), sub_(subtract)
{
}

Value AngularSample::integrate(const PointwiseMap& h) const
{
    Value total = Value::finite(0.0);
    double covered = 0.0;
    for (const auto& [reg, c] : parts_) {
        covered += reg.sector();
        for (auto& s : angular_segments(reg)) {
            auto f = s.f;
            const double sub = sub_, k = c;
            Piece p{s.chart, [f, sub, k](double x) {
                        LogReal v = f(x) * LogReal::from_double(k);
                        return sub == 0.0 ? v : LogReal::from_double(std::fabs(v.to_double() - sub));
                    },
                    s.lo_cls, std::nullopt};
            if (p.lo_class) {
                p.lo_class->K *= c;
                if (sub_ != 0.0 && growth_sign(*p.lo_class, EndKind::Finite) <= 0)
                    p.lo_class.reset();
            }
            total = total + integrate_piece(p, h);
            if (total.is_infinite())
                return total;
        }
    }
    double rest = 2.0 * kPi - covered;
    if (sub_ != 0.0 && rest > 1e-15)
        total = total + Value::finite(rest * h.fn(sub_));
    return total;
}

Value angular_integral(const Region& reg)
{
    if (reg.angular_constant() && !reg.angular_singularity)
        return Value::finite(reg.angular.constant_value() * reg.sector());
    AngularSample s(reg);
    Value v = s.integrate(power_map(1.0));
    return v;
}

// ---- distribution function ----

namespace {

// One factor tabulated on a chart grid: ln of the factor at each node and a cumulative
// measure whose differences give the measure between nodes.
struct LevelTable {
    struct Node {
        double x;
        double lf;
    };
    std::function<double(double)> lnf;
    std::function<double(double)> mu;
    std::vector<Node> nodes;

    void fill(double x0, double x1, int n)
    {
        for (int i = 0; i <= n; ++i) {
            double x = x0 + (x1 - x0) * i / n;
            nodes.push_back({x, lnf(x)});
        }
    }

    double sup_log() const
    {
        double m = -kInf;
        for (const auto& nd : nodes)
            m = std::max(m, nd.lf);
        return m;
    }

    // Measure of {factor > e^lc}.
    double measure(double lc) const
    {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            bool a_in = nodes[i].lf > lc, b_in = nodes[i + 1].lf > lc;
            if (!a_in && !b_in)
                continue;
            double xa = nodes[i].x, xb = nodes[i + 1].x;
            auto cross = [&](double lo, double hi) {
                auto r = boost::math::tools::bisect([&](double x) { return lnf(x) - lc; },
                                                    std::min(lo, hi), std::max(lo, hi),
                                                    boost::math::tools::eps_tolerance<double>(40));
                return 0.5 * (r.first + r.second);
            };
            if (a_in && !b_in)
                xb = cross(xa, xb);
            else if (!a_in && b_in)
                xa = cross(xa, xb);
            m += std::fabs(mu(xb) - mu(xa));
        }
        return m;
    }
};

} // namespace

// Superlevel structure of one region f(r) g(th).
struct DistributionFunction::Level {
    std::shared_ptr<const Region> reg;
    double f_const = -1.0, g_const = -1.0;
    std::vector<LevelTable> ftab, gtab; // measure r dr and dth

    static double total(const std::vector<LevelTable>& tabs, double lc)
    {
        double m = 0.0;
        for (const auto& t : tabs)
            m += t.measure(lc);
        return m;
    }

    double radial_area() const
    {
        double hi = std::isinf(reg->r_hi) ? kInf : 0.5 * reg->r_hi * reg->r_hi;
        return hi - 0.5 * reg->r_lo * reg->r_lo;
    }

    // |{r : f > e^lc}| in r dr.
    double m_f(double lc) const
    {
        if (f_const >= 0.0)
            return f_const > 0.0 && std::log(f_const) > lc ? radial_area() : 0.0;
        return total(ftab, lc);
    }

    // |{th : g > e^lc}|.
    double m_g(double lc) const
    {
        if (g_const >= 0.0)
            return g_const > 0.0 && std::log(g_const) > lc ? reg->sector() : 0.0;
        return total(gtab, lc);
    }

    double measure_above(double s) const
    {
        if (s <= 0.0)
            return kInf;
        const double ls = std::log(s);
        if (g_const >= 0.0)
            return g_const > 0.0 ? reg->sector() * m_f(ls - std::log(g_const)) : 0.0;
        if (f_const >= 0.0)
            return f_const > 0.0 ? radial_area() * m_g(ls - std::log(f_const)) : 0.0;
        if (reg->angular_singularity) {
            // f is bounded here: integrate the angular level measure over r dr in t.
            auto integrand = [&](double t) {
                LogReal f = reg->f_at_t(t);
                if (f.sign <= 0)
                    return 0.0;
                return m_g(ls - f.lg) * std::exp(2.0 * t);
            };
            double a = reg->t_lo(), b = reg->t_hi();
            if (std::isinf(a) || std::isinf(b))
                throw MissingDecayClass("angular singularity on an unbounded radial range");
            return integrate(integrand, a, b, 1e-9).value;
        }
        auto integrand = [&](double th) {
            double g = reg->g(th);
            return g > 0.0 ? m_f(ls - std::log(g)) : 0.0;
        };
        return integrate(integrand, reg->th_lo, reg->th_hi, 1e-9).value;
    }
};

namespace {

Decay level_tail(const Decay& d, double j)
{
    if (std::fabs(d.a) < 1e-12)
        return Decay{1.0, -1e300, 0.0, 0.0}; // faster than any power of s
    double k = (j + 1.0) / std::fabs(d.a);
    return Decay{1.0, (j + 1.0) / d.a, k * d.b, k * d.c};
}

bool slower(const Decay& x, const Decay& y) { return std::tie(x.a, x.b, x.c) > std::tie(y.a, y.b, y.c); }

} // namespace

DistributionFunction::DistributionFunction(const Potential& V)
{
    for (const auto& reg : V.regions()) {
        auto L = std::make_shared<Level>();
        auto R = std::make_shared<const Region>(reg);
        L->reg = R;
        if (reg.radial_constant())
            L->f_const = reg.radial.constant_value();
        if (reg.angular_constant() && !reg.angular_singularity)
            L->g_const = reg.angular.constant_value();
        if (L->f_const < 0.0) {
            double u = reg.t_lo(), v = reg.t_hi();
            if (reg.r_lo > 0.0 && reg.at_r_lo) {
                double D = std::min(reg.r_lo, (std::isinf(reg.r_hi) ? kInf : reg.r_hi) - reg.r_lo);
                LevelTable tab;
                tab.lnf = [R](double x) {
                    LogReal f = R->f_at_d(std::exp(-x));
                    return f.sign > 0 ? f.lg : -kInf;
                };
                tab.mu = [R](double x) {
                    double d = std::exp(-x);
                    return R->r_lo * d + 0.5 * d * d;
                };
                tab.fill(690.0, -std::log(D), 1400);
                L->ftab.push_back(std::move(tab));
                u = std::log(reg.r_lo + D);
            }
            if (v > u) {
                LevelTable tab;
                tab.lnf = [R](double t) {
                    LogReal f = R->f_at_t(t);
                    return f.sign > 0 ? f.lg : -kInf;
                };
                tab.mu = [](double t) { return t > 350.0 ? kInf : 0.5 * std::exp(2.0 * t); };
                tab.fill(std::isinf(u) ? -700.0 : u, std::isinf(v) ? 300.0 : v, 2000);
                L->ftab.push_back(std::move(tab));
            }
        }
        if (L->g_const < 0.0) {
            auto side = [&](double ts, double width, double dir) {
                LevelTable tab;
                tab.lnf = [R, ts, dir](double x) {
                    double g = R->g(ts + dir * std::exp(-x));
                    return g > 0.0 ? std::log(g) : -kInf;
                };
                tab.mu = [](double x) { return std::exp(-x); };
                tab.fill(690.0, -std::log(width), 1400);
                L->gtab.push_back(std::move(tab));
            };
            if (reg.angular_singularity) {
                double ts = reg.angular_singularity->theta;
                if (ts > reg.th_lo)
                    side(ts, ts - reg.th_lo, -1.0);
                if (ts < reg.th_hi)
                    side(ts, reg.th_hi - ts, 1.0);
            } else {
                LevelTable tab;
                tab.lnf = [R](double th) {
                    double g = R->g(th);
                    return g > 0.0 ? std::log(g) : -kInf;
                };
                tab.mu = [](double th) { return th; };
                tab.fill(reg.th_lo, reg.th_hi, 2000);
                L->gtab.push_back(std::move(tab));
            }
        }

        // Blow-up classes drive the large-s behaviour of lambda.
        bool unbounded = false;
        std::optional<Decay> cls;
        if (reg.at_r_lo && L->f_const < 0.0 && growth_sign(*reg.at_r_lo, EndKind::Finite) > 0) {
            unbounded = true;
            cls = level_tail(*reg.at_r_lo, reg.r_lo > 0.0 ? 0.0 : 1.0);
        }
        if (reg.angular_singularity && growth_sign(reg.angular_singularity->cls, EndKind::Finite) > 0) {
            unbounded = true;
            Decay c2 = level_tail(reg.angular_singularity->cls, 0.0);
            if (!cls || slower(c2, *cls))
                cls = c2;
        }
        if (cls && (!tail_ || slower(*cls, *tail_)))
            tail_ = cls;

        support_ += L->radial_area() * reg.sector();
        if (unbounded) {
            sup_ = kInf;
        } else if (std::isfinite(sup_)) {
            double lf = L->f_const >= 0.0 ? std::log(L->f_const) : -kInf;
            for (const auto& t : L->ftab)
                lf = std::max(lf, t.sup_log());
            double lg = L->g_const >= 0.0 ? std::log(L->g_const) : -kInf;
            for (const auto& t : L->gtab)
                lg = std::max(lg, t.sup_log());
            sup_ = std::max(sup_, std::exp(std::min(lf + lg, 700.0)));
        }
        levels_.push_back(L);
    }
}

double DistributionFunction::operator()(double s) const
{
    double m = 0.0;
    for (const auto& L : levels_) {
        m += L->measure_above(s);
        if (std::isinf(m))
            return m;
    }
    return m;
}

RadialProfile rearrange(const Potential& V)
{
    auto lam = std::make_shared<DistributionFunction>(V);
    if (!V.is_zero()) {
        // A level set of infinite measure at some s > 0 means V does not decay.
        for (double s : {1e-6, 1e-3})
            if (std::isinf((*lam)(s)))
                throw UnboundedLevelSet("|{V > s}| is infinite");
    }
    RadialProfile p;
    p.nonincreasing = true;
    p.value = [lam](double r) {
        if (lam->total_support() == 0.0)
            return 0.0;
        double target = kPi * r * r;
        auto above = [&](double ls) { return (*lam)(std::exp(ls)) > target; };
        double lo = -700.0, hi = std::isfinite(lam->sup()) ? std::log(lam->sup()) + 1e-9 : 700.0;
        if (!above(lo))
            return 0.0;
        if (above(hi))
            return std::exp(hi);
        for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++i) {
            double mid = 0.5 * (lo + hi);
            (above(mid) ? lo : hi) = mid;
        }
        return std::exp(0.5 * (lo + hi));
    };
    return p;
}

Value rearranged_log_integral(const Potential& V)
{
    // lambda carries table noise near 1e-10; tighter requests only exhaust the depth.
    constexpr double kTailTol = 1e-8;
    if (V.is_zero())
        return Value::finite(0.0);
    DistributionFunction lam(V);
    auto H = [](double m) {
        if (!(m > 0.0))
            return 0.0;
        if (m >= kPi)
            return kPi / 2.0;
        return 0.5 * m * (1.0 + std::log(kPi / m));
    };
    auto integrand = [&](double s) { return H(lam(s)); };

    // Breakpoints: plateau heights of constant pieces.
    std::vector<double> cuts{0.0};
    for (const auto& reg : V.regions())
        if (reg.radial_constant() && reg.angular_constant())
            cuts.push_back(reg.radial.constant_value() * reg.angular.constant_value());
    double top = std::isfinite(lam.sup()) ? lam.sup() : 0.0;
    for (double c : cuts)
        top = std::max(top, c);
    if (!std::isfinite(lam.sup()))
        top = std::max(top, 1.0);
    cuts.push_back(top);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += integrate(integrand, cuts[i], cuts[i + 1], 1e-9).value;
    if (std::isfinite(lam.sup()))
        return Value::finite(acc);

    auto cls = lam.large_s_class();
    if (!cls)
        throw NumericFailure("unbounded potential without a level-set class");
    if (cls->a < -1e200) {
        // lambda decays faster than any power: the tail beyond a few decades is negligible.
        acc += integrate_tail(integrand, top, TailClass{0.0, -3.0, 0.0, 0.0}, kInf, kTailTol).value;
        return Value::finite(acc);
    }
    // H(lambda) ~ lambda ln(1/lambda) and ln(1/lambda) ~ |p| ln s.
    TailClass tc{0.0, cls->a, cls->b + 1.0, cls->c};
    if (!tail_integrable(tc))
        return Value::infinite("int V_* ln_+(1/|x|) diverges: level sets shrink like " + describe(tc));
    acc += integrate_tail(integrand, top, tc, kInf, kTailTol).value;
    return Value::finite(acc);
}

// ---- log reduction ----

double LogProfile::G(double t) const
{
    for (const auto& p : pieces) {
        if (p.kind == LogPiece::Kind::Formula) {
            if (t > p.lo && t < p.hi)
                return p.G(t);
        } else if (t > 0.0) {
            double s = std::log(t);
            if (s > p.lo && s < p.hi)
                return (1.0 + p.eta) / (4.0 * t * t);
        }
    }
    if (tail_eta && !pieces.empty()) {
        const auto& last = pieces.back();
        double end = last.kind == LogPiece::Kind::Formula ? last.hi : std::exp(last.hi);
        if (t >= end && t > 0.0)
            return (1.0 + *tail_eta) / (4.0 * t * t);
    }
    return 0.0;
}

LogProfile log_reduce(const Potential& V)
{
    LogProfile out;
    std::vector<double> cuts;
    for (const auto& reg : V.regions()) {
        cuts.push_back(reg.t_lo());
        cuts.push_back(reg.t_hi());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    struct Active {
        std::shared_ptr<const Region> reg; // owned: the profile outlives V
        double mean;                       // (1/2pi) int g
    };
    std::vector<double> means;
    for (const auto& reg : V.regions()) {
        Value m = angular_integral(reg);
        if (!m.is_finite())
            throw NonIntegrable("angular factor not integrable: " + m.reason());
        means.push_back(m.value() / (2.0 * kPi));
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        std::vector<Active> act;
        std::optional<Decay> lo_cls, hi_cls;
        for (std::size_t k = 0; k < V.regions().size(); ++k) {
            const Region& reg = V.regions()[k];
            if (reg.t_lo() <= a && reg.t_hi() >= b && means[k] > 0.0) {
                act.push_back({std::make_shared<const Region>(reg), means[k]});
                if (std::isinf(a) && reg.at_r_lo)
                    lo_cls = scaled(*reg.at_r_lo, means[k]);
                if (std::isinf(b) && reg.at_infinity)
                    hi_cls = scaled(*reg.at_infinity, means[k]);
            }
        }
        if (act.empty())
            continue;
        LogPiece p;
        p.kind = LogPiece::Kind::Formula;
        p.lo = a;
        p.hi = b;
        p.at_lo = lo_cls;
        p.at_hi = hi_cls;
        p.G = [act](double t) {
            LogReal e2t = LogReal::exp_of(2.0 * t);
            LogReal acc;
            for (const auto& x : act)
                acc = acc + x.reg->f_at_t(t) * LogReal::from_double(x.mean);
            return (acc * e2t).to_double();
        };
        double ga = std::isinf(a) ? std::max(-700.0, b - 200.0) : a;
        double gb = std::isinf(b) ? std::min(ga + 200.0, 700.0) : b;
        out.sup_G = std::max(out.sup_G, sampled_max(p.G, ga, gb, 4000));
        out.pieces.push_back(std::move(p));
    }
    return out;
}

} // namespace speclab
