#include "speclab/spectral1d.hpp"

#include "speclab/parallel.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/report.hpp"

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace speclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLeftStart = -50.0;
constexpr double kOdeTol = 1e-12;

// Continuous Pruefer angle: the state (u, u') is proportional to
// (-1)^n (sin phi, k cos phi) with th = n pi + phi, 0 <= phi < pi.
struct Phase {
    double th = 0.0;
    double k = 1.0;

    long n() const { return static_cast<long>(std::floor(th / kPi)); }
    double phi() const { return std::clamp(th - n() * kPi, 0.0, std::nextafter(kPi, 0.0)); }
    double x() const { return std::sin(phi()); }
    double y() const { return k * std::cos(phi()); }

    // Oriented state (x >= 0) in branch n.
    void set(long branch, double x, double y, double knew)
    {
        if (x < 0.0 || (x == 0.0 && y < 0.0)) {
            ++branch;
            x = -x;
            y = -y;
        }
        k = knew;
        th = branch * kPi + std::atan2(knew * x, y);
    }
    void remap(double knew) { set(n(), x(), y(), knew); }

    // Zeros crossed so far, counted with the start in (0, pi).
    long zeros_open() const { return static_cast<long>(std::ceil(th / kPi)) - 1; }
    long zeros_closed() const { return n(); }
    // Count with a Neumann condition at the current point.
    long neumann() const
    {
        if (th <= 0.5 * kPi)
            return 0;
        return static_cast<long>(std::floor((th - 0.5 * kPi) / kPi)) + 1;
    }
};

// u'' = -Q u with Q constant over length dx, solved exactly.
void advance_const(Phase& p, double Q, double dx)
{
    if (dx <= 0.0)
        return;
    if (Q > 0.0) {
        double mu = std::sqrt(Q);
        p.remap(mu);
        p.th += mu * dx;
        return;
    }
    long n = p.n();
    double x = p.x(), y = p.y();
    if (Q == 0.0) {
        double xn = x + y * dx;
        p.set(n, xn, y, p.k);
        return;
    }
    double nu = std::sqrt(-Q);
    double A = x + y / nu, B = x - y / nu;
    double E = std::exp(-2.0 * nu * dx);
    p.set(n, A + E * B, nu * (A - E * B), nu);
}

// Linear change of chart: (x, y) -> (c x, d x + e y), c > 0.
void change_chart(Phase& p, double c, double d, double e)
{
    long n = p.n();
    double x = p.x(), y = p.y();
    p.set(n, c * x, d * x + e * y, 1.0);
}

// Numerical Pruefer integration of u'' = -Q(x) u on [x0, x1].
// th' = k cos^2 th + (Q/k) sin^2 th, k refreshed on subintervals.
void advance_numeric(Phase& p, const std::function<double(double)>& Q, double x0, double x1)
{
    if (!(x1 > x0))
        return;
    namespace ode = boost::numeric::odeint;
    std::vector<double> cuts;
    if (x0 > 0.0 && x1 / x0 > 4.0) {
        int n = static_cast<int>(std::ceil(4.0 * std::log2(x1 / x0)));
        double ratio = std::pow(x1 / x0, 1.0 / n);
        for (int i = 0; i <= n; ++i)
            cuts.push_back(i == n ? x1 : x0 * std::pow(ratio, i));
    } else {
        int n = 32;
        for (int i = 0; i <= n; ++i)
            cuts.push_back(i == n ? x1 : x0 + (x1 - x0) * i / n);
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double c0 = cuts[i], c1 = cuts[i + 1], h = c1 - c0;
        if (!(h > 0.0))
            continue;
        double M = 0.0;
        for (int j = 0; j <= 8; ++j)
            M = std::max(M, std::fabs(Q(c0 + h * (j + 0.5) / 9.5)));
        double k = std::sqrt(std::max(M, 1.0 / (h * h)));
        p.remap(k);
        double th = p.th;
        auto rhs = [&](const double& s, double& ds, double x) {
            double sn = std::sin(s), cs = std::cos(s);
            ds = k * cs * cs + Q(x) / k * sn * sn;
        };
        auto stepper = ode::make_controlled(kOdeTol, kOdeTol, ode::runge_kutta_dopri5<double>());
        ode::integrate_adaptive(stepper, rhs, th, c0, c1, h / 64.0);
        p.th = th;
    }
}

// Keeps the argument strictly inside (lo, hi), where singular ends are integrable.
std::function<double(double)> interior(std::function<double(double)> f, double lo, double hi)
{
    double dl = std::isinf(lo) ? 0.0 : 1e-13 * std::max(1.0, std::fabs(lo));
    double dh = std::isinf(hi) ? 0.0 : 1e-13 * std::max(1.0, std::fabs(hi));
    return [f = std::move(f), lo = lo + dl, hi = hi - dh](double x) {
        return f(std::clamp(x, lo, std::max(lo, hi)));
    };
}

EigencountResult finite_result(long lo, long hi, std::string method)
{
    EigencountResult r;
    r.lower = lo;
    r.upper = hi;
    r.method = std::move(method);
    r.count = lo == hi ? Value::finite(static_cast<double>(lo))
                       : Value::unknown("bracket gap [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]",
                                        static_cast<double>(lo));
    return r;
}

EigencountResult infinite_result(std::string why, long lower)
{
    EigencountResult r;
    r.lower = lower;
    r.upper = std::numeric_limits<long>::max();
    r.method = "pruefer";
    r.count = Value::infinite(why);
    r.justification = std::move(why);
    return r;
}

// Limit of alpha t^2 G(t) as t -> inf for G(t) = e^{2t} V(e^t), V of class d at infinity.
double hardy_limit(const Decay& d, double alpha)
{
    double rate = d.a + 2.0;
    if (rate < 0.0)
        return 0.0;
    if (rate > 0.0)
        return kInf;
    if (d.b + 2.0 < 0.0)
        return 0.0;
    if (d.b + 2.0 > 0.0)
        return kInf;
    if (d.c < 0.0)
        return 0.0;
    if (d.c > 0.0)
        return kInf;
    return alpha * d.K;
}

// m = 0 on the line. The walker keeps its position either in t or in s = ln t.
class ZeroModeWalker {
public:
    ZeroModeWalker(const LogProfile& P, Coupling al) : P_(P), al_(al) {}

    EigencountResult run(std::optional<double> s_cut)
    {
        if (P_.pieces.empty()) {
            if (P_.tail_eta)
                throw InvalidParameters("Euler tail without a piece to start from");
            return finite_result(0, 0, "pruefer");
        }
        start();
        for (std::size_t i = 0; i < P_.pieces.size(); ++i) {
            const auto& pc = P_.pieces[i];
            bool last = i + 1 == P_.pieces.size();
            if (pc.kind == LogPiece::Kind::Formula) {
                to_t();
                double lo = std::max(pc.lo, pos_);
                advance_const(ph_, 0.0, lo - pos_);
                pos_ = lo;
                double hi = pc.hi;
                bool cut_here = s_cut && std::log(std::max(hi, 1e-300)) >= *s_cut && hi > 0.0;
                if (cut_here)
                    hi = std::exp(*s_cut);
                if (std::isinf(hi)) {
                    if (!last)
                        throw InvalidParameters("unbounded piece followed by another piece");
                    return formula_tail(pc);
                }
                double alpha = al_.alpha;
                auto G = interior(pc.G, pc.lo, pc.hi);
                advance_numeric(ph_, [&](double t) { return alpha * G(t); }, pos_, hi);
                pos_ = hi;
                if (cut_here)
                    return truncated(*s_cut);
            } else {
                to_s(pc.lo);
                advance_const(ph_, -0.25, pc.lo - pos_);
                pos_ = std::max(pos_, pc.lo);
                double hi = pc.hi;
                bool cut_here = s_cut && *s_cut <= hi;
                if (cut_here)
                    hi = *s_cut;
                advance_const(ph_, al_.excess(pc.eta) / 4.0, hi - pos_);
                pos_ = std::max(pos_, hi);
                if (cut_here)
                    return truncated(*s_cut);
            }
        }
        if (s_cut) {
            if (P_.tail_eta) {
                to_s(*s_cut);
                advance_const(ph_, al_.excess(*P_.tail_eta) / 4.0, *s_cut - pos_);
            } else if (in_s_) {
                advance_const(ph_, -0.25, *s_cut - pos_);
            } else {
                advance_const(ph_, 0.0, std::exp(*s_cut) - pos_);
            }
            return truncated(*s_cut);
        }
        // Exact tails: at most one further zero unless oscillatory.
        double Q;
        if (P_.tail_eta) {
            to_s(pos_);
            Q = al_.excess(*P_.tail_eta) / 4.0;
            if (Q > 0.0)
                return infinite_result("tail alpha t^2 G > 1/4 is oscillatory", ph_.zeros_closed());
        } else {
            Q = in_s_ ? -0.25 : 0.0;
        }
        double x = ph_.x(), y = ph_.y();
        bool extra = Q == 0.0 ? y < 0.0 : x + y / std::sqrt(-Q) < 0.0;
        long N = ph_.zeros_closed() + (extra ? 1 : 0);
        auto r = finite_result(N, N, "pruefer");
        r.justification = "exact tail past the last piece";
        return r;
    }

private:
    void start()
    {
        const auto& first = P_.pieces.front();
        if (first.kind == LogPiece::Kind::Formula) {
            in_s_ = false;
            pos_ = std::isinf(first.lo) ? std::min(kLeftStart, first.hi - 50.0) : first.lo;
            ph_.k = 1.0;
            ph_.th = 0.5 * kPi;
        } else {
            in_s_ = true;
            pos_ = first.lo;
            // u = 1, u' = 0 gives (w, w_s) ~ (1, -1/2).
            ph_.set(0, 1.0, -0.5, 1.0);
        }
    }

    void to_t()
    {
        if (!in_s_)
            return;
        if (pos_ > 700.0)
            throw InvalidDomain("formula piece beyond double range of t");
        double t = std::exp(pos_);
        change_chart(ph_, t, 0.5, 1.0);
        pos_ = t;
        in_s_ = false;
    }

    // Moves to the s chart at s1 (>= current position), crossing a G = 0 gap in t if needed.
    void to_s(double s1)
    {
        if (in_s_)
            return;
        double t1 = std::max(pos_, std::exp(s1));
        if (!(t1 > 0.0))
            throw InvalidDomain("s chart needs t > 0");
        advance_const(ph_, 0.0, t1 - pos_);
        change_chart(ph_, 1.0, -0.5, t1);
        pos_ = std::log(t1);
        in_s_ = true;
    }

    EigencountResult truncated(double s_cut)
    {
        auto r = finite_result(ph_.zeros_open(), ph_.neumann(), "pruefer");
        r.cutoffs.push_back(s_cut);
        r.justification = "Dirichlet and Neumann counts at the cutoff s = ln t";
        r.count = Value::finite(static_cast<double>(r.lower));
        return r;
    }

    // Last piece unbounded in t: integrate to a Hardy-subcritical point T, then decide the
    // final zero from the remaining mass of G.
    EigencountResult formula_tail(const LogPiece& pc)
    {
        if (!pc.at_hi)
            throw MissingDecayClass("unbounded piece without a decay class at infinity");
        const Decay& d = *pc.at_hi;
        double alpha = al_.alpha;
        double L = hardy_limit(d, alpha);
        if (L > 0.25)
            return infinite_result("alpha t^2 G tends to a limit above 1/4", ph_.zeros_closed());
        auto G = interior(pc.G, pc.lo, kInf);
        auto Qf = [&](double t) { return alpha * G(t); };
        double T = std::max({pos_, 1.0, pc.lo + 1.0});
        TailClass c0{d.a + 2.0, d.b, d.c, 0.0};
        TailClass c1{d.a + 2.0, d.b + 1.0, d.c, 0.0};
        long lower = 0, upper = 0;
        bool reached = false;
        for (int round = 0; round < 40; ++round) {
            bool sub = true;
            for (int j = 0; j <= 24 && sub; ++j) {
                double t = T * std::pow(1000.0, j / 24.0);
                sub = alpha * t * t * G(t) <= 0.25;
            }
            if (sub) {
                advance_numeric(ph_, Qf, pos_, T);
                pos_ = T;
                long z = ph_.zeros_closed();
                double x = ph_.x(), y = ph_.y();
                if (y < 0.0)
                    return exact(z + 1, T);
                // Euler comparison: alpha t^2 G <= q < 1/4 past T and T u'/u > mu_-(q) leave no zero.
                double q = alpha * d.K * (d.a + 2.0 == 0.0 && d.b == -2.0 && d.c == 0.0 ? 1.0 : 0.0);
                for (int j = 0; j <= 48; ++j) {
                    double t = T * std::pow(1000.0, j / 48.0);
                    q = std::max(q, alpha * t * t * G(t) * (1.0 + 1e-9));
                }
                if (q < 0.25 && x > 0.0 && T * y / x > 0.5 - 0.5 * std::sqrt(1.0 - 4.0 * q))
                    return exact(z, T);
                if (tail_integrable(c0) && tail_integrable(c1)) {
                    double Tc = T;
                    double I0 = integrate_tail(G, Tc, c0, 1e8).value;
                    double I1 = integrate_tail([&](double t) { return G(t) * (t - Tc); }, Tc, c1, 1e8)
                                    .value;
                    if (y > alpha * (x * I0 + y * I1))
                        return exact(z, T);
                }
                lower = z;
                upper = z + 1;
                reached = true;
                if (T > 1e7)
                    break;
            }
            T *= 2.0;
        }
        if (!reached) {
            auto r = finite_result(ph_.zeros_closed(), std::numeric_limits<long>::max(), "pruefer");
            r.count = Value::unknown("alpha t^2 G does not settle below 1/4 in range", double(r.lower));
            r.justification = "tail never Hardy-subcritical within the scanned range";
            return r;
        }
        auto r = finite_result(lower, upper, "pruefer");
        r.cutoffs.push_back(std::log(pos_));
        r.justification = "Hardy-subcritical tail; final zero undecided";
        return r;
    }

    EigencountResult exact(long N, double T)
    {
        auto r = finite_result(N, N, "pruefer");
        r.cutoffs.push_back(std::log(T));
        r.justification = "tail past t = " + std::to_string(T) + " is Hardy-subcritical";
        return r;
    }

    const LogProfile& P_;
    Coupling al_;
    Phase ph_;
    bool in_s_ = false;
    double pos_ = 0.0;
};

// t at which alpha G drops below m^2 for good, or -inf when it never reaches m^2.
double last_binding_point(const LogProfile& P, double thr)
{
    double tstar = -kInf;
    for (const auto& pc : P.pieces) {
        if (pc.kind == LogPiece::Kind::Euler) {
            double tb = 0.5 * std::sqrt(std::max(0.0, 1.0 + pc.eta) / thr);
            if (std::log(tb) > pc.lo)
                tstar = std::max(tstar, std::min(tb, std::exp(pc.hi)));
        } else {
            double lo = std::isinf(pc.lo) ? std::min(kLeftStart, pc.hi - 50.0) : pc.lo;
            double hi = std::isinf(pc.hi) ? lo + 200.0 : pc.hi;
            auto G = interior(pc.G, pc.lo, pc.hi);
            const int n = 4000;
            for (int j = n; j >= 0; --j) {
                double t = lo + (hi - lo) * j / n;
                if (G(t) >= thr) {
                    tstar = std::max(tstar, std::min(hi, lo + (hi - lo) * (j + 1) / n));
                    break;
                }
            }
        }
    }
    if (P.tail_eta) {
        const auto& last = P.pieces.back();
        double end = last.kind == LogPiece::Kind::Formula ? last.hi : std::exp(last.hi);
        double tb = 0.5 * std::sqrt(std::max(0.0, 1.0 + *P.tail_eta) / thr);
        if (tb > end)
            tstar = std::max(tstar, tb);
    }
    return tstar;
}

EigencountResult nonzero_mode(const LogProfile& P, Coupling al, int m)
{
    double alpha = al.alpha;
    double m2 = static_cast<double>(m) * m;
    if (alpha <= 0.0 || P.pieces.empty() || alpha * P.sup_G < m2)
        return finite_result(0, 0, "pruefer");
    double tstar = last_binding_point(P, m2 / alpha);
    const auto& first = P.pieces.front();
    double t0 = first.kind == LogPiece::Kind::Euler
                    ? std::exp(first.lo)
                    : (std::isinf(first.lo) ? std::min(kLeftStart, first.hi - 50.0) : first.lo);
    if (!(tstar > t0))
        return finite_result(0, 0, "pruefer");

    std::vector<double> cuts{t0};
    for (const auto& pc : P.pieces) {
        double lo = pc.kind == LogPiece::Kind::Euler ? std::exp(pc.lo) : pc.lo;
        double hi = pc.kind == LogPiece::Kind::Euler ? std::exp(pc.hi) : pc.hi;
        for (double c : {lo, hi})
            if (c > t0 && c < tstar)
                cuts.push_back(c);
    }
    cuts.push_back(tstar);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Phase ph;
    ph.set(0, 1.0, m, m);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto G = interior([&P](double t) { return P.G(t); }, cuts[i], cuts[i + 1]);
        advance_numeric(ph, [&](double t) { return alpha * G(t) - m2; }, cuts[i], cuts[i + 1]);
    }
    // Past tstar the coefficient m^2 - alpha G is positive: once u u' >= 0 no zero follows.
    double pos = tstar, step = 1.0 / m;
    for (int j = 0; j < 400 && ph.phi() > 0.5 * kPi; ++j) {
        double p0 = pos;
        advance_numeric(ph, [&](double t) { return alpha * P.G(t) - m2; }, p0, p0 + step);
        pos += step;
    }
    long z = ph.zeros_closed();
    auto r = ph.phi() > 0.5 * kPi ? finite_result(z, z + 1, "pruefer") : finite_result(z, z, "pruefer");
    r.cutoffs.push_back(pos);
    return r;
}

} // namespace

nlohmann::json to_json(const EigencountResult& r)
{
    nlohmann::json j;
    if (r.count.is_finite())
        j["count"] = static_cast<long>(r.count.value());
    else
        put_value(j, "count", r.count);
    j["lower"] = r.lower;
    if (r.count.is_infinite())
        j["upper"] = "inf";
    else
        j["upper"] = r.upper;
    j["method"] = r.method;
    j["cutoffs"] = r.cutoffs;
    j["m_max"] = r.m_max;
    auto modes = nlohmann::json::array();
    for (const auto& m : r.modes) {
        nlohmann::json e{{"m", m.m}, {"lower", m.lower}};
        if (m.infinite)
            e["upper"] = "inf";
        else
            e["upper"] = m.upper;
        modes.push_back(e);
    }
    j["modes"] = modes;
    j["justification"] = r.justification;
    return j;
}

long dirichlet_count(double a, double b, double beta)
{
    if (!(a > 0.0 && b > a))
        throw InvalidDomain("dirichlet_count needs 0 < a < b");
    if (beta <= 0.25)
        return 0;
    // N = #{n >= 1 : 1/4 + (n pi / L)^2 < beta}; thresholds are inclusive on the lower side.
    double x = std::log(b / a) * std::sqrt(beta - 0.25) / kPi;
    double xr = std::round(x);
    if (std::fabs(x - xr) <= 1e-12 * std::max(1.0, x))
        return std::max(0L, static_cast<long>(xr) - 1);
    return static_cast<long>(std::ceil(x)) - 1;
}

EigencountResult pruefer_count(const SturmProblem& p, double alpha)
{
    if (!(p.b > p.a) || std::isinf(p.a) || std::isinf(p.b))
        throw InvalidDomain("pruefer_count needs a finite interval a < b");
    Phase ph;
    ph.th = p.left == SturmProblem::BC::Dirichlet ? 0.0 : 0.5 * kPi;
    auto W = interior(p.W, p.a, p.b);
    advance_numeric(ph, [&](double t) { return alpha * W(t); }, p.a, p.b);
    long N = p.right == SturmProblem::BC::Dirichlet ? ph.zeros_open() : ph.neumann();
    N = std::max(0L, N);
    auto r = finite_result(N, N, "pruefer");
    r.justification = "zeros of the zero-energy solution";
    return r;
}

EigencountResult mode_count(const LogProfile& G, Coupling alpha, int m, std::optional<double> s_cut)
{
    if (m < 0)
        m = -m;
    if (m == 0)
        return ZeroModeWalker(G, alpha).run(s_cut);
    return nonzero_mode(G, alpha, m);
}

EigencountResult radial_eigencount(const LogProfile& G, Coupling alpha)
{
    constexpr int kModeCap = 2000;
    double a = alpha.alpha;
    int m_max = 0;
    if (a > 0.0 && G.sup_G > 0.0) {
        double bound = a * G.sup_G;
        if (!std::isfinite(bound) || bound >= double(kModeCap) * kModeCap)
            m_max = kModeCap;
        else
            while (double(m_max + 1) * (m_max + 1) < bound)
                ++m_max;
    }
    std::vector<EigencountResult> per(m_max + 1);
    parallel_for(per.size(), [&](std::size_t m) { per[m] = mode_count(G, alpha, int(m)); });

    EigencountResult r;
    r.method = "mode_sum";
    r.m_max = m_max;
    bool infinite = false, gap = false;
    for (int m = 0; m <= m_max; ++m) {
        const auto& x = per[m];
        long w = m == 0 ? 1 : 2;
        bool inf = x.count.is_infinite();
        infinite = infinite || inf;
        gap = gap || x.lower != x.upper;
        r.modes.push_back({m, x.lower, x.upper, inf});
        r.lower += w * x.lower;
        if (!inf)
            r.upper += w * x.upper;
        r.cutoffs.insert(r.cutoffs.end(), x.cutoffs.begin(), x.cutoffs.end());
    }
    r.justification = "modes with m^2 >= alpha sup G are nonnegative";
    if (infinite) {
        r.upper = std::numeric_limits<long>::max();
        r.count = Value::infinite("a mode has an oscillatory tail");
    } else if (m_max == kModeCap && a * G.sup_G >= double(kModeCap) * kModeCap) {
        r.count = Value::unknown("mode cutoff exceeds " + std::to_string(kModeCap), double(r.lower));
    } else if (gap) {
        r.count = Value::unknown("bracket gap", double(r.lower));
    } else {
        r.count = Value::finite(double(r.lower));
    }
    return r;
}

EigencountResult radial_eigencount(const Potential& V, double alpha)
{
    if (!V.is_radial())
        throw InvalidParameters("radial_eigencount needs a radial potential");
    if (V.is_zero())
        return finite_result(0, 0, "mode_sum");
    return radial_eigencount(log_reduce(V), Coupling::of(alpha));
}

long interval_zero_count(const LogProfile& G, Coupling alpha, double s_a, double s_b)
{
    // Dirichlet start at s_a in the s chart, then the same piecewise walk restricted to (s_a, s_b).
    Phase ph;
    ph.th = 0.0;
    double pos = s_a;
    auto Q_at = [&](double s) -> std::optional<double> {
        for (const auto& pc : G.pieces)
            if (pc.kind == LogPiece::Kind::Euler && s >= pc.lo && s < pc.hi)
                return alpha.excess(pc.eta) / 4.0;
        return std::nullopt;
    };
    std::vector<double> cuts{s_a, s_b};
    for (const auto& pc : G.pieces) {
        if (pc.kind != LogPiece::Kind::Euler)
            throw InvalidParameters("interval_zero_count works on Euler pieces");
        for (double c : {pc.lo, pc.hi})
            if (c > s_a && c < s_b)
                cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        auto q = Q_at(mid);
        double Q;
        if (q)
            Q = *q;
        else if (G.tail_eta && mid >= G.pieces.back().hi)
            Q = alpha.excess(*G.tail_eta) / 4.0;
        else
            Q = -0.25;
        advance_const(ph, Q, cuts[i + 1] - pos);
        pos = cuts[i + 1];
    }
    return std::max(0L, ph.zeros_open());
}

// ---- sharp one-dimensional Sobolev constants ----

namespace {

struct Gammas {
    double q, g1, g2;
};

Gammas gammas(double kappa)
{
    double q = std::sqrt(1.0 + 4.0 * kappa);
    return {q, 0.5 * (q - 1.0), -0.5 * (q + 1.0)};
}

double gk_integral(const std::function<double(double)>& f, double a, double b)
{
    return integrate(f, a, b, 1e-13).value;
}

} // namespace

double SharpSobolev::C() const
{
    auto g = gammas(kappa);
    double ra = std::exp(g.q * std::log(a / b));
    return (1.0 + g.q * (1.0 + ra) / (1.0 - ra)) / (2.0 * kappa);
}

double SharpSobolev::C_at(double x) const
{
    auto g = gammas(kappa);
    double ra = std::exp(g.q * std::log(a / b));
    double rx = std::exp(g.q * std::log(x / b));
    double ax = std::exp(g.q * std::log(a / x));
    double num = g.g1 * g.g1 * rx + kappa * (1.0 + ra) + g.g2 * g.g2 * ax;
    return num / (kappa * g.q * (1.0 - ra));
}

// Normalised by b^q x^{g1+1}.
double SharpSobolev::extremizer(double x, double t) const
{
    auto g = gammas(kappa);
    double e1 = std::exp((g.g1 + 1.0) * std::log(t / x));
    if (t < x) {
        double A = g.g2 - g.g1 * std::exp(g.q * std::log(x / b));
        double B = g.g1 * e1 - g.g2 * std::exp(g.q * std::log(a / x) + (g.g2 + 1.0) * std::log(t / x));
        return A * B;
    }
    double A = g.g2 * std::exp(g.q * std::log(a / b)) - g.g1 * std::exp(g.q * std::log(x / b));
    double B = e1 * (g.g1 - g.g2 * std::exp(g.q * std::log(b / t)));
    return A * B;
}

double SharpSobolev::extremizer_derivative(double x, double t) const
{
    auto g = gammas(kappa);
    double lt = std::log(t / x);
    if (t < x) {
        double A = g.g2 - g.g1 * std::exp(g.q * std::log(x / b));
        double B = g.g1 * (g.g1 + 1.0) * std::exp(g.g1 * lt) -
                   g.g2 * (g.g2 + 1.0) * std::exp(g.q * std::log(a / x) + g.g2 * lt);
        return A * B / x;
    }
    double A = g.g2 * std::exp(g.q * std::log(a / b)) - g.g1 * std::exp(g.q * std::log(x / b));
    double B = g.g1 * (g.g1 + 1.0) * std::exp(g.g1 * lt) -
               g.g2 * (g.g2 + 1.0) * std::exp(g.q * std::log(b / x) + g.g2 * lt);
    return A * B / x;
}

double SharpSobolev::rayleigh(double x) const
{
    auto form = [&](double lo, double hi) {
        if (!(hi > lo))
            return 0.0;
        return gk_integral(
            [&](double t) {
                double u = extremizer(x, t), du = extremizer_derivative(x, t);
                return du * du + kappa * u * u / (t * t);
            },
            lo, hi);
    };
    double ux = extremizer(x, x);
    return ux * ux / x / (form(a, x) + form(x, b));
}

double SharpSobolev0::C0() const
{
    double r = std::sqrt(kappa);
    return 1.0 / (std::tanh(r) * r);
}

double SharpSobolev0::C0_at(double x) const
{
    double r = std::sqrt(kappa), L = b - a;
    double sh = std::sinh(r);
    return (std::sinh(2.0 * r) + std::sinh(2.0 * r * (x - a) / L) + std::sinh(2.0 * r * (b - x) / L)) /
           (4.0 * r * sh * sh);
}

double SharpSobolev0::extremizer(double x, double t) const
{
    double r = std::sqrt(kappa), L = b - a;
    if (t < x)
        return std::cosh(r * (b - x) / L) * std::cosh(r * (t - a) / L);
    return std::cosh(r * (x - a) / L) * std::cosh(r * (b - t) / L);
}

double SharpSobolev0::extremizer_derivative(double x, double t) const
{
    double r = std::sqrt(kappa), L = b - a;
    if (t < x)
        return std::cosh(r * (b - x) / L) * std::sinh(r * (t - a) / L) * r / L;
    return -std::cosh(r * (x - a) / L) * std::sinh(r * (b - t) / L) * r / L;
}

double SharpSobolev0::rayleigh(double x) const
{
    double L = b - a;
    auto form = [&](double lo, double hi) {
        if (!(hi > lo))
            return 0.0;
        return gk_integral(
            [&](double t) {
                double u = extremizer(x, t), du = extremizer_derivative(x, t);
                return L * du * du + kappa / L * u * u;
            },
            lo, hi);
    };
    double ux = extremizer(x, x);
    return ux * ux / (form(a, x) + form(x, b));
}

namespace {

// Diagonal of the inverse of a symmetric tridiagonal matrix.
Eigen::VectorXd inverse_diagonal(const Eigen::VectorXd& d, const Eigen::VectorXd& e)
{
    const Eigen::Index n = d.size();
    Eigen::VectorXd fw(n), bw(n), out(n);
    fw(0) = d(0);
    for (Eigen::Index i = 1; i < n; ++i)
        fw(i) = d(i) - e(i - 1) * e(i - 1) / fw(i - 1);
    bw(n - 1) = d(n - 1);
    for (Eigen::Index i = n - 2; i >= 0; --i)
        bw(i) = d(i) - e(i) * e(i) / bw(i + 1);
    for (Eigen::Index i = 0; i < n; ++i)
        out(i) = 1.0 / (fw(i) + bw(i) - d(i));
    return out;
}

// Linear elements on a uniform grid; stiffness scaled by ks, mass m(t) integrated exactly by `mass`.
template <class Mass>
void assemble(int n, double a, double b, double ks, Mass mass, Eigen::VectorXd& d, Eigen::VectorXd& e)
{
    d = Eigen::VectorXd::Zero(n);
    e = Eigen::VectorXd::Zero(n - 1);
    double h = (b - a) / (n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        double t0 = a + h * i, t1 = i + 2 == n ? b : a + h * (i + 1);
        auto [m00, m01, m11] = mass(t0, t1);
        double k = ks / (t1 - t0);
        d(i) += k + m00;
        d(i + 1) += k + m11;
        e(i) += -k + m01;
    }
}

} // namespace

GridMax grid_rayleigh_max(const SharpSobolev& s, int n)
{
    Eigen::VectorXd d, e;
    double kappa = s.kappa;
    assemble(n, s.a, s.b, 1.0,
             [kappa](double t0, double t1) {
                 double h = t1 - t0, l = std::log1p(h / t0), h2 = h * h;
                 double m00 = (t1 * t1 * (1.0 / t0 - 1.0 / t1) - 2.0 * t1 * l + h) / h2;
                 double m11 = (h - 2.0 * t0 * l + t0 * t0 * (1.0 / t0 - 1.0 / t1)) / h2;
                 double m01 = ((t0 + t1) * l - 2.0 * h) / h2;
                 return std::tuple{kappa * m00, kappa * m01, kappa * m11};
             },
             d, e);
    Eigen::VectorXd inv = inverse_diagonal(d, e);
    double h = (s.b - s.a) / (n - 1);
    GridMax best{-kInf, s.a};
    for (int i = 0; i < n; ++i) {
        double x = i + 1 == n ? s.b : s.a + h * i;
        double v = inv(i) / x;
        if (v > best.value)
            best = {v, x};
    }
    return best;
}

GridMax grid_rayleigh_max(const SharpSobolev0& s, int n)
{
    Eigen::VectorXd d, e;
    double L = s.b - s.a, c = s.kappa / L;
    assemble(n, s.a, s.b, L,
             [c](double t0, double t1) {
                 double h = t1 - t0;
                 return std::tuple{c * h / 3.0, c * h / 6.0, c * h / 3.0};
             },
             d, e);
    Eigen::VectorXd inv = inverse_diagonal(d, e);
    double h = L / (n - 1);
    GridMax best{-kInf, s.a};
    for (int i = 0; i < n; ++i) {
        double v = inv(i);
        if (v > best.value)
            best = {v, i + 1 == n ? s.b : s.a + h * i};
    }
    return best;
}

} // namespace speclab
