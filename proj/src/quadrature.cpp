#include "speclab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace speclab {

namespace {

constexpr double kEq = 1e-12;

std::atomic<double> g_tol{kQuadTol};

bool lt(double a, double b) { return a < b - kEq; }
bool eq(double a, double b) { return std::fabs(a - b) <= kEq; }

// Exponentially decaying integrand on [y0, inf), decay rate `rate` < 0.
QuadResult exp_tail(const Fn& g, double y0, double rate, double y_limit, double tol)
{
    double L = 1.0 / std::fabs(rate);
    QuadResult out;
    if (std::isinf(y_limit) || y0 + 60.0 * L < y_limit) {
        auto h = [&](double v) {
            double u = L * v / (1.0 - v);
            double y = y0 + u;
            if (y > y_limit)
                return 0.0;
            double w = L / ((1.0 - v) * (1.0 - v));
            double gv = g(y);
            return std::isfinite(gv) ? gv * w : 0.0;
        };
        double err = 0.0;
        out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(h, 0.0, 1.0, 18, tol,
                                                                                 &err);
        out.error = err;
        return out;
    }
    // Coordinate runs out before the integrand is negligible.
    if (y_limit > y0) {
        double err = 0.0;
        out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, y0, y_limit, 18, tol,
                                                                                 &err);
        out.error = err;
    }
    double edge = g(std::max(y0, y_limit));
    if (std::isfinite(edge)) {
        out.value += edge * L;
        out.error += 0.1 * std::fabs(edge * L);
    }
    out.tail_estimated = true;
    return out;
}

} // namespace

double quad_tolerance() { return g_tol.load(); }

void set_quad_tolerance(double tol)
{
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("quadrature tolerance must lie in (0, 1)");
    g_tol.store(tol);
}

bool tail_integrable(const TailClass& c)
{
    if (lt(c.rate, 0.0))
        return true;
    if (!eq(c.rate, 0.0))
        return false;
    if (lt(c.p, -1.0))
        return true;
    if (!eq(c.p, -1.0))
        return false;
    if (lt(c.q, -1.0))
        return true;
    if (!eq(c.q, -1.0))
        return false;
    return lt(c.r, -1.0);
}

std::string describe(const TailClass& c)
{
    std::ostringstream os;
    os << "e^(" << c.rate << " x) x^" << c.p << " (ln x)^" << c.q << " (ln ln x)^" << c.r;
    return os.str();
}

QuadResult integrate(const Fn& f, double a, double b, double tol)
{
    if (!(tol > 0.0))
        tol = quad_tolerance();
    QuadResult out;
    if (!(b > a))
        return out;
    double err = 0.0;
    out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 18, tol, &err);
    out.error = err;
    return out;
}

QuadResult integrate_tail(const Fn& g, double y0, const TailClass& cls, double y_limit, double tol)
{
    if (!(tol > 0.0))
        tol = quad_tolerance();
    if (lt(cls.rate, 0.0))
        return exp_tail(g, y0, cls.rate, y_limit, tol);
    // Algebraic decay: substitute y = e^z, which turns y^p into e^{(p+1) z}.
    QuadResult head;
    double start = y0;
    if (start < std::exp(1.0)) {
        head = integrate(g, y0, std::exp(1.0), tol);
        start = std::exp(1.0);
    }
    Fn g2 = [&g](double z) {
        double y = std::exp(z);
        double v = g(y);
        return std::isfinite(v) ? v * y : 0.0;
    };
    TailClass next{cls.p + 1.0, cls.q, cls.r, 0.0};
    double zlim = std::isinf(y_limit) ? std::log(std::numeric_limits<double>::max()) * 0.999
                                      : std::log(y_limit);
    QuadResult t = integrate_tail(g2, std::log(start), next, zlim, tol);
    t.value += head.value;
    t.error += head.error;
    return t;
}

bool left_singular_integrable(double p, double q, double r)
{
    return tail_integrable(TailClass{-(p + 1.0), q, r, 0.0});
}

QuadResult integrate_left_singular(const Fn& f, double D, double p, double q, double r, double tol)
{
    if (!(tol > 0.0))
        tol = quad_tolerance();
    // d = e^{-y}: int_{ln(1/D)}^{inf} f(e^{-y}) e^{-y} dy.
    Fn g = [&f](double y) {
        double d = std::exp(-y);
        if (d == 0.0)
            return 0.0;
        double v = f(d);
        return std::isfinite(v) ? v * d : 0.0;
    };
    double y0 = -std::log(D);
    TailClass cls{-(p + 1.0), q, r, 0.0};
    // d underflows past y ~ 745; keep a margin.
    return integrate_tail(g, y0, cls, 740.0, tol);
}

} // namespace speclab
