#pragma once

#include <functional>
#include <limits>
#include <string>

namespace speclab {

using Fn = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool tail_estimated = false; // part of the value came from an asymptotic remainder
};

// Asymptotic shape K e^{rate x} x^p (ln x)^q (ln ln x)^r of an integrand as x -> +inf.
struct TailClass {
    double rate = 0.0;
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

bool tail_integrable(const TailClass& c);
std::string describe(const TailClass& c);

constexpr double kQuadTol = 1e-11;

// Relative tolerance used when a call passes tol <= 0 (the default). Process-wide.
double quad_tolerance();
void set_quad_tolerance(double tol);

// Adaptive G7K15 on a finite interval.
QuadResult integrate(const Fn& f, double a, double b, double tol = 0.0);

// int_{y0}^{inf} g(y) dy for an integrand of class `cls`. Nested log substitutions
// reduce algebraic or logarithmic decay to exponential decay. `y_limit` is the largest
// argument at which g can be evaluated; past it an asymptotic remainder is added.
// Precondition: tail_integrable(cls).
QuadResult integrate_tail(const Fn& g, double y0, const TailClass& cls,
                          double y_limit = std::numeric_limits<double>::infinity(),
                          double tol = 0.0);

// int_0^D f(d) dd with f(d) ~ d^p (ln 1/d)^q (ln ln 1/d)^r as d -> 0+.
// f receives the distance d itself so callers keep full precision near the endpoint.
QuadResult integrate_left_singular(const Fn& f, double D, double p, double q, double r,
                                   double tol = 0.0);

bool left_singular_integrable(double p, double q, double r);

} // namespace speclab
