#include "speclab/decay.hpp"

#include "speclab/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace speclab {

namespace {

int sgn(double x)
{
    constexpr double eps = 1e-12;
    return x > eps ? 1 : (x < -eps ? -1 : 0);
}

} // namespace

int growth_sign(const Decay& f, EndKind where)
{
    int s = where == EndKind::Finite ? -sgn(f.a) : sgn(f.a);
    if (s != 0)
        return s;
    if (sgn(f.b) != 0)
        return sgn(f.b);
    return sgn(f.c);
}

Decay multiply(const Decay& f, const Decay& g) { return {f.K * g.K, f.a + g.a, f.b + g.b, f.c + g.c}; }

Decay power(const Decay& f, double p) { return {std::pow(f.K, p), p * f.a, p * f.b, p * f.c}; }

bool integrable(const Decay& f, EndKind where, double j)
{
    if (where == EndKind::Finite)
        return left_singular_integrable(f.a + j, f.b, f.c);
    return tail_integrable(TailClass{0.0, f.a + j, f.b, f.c});
}

double decay_shape(const Decay& f, EndKind where, double d)
{
    double L = where == EndKind::Finite ? std::log(1.0 / d) : std::log(d);
    double v = f.K * std::pow(d, f.a);
    if (f.b != 0.0)
        v *= std::pow(L, f.b);
    if (f.c != 0.0)
        v *= std::pow(std::log(L), f.c);
    return v;
}

std::string describe(const Decay& f)
{
    std::ostringstream os;
    os << f.K << " d^" << f.a << " L^" << f.b << " LL^" << f.c;
    return os.str();
}

} // namespace speclab
