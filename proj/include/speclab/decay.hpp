#pragma once

#include <string>

namespace speclab {

// Asymptotic class K d^a L^b LL^c of a function near an endpoint.
// At a finite point d is the distance and L = ln(1/d); at infinity d = r and L = ln r.
struct Decay {
    double K = 1.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    bool operator==(const Decay&) const = default;
};

enum class EndKind { Finite, Infinity };

// Sign of the growth: +1 if the function blows up at the endpoint, -1 if it vanishes, 0 if it
// tends to a positive constant.
int growth_sign(const Decay& f, EndKind where);

Decay multiply(const Decay& f, const Decay& g);
Decay power(const Decay& f, double p);

// Integrability of d^j * (function of class f) dd near the endpoint.
bool integrable(const Decay& f, EndKind where, double jacobian_power);

// Shape of f(d) K d^a L^b LL^c evaluated at d.
double decay_shape(const Decay& f, EndKind where, double d);

std::string describe(const Decay& f);

} // namespace speclab
