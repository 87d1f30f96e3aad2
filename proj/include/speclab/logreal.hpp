#pragma once

#include <cmath>
#include <limits>

namespace speclab {

// Signed real stored as sign and natural log of the magnitude. Used to evaluate
// closed-form profiles at radii like exp(1e15) where doubles overflow.
struct LogReal {
    int sign = 0; // -1, 0, +1
    double lg = -std::numeric_limits<double>::infinity();

    static LogReal from_double(double x)
    {
        if (x == 0.0 || std::isnan(x))
            return {};
        return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
    }
    static LogReal exp_of(double logabs) { return {1, logabs}; }

    double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(lg); }
    bool is_zero() const { return sign == 0; }
};

inline LogReal operator*(LogReal a, LogReal b)
{
    if (a.sign == 0 || b.sign == 0)
        return {};
    return {a.sign * b.sign, a.lg + b.lg};
}

inline LogReal operator/(LogReal a, LogReal b)
{
    if (b.sign == 0)
        return {a.sign >= 0 ? 1 : -1, std::numeric_limits<double>::infinity()};
    if (a.sign == 0)
        return {};
    return {a.sign * b.sign, a.lg - b.lg};
}

inline LogReal operator-(LogReal a) { return {-a.sign, a.lg}; }

inline LogReal operator+(LogReal a, LogReal b)
{
    if (a.sign == 0)
        return b;
    if (b.sign == 0)
        return a;
    if (a.lg < b.lg)
        std::swap(a, b);
    double d = b.lg - a.lg;
    if (a.sign == b.sign)
        return {a.sign, a.lg + std::log1p(std::exp(d))};
    if (d == 0.0)
        return {};
    return {a.sign, a.lg + std::log1p(-std::exp(d))};
}

inline LogReal operator-(LogReal a, LogReal b) { return a + (-b); }

inline bool operator<(LogReal a, LogReal b)
{
    if (a.sign != b.sign)
        return a.sign < b.sign;
    if (a.sign == 0)
        return false;
    return a.sign > 0 ? a.lg < b.lg : a.lg > b.lg;
}

} // namespace speclab
