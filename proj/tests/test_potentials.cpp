#include "speclab/potentials.hpp"

#include <doctest.h>

#include <cmath>

using namespace speclab;

namespace {

Potential annulus(double c, double a, double b)
{
    Region r;
    r.r_lo = a;
    r.r_hi = b;
    r.radial = Formula::constant(c);
    return Potential("annulus", {r});
}

Potential log3()
{
    Region r;
    r.r_lo = std::exp(2.0);
    r.radial = Formula::parse("1/(2*pi*r^2*t^2)");
    r.at_infinity = Decay{1.0 / (2.0 * kPi), -2, -2, 0};
    return Potential("log3_like", {r});
}

} // namespace

TEST_CASE("formula grammar")
{
    auto f = Formula::parse("2*r^2 + ln(r) - abs(th)");
    Formula::Env e;
    e.r = LogReal::from_double(3.0);
    e.t = std::log(3.0);
    e.th = -0.5;
    CHECK(f.eval(e) == doctest::Approx(18.0 + std::log(3.0) - 0.5));
    CHECK(Formula::parse("ind(r, 1, 2)").of_r(1.5) == 1.0);
    CHECK(Formula::parse("ind(r, 1, 2)").of_r(2.5) == 0.0);
    CHECK(Formula::parse("exp(1)").is_constant());
    CHECK(Formula::parse("1/(r^2*t^2)").of_t(1e6) == doctest::Approx(std::exp(-2e6) * 1e-12).epsilon(1e-6));
    // huge radii go through logs
    LogReal v = Formula::parse("1/(r^2*t^2)").eval_log({LogReal::exp_of(1e6), 1e6, 0.0, 0.0});
    CHECK(v.lg == doctest::Approx(-2e6 - 2.0 * std::log(1e6)));
    CHECK_THROWS(Formula::parse("r^"));
    CHECK_THROWS(Formula::parse("sin(r)"));
}

TEST_CASE("config round trip")
{
    Region r;
    r.r_lo = 1.0;
    r.r_hi = std::exp(1.0);
    r.th_lo = -1.0;
    r.th_hi = 1.0;
    r.radial = Formula::parse("1/(d*(1+ln(d)^2))");
    r.at_r_lo = Decay{1, -1, -2, 0};
    Potential V("blowup", {r});
    Potential W = Potential::from_config(V.to_config());
    CHECK(W.to_config() == V.to_config());
    CHECK(W.value(1.5, 0.2) == doctest::Approx(V.value(1.5, 0.2)));
    CHECK(W.value(1.5, 2.0) == 0.0);
    CHECK_THROWS_AS(Potential::from_config("potential x\nregion\n  r 2 1\nend\n"), ConfigError);
}

TEST_CASE("validate rejects overlapping regions")
{
    Region a, b;
    a.r_lo = 1.0;
    a.r_hi = 3.0;
    b.r_lo = 2.0;
    b.r_hi = 4.0;
    CHECK_THROWS(Potential("overlap", {a, b}).validate());
    CHECK_NOTHROW(annulus(1.0, 1.0, 2.0).validate());
}

TEST_CASE("rearrangement of an annulus indicator")
{
    double c = 2.5, a = 1.0, b = 3.0;
    auto p = rearrange(annulus(c, a, b));
    double R = std::sqrt(b * b - a * a);
    CHECK(p.value(0.5 * R) == doctest::Approx(c));
    CHECK(p.value(0.999 * R) == doctest::Approx(c));
    CHECK(p.value(1.001 * R) == 0.0);
    // Chebyshev bound V_*(r) <= int V / (pi r^2)
    double total = c * kPi * (b * b - a * a);
    for (double r : {0.5, 1.0, 2.0, 2.8})
        CHECK(p.value(r) <= total / (kPi * r * r) * (1 + 1e-12));
    CHECK(rearrange(Potential::zero()).value(1.0) == 0.0);
}

TEST_CASE("rearrangement of a radial decreasing profile is itself")
{
    Region r;
    r.r_lo = 0.0;
    r.r_hi = 2.0;
    r.radial = Formula::parse("4 - r^2");
    r.at_r_lo = Decay{4.0, 0, 0, 0};
    auto p = rearrange(Potential("cap", {r}));
    for (double x : {0.1, 0.7, 1.5, 1.9})
        CHECK(p.value(x) == doctest::Approx(4.0 - x * x).epsilon(1e-8));
}

TEST_CASE("weighted integrals")
{
    CHECK(weighted_integral(Potential::zero(), Weight::Log1p).value() == 0.0);
    // int_{r > e^2} 1/(2 pi r^2 ln^2 r) 2 pi r dr = 1/ln(e^2)
    Value v = weighted_integral(log3(), Weight::One);
    REQUIRE(v.is_finite());
    CHECK(v.value() == doctest::Approx(0.5).epsilon(1e-8));
    // the log weight adds a factor ln r: int dr/(r ln r) diverges
    CHECK(weighted_integral(log3(), Weight::Log1p).is_infinite());
}

TEST_CASE("log reduction")
{
    double beta = 0.7;
    Region r;
    r.r_lo = std::exp(-1.0);
    r.r_hi = std::exp(2.0);
    r.radial = Formula::parse("0.7/r^2");
    auto G = log_reduce(Potential("inv", {r}));
    for (double t : {-0.9, 0.0, 1.5})
        CHECK(G.G(t) == doctest::Approx(beta));
    CHECK(G.G(2.5) == 0.0);
    CHECK(log_reduce(Potential::zero()).pieces.empty());

    // separable: angular mean multiplies the radial part
    Region s;
    s.r_lo = 1.0;
    s.r_hi = 5.0;
    s.radial = Formula::parse("1/r");
    s.angular = Formula::parse("1 + th^2");
    auto H = log_reduce(Potential("sep", {s}));
    double mean = (2.0 * kPi + 2.0 * std::pow(kPi, 3) / 3.0) / (2.0 * kPi);
    double t = std::log(2.0);
    CHECK(H.G(t) == doctest::Approx(std::exp(2.0 * t) / 2.0 * mean).epsilon(1e-9));
}

TEST_CASE("profile outlives the potential")
{
    LogProfile G;
    {
        Region r;
        r.r_lo = 1.0;
        r.r_hi = 2.0;
        r.radial = Formula::parse("3/r^2");
        G = log_reduce(Potential("tmp", {r}));
    }
    CHECK(G.G(0.5) == doctest::Approx(3.0));
}

TEST_CASE("decay classes")
{
    CHECK(integrable(Decay{1, -1, -2, 0}, EndKind::Finite, 0.0));
    CHECK_FALSE(integrable(Decay{1, -1, -1, 0}, EndKind::Finite, 0.0));
    CHECK(integrable(Decay{1, -2, 0, 0}, EndKind::Infinity, 0.5));
    CHECK_FALSE(integrable(Decay{1, -2, 0, 0}, EndKind::Infinity, 1.0));
    CHECK(growth_sign(Decay{1, -1, 0, 0}, EndKind::Finite) > 0);
    CHECK(growth_sign(Decay{1, -1, 0, 0}, EndKind::Infinity) < 0);
}
