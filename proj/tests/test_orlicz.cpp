#include "speclab/orlicz.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace speclab;

namespace {

// root of B(s) = 1 by plain bisection
double s1_of_B()
{
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi);
        ((1.0 + m) * std::log1p(m) - m < 1.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("N-functions")
{
    auto A = NFunction::A();
    auto B = NFunction::B();
    CHECK(A(0.0) == 0.0);
    CHECK(B(-2.0) == doctest::Approx(B(2.0)));
    CHECK(A(1.0) == doctest::Approx(std::exp(1.0) - 2.0));
    CHECK(B(1.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0));
    CHECK(B(1e-6) == doctest::Approx(0.5e-12).epsilon(1e-6));
    CHECK(A.complementary().kind() == NFunction::Kind::LLogLB);
    CHECK(B.complementary().kind() == NFunction::Kind::ExpA);
    CHECK(A.spot_check());
    CHECK(B.spot_check());
    // power pair |s|^p/p and |s|^q/q
    auto P = NFunction::power(3.0);
    auto Q = P.complementary();
    CHECK(Q.exponent() == doctest::Approx(1.5));
    // Young: st <= P(s) + Q(t)
    for (double s : {0.1, 1.0, 2.5})
        for (double t : {0.3, 1.0, 4.0})
            CHECK(s * t <= P(s) + Q(t) + 1e-12);
}

TEST_CASE("custom N-function partner is the Legendre transform")
{
    auto C = NFunction::custom("quad", [](double s) { return 0.5 * s * s; });
    auto D = C.complementary();
    for (double t : {0.2, 1.0, 3.0})
        CHECK(D(t) == doctest::Approx(0.5 * t * t).epsilon(1e-6));
}

TEST_CASE("Luxemburg norm of a constant")
{
    CellSample zero({0.0, 0.0}, {0.5, 0.5});
    CHECK(luxemburg_norm(zero, NFunction::B()).norm.value() == 0.0);
    double c = 3.0;
    CellSample f({c}, {1.0});
    auto r = luxemburg_norm(f, NFunction::B());
    CHECK(r.norm.value() == doctest::Approx(c / s1_of_B()).epsilon(1e-9));
    CHECK(r.bracket_lo <= r.norm.value());
    CHECK(r.norm.value() <= r.bracket_hi);
    CHECK(s1_of_B() == doctest::Approx(1.73).epsilon(0.01));
}

TEST_CASE("Orlicz norm of 1 on a unit interval")
{
    auto B = NFunction::B();
    // dense scan over k plus golden refinement
    double best = std::numeric_limits<double>::infinity(), kb = 0;
    for (int i = 0; i <= 200000; ++i) {
        double k = 1e-3 + i * 1e-4;
        double v = (1.0 + B(k)) / k;
        if (v < best) {
            best = v;
            kb = k;
        }
    }
    for (int i = -20000; i <= 20000; ++i) {
        double k = kb + i * 1e-8;
        best = std::min(best, (1.0 + B(k)) / k);
    }
    CellSample one({1.0}, {1.0});
    CHECK(orlicz_norm(one, B).norm.value() == doctest::Approx(best).epsilon(1e-9));
    // measure 1: average norm coincides
    CHECK(average_norm(one, B).norm.value() == doctest::Approx(best).epsilon(1e-9));
    CHECK(orlicz_norm(CellSample({0.0}, {2.0}), B).norm.value() == 0.0);
}

TEST_CASE("norm sandwich and average-norm bounds")
{
    auto B = NFunction::B();
    CellSample f({0.3, 2.0, 7.5, 0.0}, {0.4, 1.1, 0.25, 2.0});
    double lux = luxemburg_norm(f, B).norm.value();
    double orl = orlicz_norm(f, B).norm.value();
    double av = average_norm(f, B).norm.value();
    CHECK(lux <= orl);
    CHECK(orl <= 2.0 * lux);
    double mu = f.measure();
    REQUIRE(mu > 1.0);
    CHECK(orl <= av * (1 + 1e-12));
    CHECK(av <= mu * orl);
}

TEST_CASE("dual representation against brute force")
{
    CellSample f({1.5, 0.2, 4.0}, {0.3, 0.5, 0.9});
    for (double level : {1.0, f.measure()}) {
        for (auto psi : {NFunction::A(), NFunction::B()}) {
            double d = dual_norm(f, psi, level).norm.value();
            double b = dual_norm_bruteforce(f, psi, level);
            CHECK(d == doctest::Approx(b).epsilon(1e-6));
        }
    }
}

TEST_CASE("log of the distance on the unit disk has A-norm at most 2 pi")
{
    // f = ln(1/r) on r < 1, measure r dr dth: chart in x = ln r
    Piece p;
    p.chart.kind = Chart1D::Kind::Log;
    p.chart.lo = -std::numeric_limits<double>::infinity();
    p.chart.hi = 0.0;
    p.chart.jac = 1.0;
    p.chart.scale = 2.0 * 3.14159265358979323846;
    p.f = [](double x) { return LogReal::from_double(-x); };
    p.lo_class = Decay{1.0, 0.0, 1.0, 0.0}; // ln(1/r) as r -> 0
    FunctionSample f({p}, 3.14159265358979323846);
    auto lux = luxemburg_norm(f, NFunction::A());
    REQUIRE(lux.norm.is_finite());
    CHECK(lux.norm.value() <= 2.0 * 3.14159265358979323846);
    // int A(ln 1/r) over the disk is pi/2 in closed form
    Value I = f.integrate(psi_map(NFunction::A(), 1.0));
    CHECK(I.value() == doctest::Approx(3.14159265358979323846 / 2.0).epsilon(1e-8));
}

TEST_CASE("M(p)")
{
    auto m2 = embedding_constant_M(2.0);
    CHECK(m2.m_p <= 0.5 + 1e-12);
    // dense grid oracle for p = 1.5
    auto B = NFunction::B();
    double best = 0.0;
    for (int i = 0; i <= 900000; ++i) {
        double t = std::pow(10.0, -3.0 + 9.0 * i / 900000.0);
        best = std::max(best, B(t) / std::pow(t, 1.5));
    }
    auto m = embedding_constant_M(1.5);
    CHECK(m.m_p == doctest::Approx(best).epsilon(1e-6));
    CHECK(m.M == doctest::Approx(std::pow(m.m_p, 1.0 / 1.5)));
    CHECK(m.local_maxima == 1);
    double prev = 10.0;
    for (double p : {1.1, 1.05, 1.01}) {
        double x = embedding_constant_M(p).M * std::exp(1.0) * (p - 1.0);
        CHECK(std::fabs(x - 1.0) < prev);
        prev = std::fabs(x - 1.0);
    }
    CHECK_THROWS_AS(embedding_constant_M(1.0), InvalidParameters);
}
