#include "speclab/constructions.hpp"
#include "speclab/spectral1d.hpp"

#include <doctest.h>

#include <cmath>

using namespace speclab;

TEST_CASE("Dirichlet closed form")
{
    CHECK(dirichlet_count(1.0, 10.0, 0.25) == 0);
    CHECK(dirichlet_count(1.0, std::exp(2.0 * kPi), 1.0) == 1);
    double L = std::log(7.0);
    double th = 0.25 + std::pow(kPi / L, 2);
    // thresholds snap within 1e-12 relative, so the exactly computed one counts as on the boundary
    CHECK(dirichlet_count(1.0, 7.0, th) == 0);
    CHECK(dirichlet_count(1.0, 7.0, th * (1 + 1e-9)) == 1);
    double th3 = 0.25 + std::pow(3.0 * kPi / L, 2);
    CHECK(dirichlet_count(1.0, 7.0, th3) == 2);
    CHECK(dirichlet_count(1.0, 7.0, th3 * (1 + 1e-9)) == 3);
}

TEST_CASE("Pruefer matches the closed form")
{
    for (double beta : {0.1, 0.26, 1.0, 3.3, 12.0}) {
        SturmProblem p{[beta](double t) { return beta / (t * t); }, 0.5, 40.0};
        auto r = pruefer_count(p, 1.0);
        CHECK(r.exact());
        CHECK(r.lower == dirichlet_count(0.5, 40.0, beta));
    }
    SturmProblem zero{[](double) { return 0.0; }, 0.0, 3.0};
    CHECK(pruefer_count(zero, 1.0).lower == 0);
    // constant well on [0, pi] with Neumann ends: eigenvalues k^2 - alpha
    SturmProblem well{[](double) { return 1.0; }, 0.0, kPi, SturmProblem::BC::Neumann, SturmProblem::BC::Neumann};
    CHECK(pruefer_count(well, 5.5).lower == 3); // k = 0, 1, 2
}

TEST_CASE("radial count of the first construction")
{
    ConstructionParams P;
    P.N = 3;
    auto c = build("alpha1_i", P);
    auto r = radial_eigencount(*c.profile, Coupling::of(0.999));
    CHECK(r.exact());
    CHECK(r.lower == 3);
    long prev = 0;
    double s2 = c.log_junctions[1];
    for (double cut : {4 * s2, 16 * s2, 64 * s2}) {
        long n = mode_count(*c.profile, Coupling::of(1.05), 0, cut).lower;
        CHECK(n > prev);
        prev = n;
    }
    CHECK(prev > 20);
    CHECK(radial_eigencount(*c.profile, Coupling::of(1.05)).count.is_infinite());
}

TEST_CASE("profile and potential paths agree")
{
    ConstructionParams P;
    P.N = 1;
    auto c = build("alpha1_i", P);
    REQUIRE(c.potential);
    auto a = radial_eigencount(*c.profile, Coupling::of(0.999));
    auto b = radial_eigencount(*c.potential, 0.999);
    CHECK(a.lower == 1);
    CHECK(b.lower == 1);
    CHECK(radial_eigencount(Potential::zero(), 2.0).lower == 0);
}

TEST_CASE("coupling complement keeps precision")
{
    auto c = Coupling::from_complement(1e-20);
    CHECK(c.excess(0.0) == doctest::Approx(-1e-20).epsilon(1e-12));
    CHECK(Coupling::of(1.0).excess(0.5) == doctest::Approx(0.5));
}

TEST_CASE("sharp constant C(kappa)")
{
    // a -> 0 with b = 1: C -> (1 + sqrt(1 + 4 kappa)) / (2 kappa)
    for (double k : {0.5, 1.559, 4.0}) {
        SharpSobolev s{k, 1e-9, 1.0};
        CHECK(s.C() == doctest::Approx((1.0 + std::sqrt(1.0 + 4.0 * k)) / (2.0 * k)).epsilon(1e-6));
        SharpSobolev t{k, 0.8, 2.0};
        CHECK(t.rayleigh(0.8) == doctest::Approx(t.C()).epsilon(1e-6));
        CHECK(t.rayleigh(1.3) == doctest::Approx(t.C_at(1.3)).epsilon(1e-6));
        CHECK(t.C_at(1.3) < t.C());
        auto g = grid_rayleigh_max(t, 2000);
        CHECK(g.value <= t.C() * (1 + 1e-3));
        CHECK(g.value >= 0.999 * t.C());
    }
}

TEST_CASE("sharp constant C0(kappa)")
{
    SharpSobolev0 z{1.0, 0.0, 1.0};
    CHECK(z.C0() == doctest::Approx(1.0 / std::tanh(1.0)));
    CHECK(z.C0() == doctest::Approx(1.3130).epsilon(1e-4));
    CHECK(z.C0_at(1.0) == doctest::Approx(z.C0()));
    CHECK(z.rayleigh(0.0) == doctest::Approx(z.C0()).epsilon(1e-6));
    SharpSobolev0 big{1e6, 0.0, 1.0};
    CHECK(big.C0() * 1e3 == doctest::Approx(1.0).epsilon(1e-9));
    auto g = grid_rayleigh_max(z, 2000);
    CHECK(g.value == doctest::Approx(z.C0()).epsilon(1e-3));
}

TEST_CASE("zeros of the zero-energy solution")
{
    // plain Euler piece with t^2 G = (1+eta)/4: phase advances by mu ln(b/a), mu = sqrt(eta)/2
    LogProfile G;
    LogPiece p;
    p.kind = LogPiece::Kind::Euler;
    p.lo = 0.0;
    p.hi = 40.0;
    p.eta = 1.0;
    G.pieces.push_back(p);
    G.sup_G = 0.5;
    // zeros of t^{1/2} sin(mu ln(t/t0)) in s-units: spacing 2 pi in s
    long z = interval_zero_count(G, Coupling::of(1.0), 0.0, 40.0);
    CHECK(z == static_cast<long>(std::floor(40.0 * 0.5 / kPi)));
}
