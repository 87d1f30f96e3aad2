#include "speclab/bounds.hpp"
#include "speclab/constructions.hpp"

#include <doctest.h>

#include <cmath>

using namespace speclab;

namespace {

// c on U_0 = {e^-1 < |x| < e}
Potential on_U0(double c)
{
    Region r;
    r.r_lo = std::exp(-1.0);
    r.r_hi = std::exp(1.0);
    r.radial = Formula::constant(c);
    return Potential("U0", {r});
}

} // namespace

TEST_CASE("Phi maximum")
{
    CHECK(phi_kappa(1.559) == doctest::Approx(0.046).epsilon(0.001 / 0.046));
    CHECK(phi_kappa(1e-8) < 1e-7);
    auto m = maximize_phi();
    CHECK(m.kappa == doctest::Approx(1.559).epsilon(0.01 / 1.559));
    CHECK(m.phi == doctest::Approx(0.046).epsilon(0.001 / 0.046));
    CHECK(std::sqrt(2.0 * (4.0 * m.kappa + 1.0) * m.phi) == doctest::Approx(0.816).epsilon(0.005 / 0.816));
    CHECK(phi_kappa(m.kappa * 1.01) <= m.phi);
    CHECK(phi_kappa(m.kappa * 0.99) <= m.phi);
}

TEST_CASE("RadMain and 10 pi lower bound by hand")
{
    CHECK(rad_main_bound(Potential::zero()).value.value() == 1.0);
    auto area = kPi * (std::exp(2.0) - std::exp(-2.0));
    CHECK(rad_main_bound(on_U0(1.0 / area)).value.value() == doctest::Approx(5.0).epsilon(1e-9));
    auto low = lower_bound_10pi(on_U0(10.0 * kPi / area * (1.0 + 1e-9)));
    CHECK(low.count.value() == 1.0);
    CHECK(low.bound.value() == doctest::Approx(1.0 / 3.0));
    CHECK(lower_bound_10pi(on_U0(9.0 * kPi / area)).count.value() == 0.0);
    CHECK(lower_bound_10pi(Potential::zero()).count.value() == 0.0);
}

TEST_CASE("estimates on the zero potential")
{
    BoundParams bp;
    bp.p = 1.5;
    auto c = compare(Potential::zero(), all_estimates(), bp);
    CHECK(c.inconsistencies.empty());
    for (const auto& r : c.reports)
        CHECK(r.value.is_finite());
    CHECK(evaluate(Potential::zero(), EstimateId::RadMain, bp).value.value() == 1.0);
}

TEST_CASE("log3: Sol finite, clCLR infinite")
{
    Potential V = builtin_potential("log3");
    CHECK(evaluate(V, EstimateId::Sol).value.is_finite());
    CHECK(evaluate(V, EstimateId::clCLR).value.is_infinite());
}

TEST_CASE("boundary blow-up separates Laptev and LNS4")
{
    Potential V = builtin_potential("boundary_blowup_L1");
    BoundParams bp;
    bp.p = 1.5;
    CHECK(evaluate(V, EstimateId::Laptev, bp).value.is_infinite());
    CHECK(evaluate(V, EstimateId::LNS4, bp).value.is_finite());
    CHECK_THROWS_AS(evaluate(V, EstimateId::LNS4), InvalidParameters);
}

TEST_CASE("implication diagram")
{
    using E = EstimateId;
    CHECK(implies(E::LNS, E::LNS2));
    CHECK(implies(E::LNS, E::Sol));
    CHECK(implies(E::LNS2, E::LNS4));
    CHECK(implies(E::Laptev, E::clCLR));
    CHECK(implies(E::KMW, E::clCLR));
    CHECK(implies(E::GrigTalk, E::GrigNad));
    CHECK_FALSE(implies(E::clCLR, E::Sol));
    CHECK_FALSE(implies(E::LNS4, E::Laptev));
    for (auto id : all_estimates())
        CHECK(estimate_from_string(to_string(id)) == id);
}

TEST_CASE("KMW on a radial decreasing potential reduces to three radial integrals")
{
    Region r;
    r.r_lo = 0.0;
    r.r_hi = 2.0;
    r.radial = Formula::parse("2 - r");
    r.at_r_lo = Decay{2.0, 0, 0, 0};
    Potential V("cone", {r});
    auto rep = evaluate(V, EstimateId::KMW);
    REQUIRE(rep.value.is_finite());
    // 2 pi int_0^1 r F |ln r| dr, 2 pi int_1^2 r F ln r dr, 2 pi int_0^2 r F dr, closed forms
    double i1 = 2.0 * kPi * (2.0 / 4.0 - 1.0 / 9.0);
    double i2 = 2.0 * kPi * (4.0 / 3.0 * std::log(2.0) - 13.0 / 18.0);
    double i3 = 2.0 * kPi * (4.0 - 8.0 / 3.0);
    CHECK(rep.value.value() == doctest::Approx(1.0 + i1 + i2 + i3).epsilon(1e-6));
}
