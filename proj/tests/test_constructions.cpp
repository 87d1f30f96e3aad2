#include "speclab/constructions.hpp"

#include <doctest.h>

#include <cmath>

using namespace speclab;

TEST_CASE("alpha sequences")
{
    auto p = AlphaSequence::parse("pow:4");
    CHECK(p.alpha(1) == doctest::Approx(0.75));
    CHECK(p.complement(30) == doctest::Approx(std::pow(4.0, -30)));
    auto g = AlphaSequence::parse("gauss:2");
    CHECK(g.complement(3) == doctest::Approx(std::pow(2.0, -9)));
    auto l = AlphaSequence::parse("list:0.1,0.5,0.9");
    CHECK(l.length == 3);
    CHECK(l.alpha(2) == doctest::Approx(0.9));
    CHECK_THROWS_AS(AlphaSequence::parse("exp:2"), InvalidParameters);
}

TEST_CASE("k0 condition")
{
    // 1 - 4^-k: every term equals 1/3
    CHECK(k0_sum(AlphaSequence::parse("pow:4"), 1).is_infinite());
    Value g = k0_sum(AlphaSequence::parse("gauss:2"), 3);
    REQUIRE(g.is_finite());
    CHECK(g.value() <= 0.125);
    CHECK_THROWS_AS(build("alpha1_iii", [] {
                        ConstructionParams P;
                        P.alpha_seq = "pow:4";
                        return P;
                    }()),
                    InvalidParameters);
    ConstructionParams P;
    P.alpha_seq = "pow:4";
    P.k0 = 1;
    auto c = build_alpha1_iii_unchecked(P);
    CHECK_FALSE(c.warnings.empty());
}

TEST_CASE("alpha1_i geometry and claims")
{
    ConstructionParams P;
    P.N = 1;
    auto c = build("alpha1_i", P);
    CHECK(c.log_junctions[1] - c.log_junctions[0] == doctest::Approx(std::sqrt(3.0) * kPi / 2.0));
    auto rep = verify_claims(c);
    CHECK(rep.failed() == 0);
    CHECK(rep.passed() == rep.results.size());
    CHECK_THROWS_AS(build("alpha1_i", [] {
                        ConstructionParams Q;
                        Q.N = 0;
                        return Q;
                    }()),
                    InvalidParameters);
}

TEST_CASE("alpha1_ii claims")
{
    ConstructionParams P;
    P.K = 4;
    auto rep = verify_claims(build("alpha1_ii", P));
    CHECK(rep.failed() == 0);
}

TEST_CASE("alpha1_iii with a valid sequence")
{
    ConstructionParams P;
    P.alpha_seq = "gauss:2";
    P.K = 5;
    auto c = build("alpha1_iii", P);
    CHECK(c.params["k0"].get<long>() == 3);
    auto rep = verify_claims(c);
    for (const auto& r : rep.results)
        CHECK_MESSAGE(r.status == ClaimStatus::Pass, r.name << ": " << r.detail);
}

TEST_CASE("L log L sharpness")
{
    ConstructionParams P;
    P.psi = "B";
    CHECK_THROWS_AS(build("llogl_sharpness", P), InvalidParameters);
    P.psi = "power:1.5";
    CHECK_THROWS_AS(build("llogl_sharpness", P), InvalidParameters);
    P.psi = "slog:0.5";
    auto rep = verify_claims(build("llogl_sharpness", P));
    CHECK(rep.failed() == 0);
}

TEST_CASE("builtins and export")
{
    for (const auto& id : {"log3", "inverse_square", "angular_L1", "zero"}) {
        Potential V = builtin_potential(id);
        Potential W = Potential::from_config(V.to_config());
        CHECK(W.to_config() == V.to_config());
    }
    ConstructionParams P;
    P.N = 1;
    auto c = build("alpha1_i", P);
    Potential V = Potential::from_config(export_config(c));
    CHECK(radial_eigencount(V, 0.999).lower == 1);
    // alpha1_iii radii leave double range: no potential to export
    ConstructionParams Q;
    Q.alpha_seq = "gauss:2";
    auto d = build("alpha1_iii", Q);
    CHECK_FALSE(d.potential.has_value());
    CHECK_THROWS_AS(export_config(d), ConfigError);
    CHECK_THROWS_AS(build("nonesuch"), InvalidParameters);
}

TEST_CASE("section 8 claims")
{
    for (const auto& id : {"log3", "inverse_square", "inverse_rlogr", "grig_radial", "boundary_blowup_L1"}) {
        auto rep = verify_claims(build(id));
        CHECK_MESSAGE(rep.failed() == 0, id);
    }
}
