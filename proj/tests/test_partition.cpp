#include "speclab/constructions.hpp"
#include "speclab/partition.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace speclab;

TEST_CASE("annulus families")
{
    AnnulusFamily U{FamilyKind::DyadicU};
    auto [a0, b0] = U.t_range(0);
    CHECK(a0 == doctest::Approx(-1.0));
    CHECK(b0 == doctest::Approx(1.0));
    auto [a3, b3] = U.t_range(3);
    CHECK(a3 == doctest::Approx(4.0));
    CHECK(b3 == doctest::Approx(8.0));
    auto [am, bm] = U.t_range(-2);
    CHECK(am == doctest::Approx(-4.0));
    CHECK(bm == doctest::Approx(-2.0));
    CHECK(U.index_of(5.0) == 3);
    CHECK(U.index_of(-3.0) == -2);
    AnnulusFamily O{FamilyKind::ExponentialOmega};
    CHECK(O.index_of(2.5) == 2);
}

TEST_CASE("sequence statistics")
{
    CHECK(weak_l1(std::vector<double>{}) == 0.0);
    CHECK(weak_l1(std::vector<double>{0.0, 0.0}) == 0.0);
    std::vector<double> h;
    for (int n = 1; n <= 50; ++n)
        h.push_back(1.0 / n);
    CHECK(weak_l1(h) == doctest::Approx(1.0));
    CHECK(thresholded_sqrt_sum({1.0, 0.5, 0.04}, 0.25) == doctest::Approx(1.0 + std::sqrt(0.5)));
    CHECK(thresholded_sqrt_sum({0.1, 0.2}, 0.25) == 0.0);
    CHECK(thresholded_power_sum({2.0, 3.0}, 1.0, 2.0) == doctest::Approx(13.0));
}

TEST_CASE("zero potential")
{
    auto p = profile(Potential::zero(), SeqId::A, std::make_pair(-3L, 3L));
    for (const auto& [n, v] : p.values)
        CHECK(v.value() == 0.0);
    CHECK(sequence_sum(p).value() == 0.0);
}

TEST_CASE("bold A of the log3 example")
{
    Potential V = builtin_potential("log3");
    auto p = profile(V, SeqId::BoldA, std::make_pair(0L, 8L));
    for (long n = 2; n <= 8; ++n)
        CHECK(p.values.at(n).value() == doctest::Approx(std::log1p(1.0 / (n - 1))).epsilon(1e-7));
    CHECK(sequence_sum(p).is_infinite());
    Value w = weak_l1(p);
    CHECK(w.is_finite());
}

TEST_CASE("inverse square: script B diverges")
{
    Potential V = builtin_potential("inverse_square");
    auto p = profile(V, SeqId::ScriptB, std::make_pair(0L, 6L));
    CHECK(sequence_sum(p).is_infinite());
    auto q = profile(V, SeqId::OmegaNorm, std::make_pair(1L, 6L));
    CHECK(sequence_sum(q).is_finite());
}

TEST_CASE("A_n of a plateau by hand")
{
    // V = c on e^{-1} < |x| < e: A_0 = c pi (e^2 - e^{-2}), other entries zero
    Region r;
    r.r_lo = std::exp(-1.0);
    r.r_hi = std::exp(1.0);
    r.radial = Formula::constant(0.3);
    Potential V("plateau", {r});
    auto p = profile(V, SeqId::A, std::make_pair(-2L, 2L));
    CHECK(p.values.at(0).value() == doctest::Approx(0.3 * kPi * (std::exp(2.0) - std::exp(-2.0))).epsilon(1e-9));
    CHECK(p.values.at(1).value() == doctest::Approx(0.0).epsilon(1e-12));
    auto q = profile_A(log_reduce(V));
    CHECK(q.values.at(0).value() == doctest::Approx(p.values.at(0).value()).epsilon(1e-9));
}

TEST_CASE("mixed norm on a rectangle grid")
{
    std::vector<double> x{0.0, 1.0, 2.0}, y{0.0, 0.5, 1.5};
    std::vector<std::vector<double>> v{{1.0, 1.0}, {0.0, 0.0}};
    // row 0 is constant 1 on a y-interval of measure 1.5
    double avg = average_norm(CellSample({1.0, 1.0}, {0.5, 1.0}), NFunction::B()).norm.value();
    CHECK(rect_mixed_norm(x, y, v, 0, 2, 0, 2) == doctest::Approx(avg));
    CHECK_THROWS_AS(rect_mixed_norm(x, y, v, 1, 1, 0, 2), InvalidDomain);
}
