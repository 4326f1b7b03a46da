#include <doctest.h>

#include <cmath>

#include "betadyn/dimension.hpp"

using namespace betadyn;

namespace {
BetaSystem sys(const char* s) { return BetaSystem::from_string(s); }
const double INF = std::numeric_limits<double>::infinity();
} // namespace

TEST_CASE("the three display quantities") {
    ABCValues r = abc(0.0, 1.0, 1.0);
    CHECK(r.A == doctest::Approx(1.0));
    CHECK(r.B == doctest::Approx(1.0));
    CHECK(r.C == doctest::Approx(1.5));

    // A(0, v) collapses to (2 + v - Lv)/(1 + v)
    for (double v : {0.5, 1.0, 2.0})
        for (double L : {0.3, 0.7}) {
            ABCValues x = abc(0.0, v, L);
            CHECK(x.A == doctest::Approx((2 + v - L * v) / (1 + v)).epsilon(1e-13));
            CHECK(x.B == doctest::Approx((1 + L) / (L * (1 + v))).epsilon(1e-13));
            CHECK(x.C == doctest::Approx((2 + v) / (1 + v)).epsilon(1e-13));
        }

    // at vhat = v/(1+v) the shared numerator vanishes
    ABCValues b = abc(0.5, 1.0, 0.7);
    CHECK(b.B == doctest::Approx(0.0));
    CHECK(b.A == doctest::Approx(1 - 0.7));

    CHECK_THROWS_AS(abc(1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("dimension of the intersection set") {
    DimensionResult r = dim_e(sys("2"), sys("2"), 0.3, 1.0);
    CHECK(r.value == doctest::Approx(4.0 / 7.0).epsilon(1e-13));
    CHECK(r.regime == Regime::CaseAB);
    CHECK(r.proved);

    DimensionResult r2 = dim_e(sys("2"), sys("5"), 0.0, 1.0);
    double L = std::log(2.0) / std::log(5.0);
    CHECK(r2.value == doctest::Approx((3 - L) / 2).epsilon(1e-13));
    CHECK(r2.regime == Regime::CaseAC);
    CHECK(r2.value == doctest::Approx(1.284662).epsilon(1e-6));

    DimensionResult r3 = dim_e(sys("2"), sys("2"), 0.6, 1.0);
    CHECK(r3.value == 0);
    CHECK(r3.regime == Regime::CountableZero);

    DimensionResult r4 = dim_e(sys("2"), sys("3"), 0.0, 0.0);
    CHECK(r4.value == 2);
    CHECK(r4.regime == Regime::FullMeasure);

    DimensionResult r5 = dim_e(sys("2"), sys("2"), 0.3, INF);
    CHECK(r5.value == 0);

    CHECK_THROWS_AS(dim_e(sys("3"), sys("2"), 0.0, 1.0), DomainError);
}

TEST_CASE("dimension of the asymptotic set") {
    double L25 = std::log(2.0) / std::log(5.0);
    DimensionResult w = dim_w(sys("2"), sys("5"), 1.0);
    CHECK(w.value == doctest::Approx((3 - L25) / 2).epsilon(1e-13));
    CHECK(w.regime == Regime::WuSmall);

    DimensionResult w2 = dim_w(sys("2"), sys("4"), 1.0);
    CHECK(w2.value == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(w2.regime == Regime::WuLarge); // equality routed to the min branch

    CHECK(dim_w(sys("2"), sys("3"), 0.0).value == 2);
    CHECK(dim_w(sys("2"), sys("3"), INF).value == 0);
}

TEST_CASE("equal-base closed form for the uniform set") {
    for (double vhat : {0.1, 0.3, 0.5}) {
        DimensionResult u = dim_u(sys("2"), sys("2"), vhat);
        double expect = 2 * std::pow((1 - vhat) / (1 + vhat), 2);
        double vstar = 2 * vhat / (1 - vhat);
        CHECK(std::fabs(u.value - expect) < 1e-6);
        REQUIRE(u.argmax_v.has_value());
        CHECK(std::fabs(*u.argmax_v - vstar) < 1e-4);
    }
    CHECK(dim_u(sys("2"), sys("2"), 1.5).value == 0);
    CHECK(dim_u(sys("2"), sys("2"), 1.5).regime == Regime::CountableZero);
    CHECK(dim_u(sys("2"), sys("2"), 0.0).value == 2);
    CHECK(dim_u(sys("2"), sys("2"), 1.0).value == 0);
}

TEST_CASE("dim_e at vhat = 0 equals dim_w across both branches") {
    const char* pairs[][2] = {{"2", "2"},   {"2", "4"},  {"2", "5"},
                              {"5/2", "5/2"}, {"5/2", "4"}, {"3", "3"},
                              {"3", "5"},   {"2", "16"}, {"3", "4"}};
    for (auto& p : pairs)
        for (double v : {0.3, 1.0, 3.0}) {
            double e = dim_e(sys(p[0]), sys(p[1]), 0.0, v).value;
            double w = dim_w(sys(p[0]), sys(p[1]), v).value;
            CHECK(std::fabs(e - w) < 1e-12);
        }
}

TEST_CASE("monotonicity and range") {
    double prev = 2.0;
    for (double vhat : {0.05, 0.15, 0.3, 0.5, 0.7, 0.9}) {
        double u = dim_u(sys("2"), sys("3"), vhat).value;
        CHECK(u <= prev + 1e-9);
        CHECK(u >= 0);
        CHECK(u <= 2);
        prev = u;
    }
    // dim_E never exceeds dim_W at the same parameters
    for (double vhat : {0.0, 0.1, 0.3})
        for (double v : {0.8, 1.0, 2.0}) {
            if (vhat > v / (1 + v)) continue;
            CHECK(dim_e(sys("2"), sys("3"), vhat, v).value <=
                  dim_w(sys("2"), sys("3"), v).value + 1e-12);
        }
}

TEST_CASE("boundary behavior") {
    // along the min{A,B} branch the value collapses as vhat -> v/(1+v)
    double nearly = dim_e(sys("2"), sys("2"), 0.5 - 1e-7, 1.0).value;
    CHECK(nearly < 1e-5);
    DimensionResult at = dim_e(sys("2"), sys("2"), 0.5, 1.0);
    CHECK(at.value == doctest::Approx(0.0));
    CHECK(at.regime == Regime::Boundary);
}

TEST_CASE("the proved flag tracks the lower-bound hypothesis") {
    DimensionResult unproved = dim_e(sys("2"), sys("4"), 0.3, 1.0);
    CHECK(!unproved.proved);
    CHECK(unproved.value > 0); // still the upper-bound value
    CHECK(dim_e(sys("2"), sys("2"), 0.3, 1.0).proved);
    CHECK(dim_e(sys("2"), sys("4"), 0.0, 1.0).proved);
}

TEST_CASE("certified power comparison") {
    CHECK(compare_beta_power(sys("2"), sys("4"), 1.0) == 0);
    CHECK(compare_beta_power(sys("2"), sys("5"), 1.0) < 0);
    CHECK(compare_beta_power(sys("2"), sys("3"), 1.0) > 0);
    // algebraic base: phi^2 = phi + 1 < 2 + 1
    BetaSystem phi = sys("root:z^2-z-1:[1.6,1.7]");
    CHECK(compare_beta_power(phi, phi, 1.0) > 0); // phi^2 > phi
    CHECK(compare_beta_power(phi, sys("3"), 1.0) < 0);
}
