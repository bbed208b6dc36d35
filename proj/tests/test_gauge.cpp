#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaugemech/gauge.hpp"

using namespace gm;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

TEST_CASE("phase residual, pinned cases") {
    // 2*pi + 0.3 sits 0.3 past the first multiple.
    auto r = phase_residual(kTwoPi + 0.3);
    CHECK(r.omega == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.n_nearest == 1);

    // -0.3 is nearest to n = 0.
    r = phase_residual(-0.3);
    CHECK(r.omega == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.n_nearest == 0);

    // Exact tie at pi resolves to the smaller integer.
    r = phase_residual(M_PI);
    CHECK(r.omega == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(r.n_nearest == 0);
    r = phase_residual(-M_PI);
    CHECK(r.omega == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(r.n_nearest == -1);

    // Exactly on a multiple.
    r = phase_residual(3 * kTwoPi);
    CHECK(r.omega == 0.0);
    CHECK(r.n_nearest == 3);
}

TEST_CASE("phase residual reconstruction invariant") {
    const double actions[] = {0.0, 0.1, -4.0, 17.3, 1e4 + 0.77, -123.456};
    const double deltas[] = {0.0, 0.5, -2.9, 3.0};
    for (double s : actions)
        for (double d : deltas) {
            auto r = phase_residual(s, d);
            CHECK(r.omega >= 0.0);
            CHECK(r.omega <= M_PI);
            CHECK(std::fabs(std::fabs(s - d - kTwoPi * r.n_nearest) - r.omega) <= 1e-12);
        }
}

TEST_CASE("phase residual 2*pi periodicity") {
    for (double s : {0.3, -1.7, 2.0, 3.1}) {
        const double base = phase_residual(s).omega;
        for (int k : {-5, -1, 1, 5}) {
            CHECK(std::fabs(phase_residual(s + kTwoPi * k).omega - base) <= 1e-12);
        }
    }
}

TEST_CASE("residual is continuous and maximal at omega = 0 distance") {
    // omega grows linearly away from a multiple up to pi, then folds back.
    CHECK(phase_residual(0.1).omega < phase_residual(0.2).omega);
    CHECK(phase_residual(M_PI - 0.1).omega > phase_residual(M_PI + 0.2 - kTwoPi).omega);
}

TEST_CASE("single-trajectory physicality") {
    PhaseState id(0.0);
    CHECK(is_physical(kTwoPi, id, id));
    CHECK(is_physical(4 * kTwoPi, id, id));
    CHECK_FALSE(is_physical(kTwoPi + 0.01, id, id));
    // Tolerance widens the band.
    CHECK(is_physical(kTwoPi + 0.01, id, id, 0.02));

    // Gauge offset shifts the admissible set: need S = delta (mod 2*pi).
    PhaseState a(0.25), b(0.75);
    CHECK(is_physical(0.5, a, b));
    CHECK(is_physical(0.5 + kTwoPi, a, b));
    CHECK_FALSE(is_physical(0.5 + 0.3, a, b));
}

TEST_CASE("physicality is invariant under a global gauge shift") {
    const double s = 0.5;
    for (double shift : {0.0, 0.7, 3.9, 6.0}) {
        PhaseState a(0.25 + shift), b(0.75 + shift);
        CHECK(is_physical(s, a, b) == true);
        CHECK(is_physical(s + 0.3, a, b) == false);
    }
}

TEST_CASE("pair physicality and swap antisymmetry") {
    CHECK(pair_is_physical(3 * kTwoPi + 1.0, kTwoPi + 1.0, 0.0));
    CHECK_FALSE(pair_is_physical(3 * kTwoPi + 1.0, kTwoPi + 0.6, 0.0));
    // Mismatch absorbed by delta_kappa.
    CHECK(pair_is_physical(3 * kTwoPi + 1.0, kTwoPi + 0.6, 0.4));
    // Swapping branches flips the sign of delta_kappa.
    const double s1 = 5.1, s2 = 2.3, dk = s1 - s2 - kTwoPi * 0.0;
    CHECK(pair_is_physical(s1, s2, dk));
    CHECK(pair_is_physical(s2, s1, -dk));
}

TEST_CASE("phase state composition") {
    PhaseState a(1.0), b(2.0);
    CHECK(a.compose(b).angle() == doctest::Approx(3.0).epsilon(1e-15));
    // Wraps mod 2*pi and stays in [0, 2*pi).
    PhaseState c(5.0), d(4.0);
    CHECK(c.compose(d).angle() == doctest::Approx(9.0 - kTwoPi).epsilon(1e-12));
    CHECK(c.compose(c.inverse()).angle() == doctest::Approx(0.0));
    PhaseState neg(-0.5);
    CHECK(neg.angle() == doctest::Approx(kTwoPi - 0.5).epsilon(1e-12));
}

TEST_CASE("quantized radii ladders") {
    ParticleParams p_pi{1.0, M_PI};
    auto r = quantized_radii(p_pi, 2);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(4.0).epsilon(1e-15));

    ParticleParams p_2pi{1.0, kTwoPi};
    auto r2 = quantized_radii(p_2pi, 3);
    REQUIRE(r2.size() == 3);
    CHECK(r2[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2[2] == doctest::Approx(3.0).epsilon(1e-15));

    ParticleParams p_one{1.0, 1.0};
    auto r3 = quantized_radii(p_one, 1);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0] == doctest::Approx(kTwoPi).epsilon(1e-15));

    // Spacing equals the wavelength.
    CHECK(r2[1] - r2[0] == doctest::Approx(p_2pi.wavelength()).epsilon(1e-12));
}

TEST_CASE("neighborhood density") {
    DensityParams params{1.0, 1.0, 0.1};
    // omega = 0: 1/(a*xi^2) = 100.
    CHECK(neighborhood_density(0.0, params) == doctest::Approx(100.0).epsilon(1e-12));
    // Strictly decreasing in omega, positive everywhere on [0, pi].
    double prev = neighborhood_density(0.0, params);
    for (double w = 0.1; w <= M_PI; w += 0.1) {
        const double d = neighborhood_density(w, params);
        CHECK(d > 0.0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK_THROWS_AS(neighborhood_density(0.0, DensityParams{0.0, 1.0, 0.1}), gm::error);
    CHECK_THROWS_AS(neighborhood_density(-0.1, params), gm::error);
}
