#include <doctest.h>

#include <cmath>
#include <random>

#include "pfdlab/exponents.hpp"

using namespace pfdlab;

TEST_CASE("critical exponents: closed-form anchors") {
    // N=3 list: p_Y = 1.2, p_c = 3/2, p_D = 7/4, no p_1/p_2
    const auto t3 = critical_exponents(3);
    CHECK(t3.p_Y == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(t3.p_c == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(t3.p_D == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(!t3.p_1);
    CHECK(!t3.p_2);

    // p_M(3) = (12 + sqrt(24))/10, evaluated in extended precision as the oracle
    const long double pm_oracle = (3.0L * 4.0L + sqrtl(16.0L + 8.0L)) / (2.0L * 5.0L);
    CHECK(t3.p_M == doctest::Approx(static_cast<double>(pm_oracle)).epsilon(1e-15));
    CHECK(t3.p_M == doctest::Approx(1.68990).epsilon(1e-5));

    // N=6: p_1 = 4/3, p_2 = 3/2 = p_Y
    const auto t6 = critical_exponents(6);
    REQUIRE(t6.p_1);
    REQUIRE(t6.p_2);
    CHECK(*t6.p_1 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(*t6.p_2 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(*t6.p_2 == doctest::Approx(t6.p_Y).epsilon(1e-15));

    // N=2: p_Y = 1 is a boundary value, flagged non-admissible; p_c = 4/3
    const auto t2 = critical_exponents(2);
    CHECK(t2.p_Y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(!t2.p_Y_admissible);
    CHECK(t2.p_c == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(critical_exponents(1), std::invalid_argument);
}

TEST_CASE("exponent ordering for N in 2..64") {
    for (int N = 2; N <= 64; ++N) {
        const auto t = critical_exponents(N);
        CHECK(t.p_Y < t.p_c);
        CHECK(t.p_c < t.p_M);
        CHECK(t.p_M < t.p_D);
        CHECK(t.p_D < 2.0);
        if (N >= 6) {
            REQUIRE(t.p_1);
            CHECK(1.0 < *t.p_1);
            CHECK(*t.p_1 <= *t.p_2);
            CHECK(*t.p_2 < t.p_c);
            if (N == 6) CHECK(*t.p_2 == doctest::Approx(t.p_Y).epsilon(1e-15));
        } else {
            CHECK(!t.p_1);
        }
    }
}

TEST_CASE("derived constants") {
    // gamma vanishes exactly at p = 3/2, flagged, independent of N
    for (int N : {2, 3, 7}) {
        const auto t = derived_constants({1.5, N});
        CHECK(t.gamma == 0.0);
        CHECK(t.entropy_undefined);
    }
    // beta infinite exactly at p = p_c
    const auto tc = derived_constants({1.5, 3});
    CHECK(std::isinf(tc.beta));
    CHECK(std::isinf(tc.theta));  // n(1-m) = 2 coincides with p = p_c
    // p = p_Y(4) = 4/3: m = 1/3, n = N = 4, frak_a = 0
    const auto ty = derived_constants({4.0 / 3.0, 4});
    CHECK(ty.m == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ty.n == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(ty.frak_a == doctest::Approx(0.0).epsilon(1e-13));
    // (p,N) = (1.75, 3): beta = 1
    CHECK(derived_constants({1.75, 3}).beta == doctest::Approx(1.0).epsilon(1e-15));

    // sign changes: gamma at 3/2, beta at p_c
    CHECK(derived_constants({1.499, 3}).gamma < 0.0);
    CHECK(derived_constants({1.501, 3}).gamma > 0.0);
    CHECK(derived_constants({1.499, 3}).beta < 0.0);
    CHECK(derived_constants({1.501, 3}).beta > 0.0);

    CHECK_THROWS_AS(derived_constants({2.5, 3}), std::invalid_argument);
    CHECK_THROWS_AS(derived_constants({1.5, 1}), std::invalid_argument);
}

TEST_CASE("regime classification") {
    {
        const auto r = classify_regime({1.75, 3});  // p = p_D(3) exactly: upper cell
        CHECK(r.tag == RegimeTag::GoodPDto2);
        CHECK(r.mass_conserved);
    }
    {
        // p_1(7)/p_2(7) via their defining formula evaluated independently
        const double disc = std::sqrt(49.0 - 42.0 + 1.0);
        const double p1 = 1.5 - 1.0 / 14.0 - disc / 14.0;
        const double p2 = 1.5 - 1.0 / 14.0 + disc / 14.0;
        REQUIRE(1.4 > p1);
        REQUIRE(1.4 < p2);
        const auto r = classify_regime({1.4, 7});
        CHECK(r.tag == RegimeTag::MiddleP1P2);
        CHECK(!r.diff_barenblatt_integrable);
    }
    {
        const auto r = classify_regime({1.3, 3});  // N < 6: everything integrable
        CHECK(r.tag == RegimeTag::VeryFastAboveP2);
        CHECK(r.diff_barenblatt_integrable);
        CHECK(!r.mass_conserved);
    }
    {
        const auto r = classify_regime({1.5, 3});  // p = p_c(3)
        CHECK(r.tag == RegimeTag::CriticalPc);
        CHECK(r.mass_conserved);
    }
    {
        const auto r = classify_regime({1.2, 7});  // below p_1(7) = 1.2265..
        CHECK(r.tag == RegimeTag::VeryFastBelowP1);
        CHECK(r.diff_barenblatt_integrable);
    }

    // integrability flag against the p_1/p_2 interval test, N >= 6
    for (int N : {6, 7, 9, 12}) {
        const auto t = critical_exponents(N);
        for (double p = 1.01; p < 1.995; p += 0.01) {
            const bool flag = classify_regime({p, N}).diff_barenblatt_integrable;
            const bool interval = (p < *t.p_1) || (p > *t.p_2);
            CHECK(flag == interval);
        }
    }
}

TEST_CASE("lambda_star") {
    CHECK(lambda_star({1.75, 3}) == doctest::Approx(1.0).epsilon(1e-15));
    // (1.6, 3) lower branch: 0.7744 / 1.536, assembled by independent arithmetic
    const double num = 1.6 - 3.0 * 0.4 * 0.6;
    CHECK(lambda_star({1.6, 3}) ==
          doctest::Approx(num * num / (4.0 * 1.6 * 0.6 * 0.4)).epsilon(1e-14));
    CHECK(lambda_star({1.6, 3}) == doctest::Approx(0.504166).epsilon(1e-5));
    CHECK_THROWS_AS(lambda_star({1.5, 3}), std::domain_error);
    CHECK_THROWS_AS(lambda_star({1.3, 3}), std::domain_error);

    // right-limit continuity: the lower branch stays bounded and continuous as p -> p_c+
    double prev = lambda_star({1.5 + 1e-3, 3});
    for (double d = 1e-4; d > 1e-9; d /= 10.0) {
        const double cur = lambda_star({1.5 + d, 3});
        CHECK(std::abs(cur - prev) < 0.05);
        prev = cur;
    }
    const double at_pc = (1.5 - 3.0 * 0.5 * 0.5) * (1.5 - 3.0 * 0.5 * 0.5) /
                         (4.0 * 1.5 * 0.5 * 0.5);
    CHECK(prev == doctest::Approx(at_pc).epsilon(1e-4));
}

TEST_CASE("lambda_hp and the rate identity") {
    CHECK(lambda_hp({1.75, 3}) == doctest::Approx(12.0).epsilon(1e-14));  // 0.75/(0.0625*1)

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const int N = 2 + static_cast<int>(uni(rng) * 9);
        const double pc = p_c(N);
        const double p = pc + (2.0 - pc - 2e-3) * uni(rng) + 1e-3;
        const Params params{p, N};
        const double lhs = (2.0 - p) * (2.0 - p) * lambda_hp(params) / (p - 1.0);
        worst = std::max(worst, std::abs(lhs - lambda_star(params)));
    }
    CHECK(worst <= 1e-12);

    // divergence like (2-p)^{-2} (p - N(2-p)) as p -> 2
    const double l1 = lambda_hp({1.999, 3});
    const double l2 = lambda_hp({1.9999, 3});
    CHECK(l2 / l1 == doctest::Approx(100.0).epsilon(0.05));

    CHECK_THROWS_AS(lambda_hp({1.49, 3}), std::domain_error);
}

TEST_CASE("lambda_ess") {
    // numerator vanishes when (n-2)(1-m) = 2
    CHECK(lambda_ess(0.5, 6.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lambda_ess(1.0 / 3.0, 4.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(lambda_ess(0.5, 5.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(lambda_ess(1.2, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_ess(0.5, 1.5), std::invalid_argument);
}
