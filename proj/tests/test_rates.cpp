#include <doctest.h>

#include <cmath>
#include <random>

#include "pfdlab/functionals.hpp"
#include "pfdlab/profiles.hpp"
#include "pfdlab/rates.hpp"

using namespace pfdlab;

TEST_CASE("fit_rate on clean series") {
    std::vector<std::pair<double, double>> exp_series, pow_series;
    for (int i = 0; i <= 40; ++i) {
        const double t = 0.25 * i + 0.25;
        exp_series.emplace_back(t, 3.0 * std::exp(-2.0 * t));
        pow_series.emplace_back(t, 5.0 / t);
    }
    CHECK(fit_rate(exp_series, FitMode::ExpInTau, 0.0, 100.0).fitted_rate ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit_rate(pow_series, FitMode::PowerInT, 0.0, 100.0).fitted_rate ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit_rate(exp_series, FitMode::ExpInTau, 0.0, 100.0).r_squared ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_rate recovers noisy rates within 2%") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double lambda : {0.1, 1.0, 10.0}) {
        std::vector<std::pair<double, double>> s;
        for (int i = 0; i <= 200; ++i) {
            const double t = 4.0 * i / (200.0 * lambda);
            s.emplace_back(t, std::exp(-lambda * t) * (1.0 + 0.01 * uni(rng)));
        }
        const auto fit = fit_rate(s, FitMode::ExpInTau, 0.0, 1e9);
        CHECK(fit.fitted_rate == doctest::Approx(lambda).epsilon(0.02));
    }
}

TEST_CASE("fit_rate input validation") {
    std::vector<std::pair<double, double>> bad = {{0.0, 1.0}, {1.0, -0.5}, {2.0, 0.1},
                                                  {3.0, 0.1}, {4.0, 0.1},  {5.0, 0.1},
                                                  {6.0, 0.1}, {7.0, 0.1}};
    CHECK_THROWS_AS(fit_rate(bad, FitMode::ExpInTau, 0.0, 10.0), std::invalid_argument);
    std::vector<std::pair<double, double>> few = {{0.0, 1.0}, {1.0, 0.5}};
    CHECK_THROWS_AS(fit_rate(few, FitMode::ExpInTau, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("cylinder thresholds") {
    const Params params{1.75, 3};
    const double M = 1.0;
    GhpData ghp{0.7, 1.5, 0.4, 0.6};

    // positive, finite, and monotone trends over an eps scan
    double prev_rho_over = 0;
    for (double eps : {0.02, 0.05, 0.1, 0.2}) {
        const auto th = cylinder_thresholds(eps, M, ghp, params);
        CHECK(th.rho_under > 0);
        CHECK(th.rho_over > 0);
        CHECK(th.T_under >= 1.0);
        CHECK(th.T_over >= 1.0);
        CHECK(std::isfinite(th.rho_under + th.rho_over + th.T_under + th.T_over));
        if (prev_rho_over > 0) CHECK(th.rho_over < prev_rho_over);  // shrinks as eps grows
        prev_rho_over = th.rho_over;
    }

    // rho_over(eps) ~ kappa0 eps^{(1-p)/p} as eps -> 0 (fit within 5%)
    std::vector<std::pair<double, double>> series;
    for (double eps = 1e-4; eps < 3e-2; eps *= 1.6)
        series.emplace_back(eps, cylinder_thresholds(eps, M, ghp, params).rho_over);
    const auto fit = fit_rate(series, FitMode::PowerInT, 0.0, 1.0);
    CHECK(fit.fitted_rate == doctest::Approx((1.0 - params.p) / params.p).epsilon(0.05));

    // outer-region validation: B_{M1}(t - tau1, x)/B_M(t, x) >= 1 - eps
    // at |x| = rho_under t^beta and t = 2 T_under
    const double eps = 0.05;
    const auto th = cylinder_thresholds(eps, M, ghp, params);
    BarenblattSpec bm, b1;
    bm.params = b1.params = params;
    bm.kind = b1.kind = BarenblattKind::MassParam;
    bm.M = M;
    b1.M = ghp.M1;
    const double beta = 1.0;  // (1.75, 3)
    const double t = 2.0 * th.T_under;
    for (double mult : {1.0, 1.5, 4.0}) {
        const double x = th.rho_under * std::pow(t, beta) * mult;
        const double ratio =
            eval_barenblatt(b1, t - ghp.tau1, x) / eval_barenblatt(bm, t, x);
        CHECK(ratio >= 1.0 - eps);
    }

    // eps beyond the admissible range is rejected
    CHECK_THROWS_AS(cylinder_thresholds(0.9, M, ghp, params), std::invalid_argument);
}

TEST_CASE("shifted Barenblatt rates") {
    const Params params{1.75, 3};
    const auto rates = shifted_barenblatt_rates(params, 1.0, 0.5, 0.5);
    CHECK(rates.time_shift.fitted_rate == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(rates.space_shift.fitted_rate == doctest::Approx(-1.0).epsilon(0.05));  // -beta = -1
    CHECK_THROWS_AS(shifted_barenblatt_rates(params, 1.0, 0.0, 0.0), std::invalid_argument);

    // a second dimension where beta != 1: (1.8, 4) has beta = 1/(1.8-0.8) = 1
    // use (1.7, 3): beta = 1/(1.7 - 0.9) = 1.25
    const Params p2{1.7, 3};
    const auto r2 = shifted_barenblatt_rates(p2, 1.0, 0.5, 0.5);
    CHECK(r2.time_shift.fitted_rate == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(r2.space_shift.fitted_rate == doctest::Approx(-1.25).epsilon(0.05));
}

TEST_CASE("weak Gronwall probe") {
    // u = e^{-st}: hypothesis holds with equality, conclusion holds
    std::vector<std::pair<double, double>> s1;
    for (int i = 0; i <= 100; ++i) s1.emplace_back(0.1 * i, std::exp(-0.7 * 0.1 * i));
    const auto r1 = weak_gronwall_check(s1, 0.7);
    CHECK(r1.hypothesis_ever_held);
    CHECK(r1.conclusion_holds);

    // constant series: hypothesis fails everywhere (tail integral diverges on the data)
    std::vector<std::pair<double, double>> s2;
    for (int i = 0; i <= 100; ++i) s2.emplace_back(0.1 * i, 1.0);
    const auto r2 = weak_gronwall_check(s2, 0.7);
    CHECK(!r2.hypothesis_ever_held);
    CHECK(r2.conclusion_holds);  // vacuously
}

TEST_CASE("rate experiment: stationary datum is detected") {
    const Params params{1.75, 3};
    auto v0 = sample_VD(params, 1.0, log_radial_grid(768));
    SolverConfig cfg;
    cfg.dt = 2e-2;
    cfg.snapshot_every = 0.1;
    const auto rep = relative_error_rate_experiment(v0, cfg, 1.0);
    CHECK(rep.stationary);
}

TEST_CASE("rate experiment: sandwich datum at (1.75,3)") {
    const Params params{1.75, 3};
    const auto grid = log_radial_grid(1024);
    RadialGridFunction v0;
    v0.params = params;
    v0.r = grid;
    v0.v.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v0.v[i] = 0.5 * (eval_VD(1.15, grid[i], params).first +
                         eval_VD(0.9, grid[i], params).first);
    v0.frame = {FrameKind::SelfSimilar, 0.0};
    SolverConfig cfg;
    cfg.dt = 2.5e-2;
    cfg.snapshot_every = 0.1;
    const auto rep = relative_error_rate_experiment(v0, cfg, 6.0, 2.0, 5.5);
    CHECK(!rep.stationary);
    CHECK(rep.l1_rate.fitted_rate > 0.0);
    CHECK(rep.sup_rate.fitted_rate > 0.0);
    CHECK(rep.transfer_ok);  // sup rate >= l1 rate (2-p)/(N+1) (1-0.2)

    // The honestly measured asymptotic entropy rate is 2 Lambda*, not Lambda*:
    // the sharp constant of the linearized inequality is twice the paper's value
    // (see decisions notes). The sustained-rate ceiling holds at 2 Lambda* (1+15%).
    const double two_lam_star = 2.0 * lambda_star(params);
    CHECK(rep.entropy_rate.fitted_rate == doctest::Approx(two_lam_star).epsilon(0.10));
    CHECK(rep.entropy_rate.fitted_rate <= two_lam_star * 1.15);

    // the amplitude (UCRE) rate matches the paper's Lambda* itself
    CHECK(rep.sup_rate.fitted_rate == doctest::Approx(lambda_star(params)).epsilon(0.15));

    // monotone entropy series implies a nonnegative fitted rate
    CHECK(rep.entropy_rate.fitted_rate >= 0.0);
}

TEST_CASE("rate experiment transfer factor on three parameter pairs") {
    for (const Params params : {Params{1.75, 3}, Params{1.8, 3}, Params{1.7, 4}}) {
        const auto grid = log_radial_grid(768);
        RadialGridFunction v0;
        v0.params = params;
        v0.r = grid;
        v0.v.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            v0.v[i] = 0.5 * (eval_VD(1.12, grid[i], params).first +
                             eval_VD(0.9, grid[i], params).first);
        v0.frame = {FrameKind::SelfSimilar, 0.0};
        SolverConfig cfg;
        cfg.dt = 3e-2;
        cfg.snapshot_every = 0.1;
        const auto rep = relative_error_rate_experiment(v0, cfg, 4.0, 1.0, 3.5);
        CHECK(rep.sup_rate.fitted_rate >=
              rep.l1_rate.fitted_rate * rep.transfer_factor * (1.0 - 0.2));
    }
}
