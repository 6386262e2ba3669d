#include <doctest.h>

#include <cmath>

#include "pfdlab/profiles.hpp"
#include "pfdlab/solver.hpp"
#include "pfdlab/transform.hpp"

using namespace pfdlab;

TEST_CASE("parameter correspondence") {
    // round trip (p,N) -> (m,n,frak_a) -> (p,N)
    for (const Params params : {Params{1.75, 3}, Params{1.3, 4}, Params{1.5, 6}}) {
        const auto c = transform_constants(params);
        CHECK(c.frak_a + c.n == doctest::Approx(params.N).epsilon(1e-14));
        const auto back = params_of_fde(c.m, c.n);
        CHECK(back.p == doctest::Approx(params.p).epsilon(1e-14));
        CHECK(back.N == params.N);
    }
    // p = p_Y: n = N, frak_a = 0
    {
        const int N = 5;
        const auto c = transform_constants({p_Y(N), N});
        CHECK(c.n == doctest::Approx(N).epsilon(1e-13));
        CHECK(c.frak_a == doctest::Approx(0.0).epsilon(0).scale(1e-12));
    }
    // p = p_c: n = N + 1, frak_a = -1
    {
        const int N = 4;
        const auto c = transform_constants({p_c(N), N});
        CHECK(c.n == doctest::Approx(N + 1.0).epsilon(1e-13));
        CHECK(c.frak_a == doctest::Approx(-1.0).epsilon(1e-12));
    }
    // Dc at p = 3/2 equals (2/3)^{-4} = 81/16
    CHECK(transform_constants({1.5, 3}).D_const ==
          doctest::Approx(81.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("closed-form Barenblatt correspondence (good range)") {
    // -d_r B_M(t,r) = Dc rho^{2/(m+1)} frakB_{C M}(t, rho) on a 64-point sample
    const Params params{1.75, 3};
    const auto c = transform_constants(params);
    BarenblattSpec spec;
    spec.params = params;
    spec.kind = BarenblattKind::MassParam;
    spec.M = 1.0;
    const double D = D_of_mass(params, spec.M);
    const double beta = 1.0 / (params.p - params.N * (2.0 - params.p));

    double worst = 0;
    for (int it_ = 0; it_ < 8; ++it_) {
        const double t = 0.25 * (it_ + 1);
        for (int jr = 0; jr < 8; ++jr) {
            const double r = std::pow(10.0, -2.0 + 4.0 * jr / 7.0);
            const double R = std::pow(t / beta, beta);
            // closed form of -d_r B: R^{-N-1} (r/R)^{1/(p-1)} V_D(r/R)^{1/(p-1)}
            const double y = r / R;
            const double V = eval_VD(D, y, params).first;
            const double lhs = std::pow(R, -params.N - 1.0) *
                               std::pow(y, 1.0 / (params.p - 1.0)) *
                               std::pow(V, 1.0 / (params.p - 1.0));
            const double rho = std::pow(r, params.p / (2.0 * (params.p - 1.0)));
            const double rhs = c.D_const * std::pow(r, 1.0 / (params.p - 1.0)) *
                               eval_fde_barenblatt(c.frakC * spec.M, t, rho, c.m, c.n, params.N);
            worst = std::max(worst, std::abs(lhs / rhs - 1.0));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("closed-form correspondence below p_c") {
    // -d_r B_{D,T} = Dc rho^{2/(m+1)} frakB_{Cbar D, T}(t, rho), with the derived Cbar
    for (const Params params : {Params{1.3, 3}, Params{1.45, 5}}) {
        const auto c = transform_constants(params);
        const double D = 0.8, T = 1.0, t = 0.35;
        const double beta = 1.0 / (params.p - params.N * (2.0 - params.p));
        const double R = std::pow((T - t) / std::abs(beta), beta);
        double worst = 0;
        for (int jr = 0; jr < 16; ++jr) {
            const double r = std::pow(10.0, -2.0 + 4.0 * jr / 15.0);
            const double y = r / R;
            const double V = eval_VD(D, y, params).first;
            const double lhs = std::pow(R, -params.N - 1.0) *
                               std::pow(y, 1.0 / (params.p - 1.0)) *
                               std::pow(V, 1.0 / (params.p - 1.0));
            const double rho = std::pow(r, params.p / (2.0 * (params.p - 1.0)));
            const double rhs = c.D_const * std::pow(r, 1.0 / (params.p - 1.0)) *
                               eval_fde_pseudo(c.frakC_bar * D, T, t, rho, c.m, c.n);
            worst = std::max(worst, std::abs(lhs / rhs - 1.0));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("u_to_phi on closed forms") {
    const Params params{1.75, 3};
    const auto c = transform_constants(params);
    const auto grid = log_radial_grid(2048);
    BarenblattSpec spec;
    spec.params = params;
    spec.kind = BarenblattKind::MassParam;
    spec.M = 1.0;
    auto u = sample_barenblatt(spec, 1.0, grid);
    const auto phi = u_to_phi(u);

    // matches frakB_{C M}(1, rho) within stencil tolerance away from the fringes
    double worst = 0;
    for (std::size_t i = 8; i + 8 < phi.size(); ++i) {
        const double ref = eval_fde_barenblatt(c.frakC, 1.0, phi.r[i], c.m, c.n, params.N);
        if (ref < 1e-12) continue;
        worst = std::max(worst, std::abs(phi.v[i] - ref) / ref);
    }
    CHECK(worst < 1e-6);

    // constant u maps to zero
    RadialGridFunction constant;
    constant.params = params;
    constant.r = grid;
    constant.v.assign(grid.size(), 0.7);
    constant.frame = {FrameKind::Original, 1.0};
    const auto z = u_to_phi(constant);
    CHECK(z.sup() == doctest::Approx(0.0).epsilon(0).scale(1e-12));

    // radially increasing data are rejected
    RadialGridFunction bad = constant;
    for (std::size_t i = 0; i < grid.size(); ++i) bad.v[i] = grid[i] / (1.0 + grid[i]);
    CHECK_THROWS_AS(u_to_phi(bad), std::invalid_argument);
}

TEST_CASE("phi_to_u inverts u_to_phi") {
    const Params params{1.75, 3};
    const auto grid = log_radial_grid(2048);
    BarenblattSpec spec;
    spec.params = params;
    spec.kind = BarenblattKind::MassParam;
    spec.M = 1.0;
    auto u = sample_barenblatt(spec, 1.0, grid);
    const auto phi = u_to_phi(u);
    const auto back = phi_to_u(phi, params);
    // grids coincide by construction of the induced maps
    double worst = 0;
    for (std::size_t i = 0; i < back.size(); ++i)
        worst = std::max(worst, std::abs(back.v[i] - u.v[i]));
    CHECK(worst <= 1e-6 * u.sup());

    // zero maps to zero
    RadialGridFunction zphi;
    zphi.params = params;
    zphi.r = phi.r;
    zphi.v.assign(phi.r.size(), 0.0);
    zphi.frame = phi.frame;
    CHECK(phi_to_u(zphi, params).sup() == 0.0);
}

TEST_CASE("dual-solver equivalence residual refines") {
    const Params params{1.4, 3};
    const auto c = transform_constants(params);
    double res[2];
    for (int k = 0; k < 2; ++k) {
        const auto grid = log_radial_grid(512u << k, 1e-3, 1e2);
        BarenblattSpec spec;
        spec.params = params;
        spec.kind = BarenblattKind::FreeParam;
        spec.D = 1.0;
        spec.T = 4.0;
        auto u0 = sample_barenblatt(spec, 0.0, grid);
        SolverConfig cfg;
        cfg.dt = 2e-4 / (1 << (2 * k));
        cfg.snapshot_every = 0.02;
        const double t_end = 0.04;
        auto u_traj = evolve_cple(u0, cfg, t_end);
        REQUIRE(u_traj.completed);
        auto phi0 = u_to_phi(u0);
        auto phi_traj = evolve_wfde(phi0, c.m, c.n, cfg, t_end, false);
        REQUIRE(phi_traj.completed);
        res[k] = equivalence_residual(u_traj, phi_traj).max_discrepancy;
    }
    CHECK(res[0] / res[1] >= 3.0);
}
