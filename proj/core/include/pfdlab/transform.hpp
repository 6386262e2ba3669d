#pragma once

#include "pfdlab/exponents.hpp"
#include "pfdlab/grid.hpp"

namespace pfdlab {

// Radial correspondence between p-Laplace and weighted fast-diffusion solutions:
//   -d_r u(t,r) = Dc rho^{2/(m+1)} Phi(t,rho),  r = rho^{2m/(m+1)}.
struct TransformConstants {
    double m = 0;          // p - 1
    double n = 0;          // 2 + 2N(p-1)/p
    double frak_a = 0;     // N - n
    double D_const = 0;    // Dc = (2m/(m+1))^{2/(m-1)}
    double frakC = 0;      // mass factor: pN / (2(p-1) Dc)
    double frakC_bar = 0;  // D factor below p_c: ((1+m)/(2m))^{2 theta + 1}
    double theta = 0;      // 1/(2 - n(1-m))
};

TransformConstants transform_constants(const Params& params);

// Inverse parameter map (m,n) -> (p,N); injective since frak_a + n = N.
Params params_of_fde(double m, double n);

// Phi(rho) = -d_r u(r) / (Dc rho^{2/(m+1)}) on the induced grid rho = r^{p/(2(p-1))}.
// The rho=0 node is filled by a quadratic fit on the first three positive nodes.
// Throws when -d_r u goes negative beyond tolerance (input not radially decreasing).
RadialGridFunction u_to_phi(const RadialGridFunction& u, double monotone_tol = 1e-9);

// ubar(r) = Dc int_r^inf Phi(t, s^{p/(2(p-1))}) s^{1/(p-1)} ds
//         = Dc (2(p-1)/p) int_{rho(r)}^inf Phi(sigma) sigma dsigma,
// with closed-form tail completion at the Barenblatt exponent -2/(2-p).
RadialGridFunction phi_to_u(const RadialGridFunction& phi, const Params& params);

struct EquivalenceReport {
    std::vector<double> times;
    std::vector<double> sup_rel_discrepancy;  // per shared snapshot
    double max_discrepancy = 0;
};

// Per-snapshot sup relative discrepancy between u_to_phi(u(t)) and Phi(t).
EquivalenceReport equivalence_residual(const Trajectory& u_traj, const Trajectory& phi_traj,
                                       double stamp_tol = 1e-9);

}  // namespace pfdlab
