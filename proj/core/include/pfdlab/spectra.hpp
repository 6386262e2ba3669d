#pragma once

#include <vector>

#include "pfdlab/exponents.hpp"
#include "pfdlab/grid.hpp"

namespace pfdlab {

// P1 discretization of the radial Hardy-Poincare quotient
//   Lam_opt int g^2 w_m ds <= int g'^2 w_s ds,   int g w_m ds = 0,
//   w_s = s^{2N(p-1)/p-1}(1+s^2)^{-(p-1)/(2-p)},  w_m = s^{2N(p-1)/p-1}(1+s^2)^{-1/(2-p)},
// assembled as a symmetric tridiagonal pencil (A, M) by per-cell Gauss quadrature.
struct SpectralProblem {
    std::vector<double> s;                 // log-spaced nodes
    std::vector<double> A_diag, A_off;     // stiffness
    std::vector<double> M_diag, M_off;     // mass

    static SpectralProblem assemble(const Params& params, std::size_t nodes, double s_min,
                                    double s_max);

    // Smallest pencil eigenvalue on { x : 1^T M x = 0 } (constants deflated, they
    // span the kernel of A). Optionally returns the eigenvector.
    double smallest_constrained(std::vector<double>* eigenvector = nullptr,
                                int max_iter = 400) const;
};

struct HpOptimalResult {
    double lambda_opt = 0;          // optimal constant of the s-form inequality
    double lambda_hp_est = 0;       // p lambda_opt / (4(2-p)), comparable to lambda_hp()
    bool essential_estimate = false;  // p <= p_M: extrapolated truncated-domain value
    std::vector<double> domain_sizes;
    std::vector<double> history;      // lambda_opt per domain, before extrapolation
};

// Domain study over s_max in {1e3, 1e4, 1e5}; for p <= p_M the truncated values
// follow a 1/(ln s_max)^2 trend and are extrapolated along it.
HpOptimalResult hp_optimal_constant(const Params& params, std::size_t grid_size = 2048);

// Ground eigenfunction of the constrained problem on the finest domain,
// returned on its s-grid (used for building near-optimal perturbations).
struct GroundMode {
    std::vector<double> s;
    std::vector<double> g;
    double lambda = 0;
};
GroundMode hp_ground_mode(const Params& params, std::size_t grid_size = 2048,
                          double s_max = 1e4);

struct HpGeneralCheck {
    double max_ratio = 0;  // empirical lower bound on C_HP
    int tested = 0;
};

// Prop-style weighted Hardy-Poincare probe on random compactly supported bumps:
//   int |phi - mean|^2 (1+|y|^{p'})^{-1/(2-p)}  vs  int |phi'|^2 |y|^2 (...)^{-1/(2-p)}.
// Requires N < p/((2-p)(p-1)).
HpGeneralCheck hp_general_check(const Params& params, int n_tests = 32, unsigned seed = 1);

// I[v|V_D] / E[v|V_D]; rejects zero entropy.
double rayleigh_quotient(const RadialGridFunction& v, double D);

}  // namespace pfdlab
