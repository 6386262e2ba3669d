#pragma once

#include <optional>
#include <stdexcept>

#include "pfdlab/grid.hpp"
#include "pfdlab/profiles.hpp"

namespace pfdlab {

// p = 3/2 (gamma = 0): the paper's entropy is not defined; nothing is substituted.
struct EntropyUndefinedError : std::domain_error {
    using std::domain_error::domain_error;
};

// A functional's tail integrand was measured non-integrable on the grid.
struct NonIntegrableTailError : std::domain_error {
    double measured_tail_power;
    NonIntegrableTailError(const std::string& what, double power)
        : std::domain_error(what), measured_tail_power(power) {}
};

struct FunctionalValue {
    double value = 0;
    double grid_part = 0;
    double tail_part = 0;
    double tail_power = 0;  // fitted integrand exponent used for the completion
};

// Relative entropy  E[v|V_D] = 1/(g(g-1)) int { v^g - V^g - g V^{g-1}(v-V) } dy.
FunctionalValue entropy_detailed(const RadialGridFunction& v, double D);
double entropy(const RadialGridFunction& v, double D);

// Relative Fisher information (radial form) with Phi(s) = |s|^{p-2} s:
//  I[v|V_D] = 1/|g-1|^p int v (d_r v^{g-1} - d_r V^{g-1}) (Phi(d_r v^{g-1}) - Phi(d_r V^{g-1})).
FunctionalValue fisher_detailed(const RadialGridFunction& v, double D);
double fisher(const RadialGridFunction& v, double D);

struct LinearizedFunctionals {
    double lin_entropy = 0;       // E[v]   = 1/2 int (v-V)^2 V^{g-2}
    double lin_fisher_gamma = 0;  // I^(eta)_gamma[v]
    double lin_fisher = 0;        // I^(eta)[v]
    double eta = 0;
};
LinearizedFunctionals lin_functionals(const RadialGridFunction& v, double D, double eta);

struct EntropyReport {
    double entropy = 0, lin_entropy = 0;
    double fisher = 0, lin_fisher_gamma = 0, lin_fisher = 0;
    double eta = 0;
    bool entropy_finite = false, fisher_finite = false, linear_finite = false;
};
EntropyReport entropy_report(const RadialGridFunction& v, double D, double eta);

// Sharpened comparison constants of the good-range Fisher estimate:
//   c_lower = (1-eps)^a (p-1) / (1+eps)^{2-p},  c_upper = (1+eps)^a (p-1)/(1-eps)^{2-p},
//   a = 1 + (1-gamma)(2-p);  both -> (p-1) as eps -> 0.
struct FisherComparison {
    double c_lower = 0, c_upper = 0, a = 0;
};
FisherComparison fisher_comparison_constants(const Params& params, double eps);

// kappa constants of the linearized-Fisher bound I^(eta) <= k1 I^(eta)_gamma + k2 E,
// with C_{p,N} = (N+p-gamma-1)/(1-gamma)^{2-p}.
struct KappaConstants {
    double kappa1 = 0, kappa2 = 0, C_pN = 0;
};
KappaConstants kappa_constants(const Params& params, double eps);

// Closed form of div( y|y|^{1-g} (eta + (1-g)|y|^{2-g})^{p-2} ), radial argument.
// (The bracket coefficient is N, verified against finite differences.)
double linearization_divergence(double r, double eta, const Params& params);

struct CsiszarKullback {
    double lhs = 0;   // ||v - V_D||_1^2
    double rhs = 0;   // 8 ||V_D^{2-g}||_1 E[v|V_D]
    bool holds = false;
};
CsiszarKullback csiszar_kullback_check(const RadialGridFunction& v, double D,
                                       double mass_tol = 1e-6);

// || (v - ref)/ref ||_{L^q}; q = infinity() for the sup norm with tail-power
// extrapolation. Rejects finite q <= N(p-1)/p.
double relative_error(const RadialGridFunction& v, const BarenblattSpec& reference, double q);
double relative_error_vs_VD(const RadialGridFunction& v, double D, double q);

struct GnInterpolation {
    double lhs = 0;    // ||f||_inf
    double rhs = 0;    // ||grad f||_inf^{N/(N+1)} ||f||_1^{1/(N+1)}   (C_N not included)
    double ratio = 0;  // lhs / rhs, the fitted constant
};
GnInterpolation gn_interpolation_check(const RadialGridFunction& f);

// Solve  int (v - V_D) dy = 0  for D by bisection on the grid quadrature.
double match_mass_D(const RadialGridFunction& v, double D_lo = 1e-3, double D_hi = 1e3);

// Fill entropy/fisher/sup_rel_err per snapshot (entropy errors leave nullopt).
void attach_diagnostics(Trajectory& traj, double D);

}  // namespace pfdlab
