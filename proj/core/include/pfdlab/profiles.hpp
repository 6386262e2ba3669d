#pragma once

#include <utility>

#include "pfdlab/exponents.hpp"
#include "pfdlab/grid.hpp"

namespace pfdlab {

// ---- Barenblatt constants ------------------------------------------------

// b2 = (2-p)/p * (p - N(2-p))^{-1/(p-1)}; real and positive only for p > p_c.
double b2_const(const Params& params);

// b1: unique positive root of  int_{R^N} (b1 + b2|x|^{p'})^{-(p-1)/(2-p)} dx = 1.
// Bisection against half-line quadrature; cached per (p,N).
double b1_const(const Params& params, double rel_tol = 1e-10);

// M_star = beta^{N/p} b1^{(p-1)/(beta p (2-p))} = || V_1 ||_L1.
double m_star(const Params& params);

// D(M) = beta^{N beta (2-p)/(p-1)} b1 / M^{p beta (2-p)/(p-1)} (good range).
double D_of_mass(const Params& params, double M);

// Lebesgue mass of V_D: M_star * D^{(p-1)(N/p - 1/(2-p))} (good range).
double mass_of_VD(const Params& params, double D);

// ---- Profiles --------------------------------------------------------------

// V_D(r) = (D + (2-p)/p r^{p/(p-1)})^{-(p-1)/(2-p)} and its radial derivative
// dV/dr = -r^{1/(p-1)} V^{1/(p-1)}.
std::pair<double, double> eval_VD(double D, double r, const Params& params);

enum class BarenblattKind { MassParam, FreeParam, Stationary };

// Closed-form profile descriptor. MassParam needs p >= p_c, FreeParam p <= p_c.
struct BarenblattSpec {
    Params params{};
    BarenblattKind kind = BarenblattKind::Stationary;
    double M = 1.0;    // MassParam
    double D = 1.0;    // FreeParam / Stationary
    double T = 1.0;    // FreeParam (extinction time below p_c, free shift at p_c)
    double ell = 1.0;  // time-rescaling parameter, used only at p = p_c

    void validate() const;
};

// Regime-dependent scale R_T:
//   ((t+T)/beta)^beta        for p_c < p < 2
//   ((T-t)_+/|beta|)^beta    for p < p_c   (domain [0,T))
//   exp(ell (T+t))           for p = p_c
struct FrameMap {
    Params params{};
    double T = 0.0;
    double ell = 1.0;

    double scale(double t) const;       // R_T(t)
    double tau_of_t(double t) const;    // ln(R_T(t)/R_T(0))
    double t_of_tau(double tau) const;  // inverse
};

// B(t, r) for the spec'd profile. MassParam evaluates the fundamental solution
// at its own time t (so that V_{D(M)} = R^N B(t+beta, .)); FreeParam the
// pseudo-Barenblatt B_{D,T}; Stationary just V_D.
double eval_barenblatt(const BarenblattSpec& spec, double t, double r);

RadialGridFunction sample_barenblatt(const BarenblattSpec& spec, double t,
                                     const std::vector<double>& r);
RadialGridFunction sample_VD(const Params& params, double D, const std::vector<double>& r);

// ---- Weighted fast-diffusion profiles (artificial dimension n) ------------

// Stationary profile of the rescaled WFDE: U_D(x) = (D + (1-m)/(2m) |x|^2)^{-1/(1-m)}.
double eval_frak_U(double D, double rho, double m);

// a2 = (1-m) theta / (2m); a1 from the weighted normalization
// int (a1 + a2 |x|^2)^{-1/(1-m)} |x|^{-frak_a} dx = 1 (good FDE range m > (n-2)/n).
double fde_a2(double m, double n);
double fde_a1(double m, double n, int N, double rel_tol = 1e-10);

// Good-range FDE Barenblatt of weighted mass M (measure |x|^{-frak_a} dx):
//   frakB_M(t, rho) = t^{1/(1-m)} (a1 t^{2 theta} M^{-2 theta(1-m)} + a2 rho^2)^{-1/(1-m)}.
double eval_fde_barenblatt(double M, double t, double rho, double m, double n, int N);

// Pseudo-Barenblatt below/at the critical FDE exponent:
//   frakB_{D,T}(t, rho) = frakR_T(t)^{-n} U_D(rho / frakR_T(t)),
//   frakR_T = ((T-t)_+/|theta|)^theta (m < (n-2)/n), exp(l(T+t)) at m = (n-2)/n.
double eval_fde_pseudo(double D, double T, double t, double rho, double m, double n,
                       double ell = 1.0);

// ---- Integral functionals of grid profiles --------------------------------

struct MassResult {
    double value = 0;       // omega_N * int f r^{N-1-w} dr, tail-completed
    double grid_part = 0;   // contribution of the sampled range
    double tail_part = 0;   // analytic completion beyond the grid
    double tail_power = 0;  // fitted exponent used for the completion
};

// Weighted mass with analytic tail extrapolation. Throws std::domain_error when
// the fitted tail power is not integrable against r^{N-1-w}.
MassResult mass(const RadialGridFunction& f, double weight_power = 0.0);

// ||f||_{X_p} = sup_R R^{p/(2-p)-N} int_{|x|>=R} f dx over grid radii
// (tail-completed); +inf when the tail integral diverges.
double xp_norm(const RadialGridFunction& f);

// Frame changes  v(tau, y) = R_T(t)^N u(t, x),  y = x/R_T(t),  tau = ln R_T(t)/R_T(0).
RadialGridFunction to_selfsimilar(const RadialGridFunction& u, const FrameMap& map);
RadialGridFunction from_selfsimilar(const RadialGridFunction& v, const FrameMap& map);

// Good-range mass normalization  u~(t,x) = (M_target/M) u(t (M_target/M)^{2-p}, x).
// Returns the rescaled datum and reports the time dilation factor.
struct MassRescaleResult {
    RadialGridFunction datum;
    double time_dilation = 1.0;
};
MassRescaleResult mass_rescale(const RadialGridFunction& u, double M_target);

}  // namespace pfdlab
