#pragma once

#include <utility>
#include <vector>

#include "pfdlab/exponents.hpp"
#include "pfdlab/grid.hpp"
#include "pfdlab/solver.hpp"

namespace pfdlab {

enum class FitMode { ExpInTau, PowerInT };

struct RateFit {
    std::vector<std::pair<double, double>> series;
    double fitted_rate = 0;  // decay rate (exp mode) or power-law exponent (power mode)
    double intercept = 0;
    double r_squared = 0;
    double window_lo = 0, window_hi = 0;
    FitMode mode = FitMode::ExpInTau;
};

// Least squares of log(value) against time (exp) or log(time) (power).
// Exp mode reports the decay rate sigma in value ~ C e^{-sigma t} (sigma > 0 for
// decaying series); power mode reports the signed exponent.
RateFit fit_rate(const std::vector<std::pair<double, double>>& series, FitMode mode,
                 double window_lo, double window_hi);

struct GhpData {
    double M1 = 0, M2 = 0;    // bracketing masses, M1 <= M <= M2
    double tau1 = 0, tau2 = 0;  // bracketing time shifts
};

struct CylinderThresholds {
    double eps = 0;
    double rho_under = 0, rho_over = 0;  // spatial thresholds (units of t^beta)
    double T_under = 0, T_over = 0;      // time thresholds
    double c = 0;                        // (b2/b1) M^{(2-p) beta p'}
    double eps_under_max = 0, eps_over_max = 0;  // admissible range bounds
};

// Closed-form inner/outer cylinder thresholds of the outer-region propositions.
CylinderThresholds cylinder_thresholds(double eps, double M, const GhpData& ghp,
                                       const Params& params);

struct ShiftedRates {
    RateFit time_shift;   // expected exponent -1
    RateFit space_shift;  // expected exponent -beta
};

// Fitted power-law exponents of sup relative errors of time/space shifted
// Barenblatt solutions against the unshifted one. Rejects T = 0 / x0 = 0.
ShiftedRates shifted_barenblatt_rates(const Params& params, double M, double T, double x0);

struct RateExperimentReport {
    bool stationary = false;
    double D = 0;  // mass-matched profile parameter used for the functionals
    RateFit l1_rate, sup_rate, entropy_rate;
    double transfer_factor = 0;  // (2-p)/(N+1)
    bool transfer_ok = false;    // sup rate >= l1 rate * factor * (1 - 0.2)
    Trajectory trajectory;
};

// Full pipeline: evolve the rescaled problem, track L1 distance / sup relative
// error / entropy against the mass-matched V_D, fit exponential rates, check the
// L1 -> relative-error transfer factor.
RateExperimentReport relative_error_rate_experiment(const RadialGridFunction& v0,
                                                    const SolverConfig& config, double tau_end,
                                                    double fit_lo = 1.0, double fit_hi = -1.0);

struct WeakGronwallResult {
    bool hypothesis_ever_held = false;
    bool conclusion_holds = true;  // on the set where the hypothesis held
    int hypothesis_points = 0;
};

// Discrete probe of the Gronwall-type lemma: wherever s int_t^inf u <= u(t)
// holds on the sampled series, u(t) <= (e^s/s) u(0) e^{-s t} must hold too.
WeakGronwallResult weak_gronwall_check(const std::vector<std::pair<double, double>>& series,
                                       double s);

}  // namespace pfdlab
