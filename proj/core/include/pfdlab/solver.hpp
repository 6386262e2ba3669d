#pragma once

#include "pfdlab/grid.hpp"

namespace pfdlab {

enum class Scheme { SemiImplicit, Explicit };
enum class BoundaryCondition { NeumannOriginFarFieldProfileMatch, NeumannOriginZeroFlux };

struct SolverConfig {
    Scheme scheme = Scheme::SemiImplicit;
    double dt = 2e-2;          // time-step cap (adaptive below it)
    double eps_reg = -1.0;     // gradient regularization; negative = auto from the datum
    double tol_newton = 1e-11; // Newton stop on max update / sup(v)
    int max_newton = 30;
    BoundaryCondition boundary = BoundaryCondition::NeumannOriginFarFieldProfileMatch;

    double snapshot_every = 0.1;   // snapshot cadence in the native time variable
    double max_rel_change = 0.05;  // adaptive controller target per step
    double clip_warn = 1e-12;      // log undershoots below -clip_warn * sup
    double clip_abort = 1e-3;      // hard error below -clip_abort * sup

    void validate() const;
};

// d_t u = r^{1-N} d_r ( r^{N-1} Phi_eps(d_r u) ),    Phi_eps(s) = (s^2+eps^2)^{(p-2)/2} s.
Trajectory evolve_cple(const RadialGridFunction& u0, const SolverConfig& config, double t_end);

// d_tau v = r^{1-N} d_r ( r^{N-1} [ Phi_eps(d_r v) + r v ] ), discretized in the
// well-balanced v^{gamma-1} form so every grid-sampled V_D is a discrete steady state.
Trajectory evolve_rcple(const RadialGridFunction& v0, const SolverConfig& config, double tau_end);

// d_t Phi = rho^{1-n} d_rho ( rho^{n-1} [ d_rho Phi^m  (+ rho Phi when rescaled) ] ),
// real-valued artificial dimension n > 2, 0 < m < 1.
Trajectory evolve_wfde(const RadialGridFunction& phi0, double m, double n,
                       const SolverConfig& config, double t_end, bool rescaled);

struct ComparisonReport {
    double max_violation = 0.0;  // max over snapshots and nodes of (low - high)_+
    Trajectory low, high;
};

// Evolves an ordered pair under the rescaled flow and reports order violations.
ComparisonReport comparison_probe(const RadialGridFunction& u0_low,
                                  const RadialGridFunction& u0_high, const SolverConfig& config,
                                  double t_end);

}  // namespace pfdlab
