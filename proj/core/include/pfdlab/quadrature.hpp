#pragma once

#include <functional>
#include <vector>

namespace pfdlab {

// Adaptive Gauss-Kronrod 15(7) on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 48);

// Integral over [0, inf): split at r = 1, the outer part under r = s/(1-s).
// Suits fat-tailed integrands with algebraic decay.
double integrate_halfline(const std::function<double(double)>& f,
                          double rel_tol = 1e-10, double abs_tol = 1e-14);

// omega_N = surface area of the unit sphere in R^N.
double sphere_area(int N);

// Trapezoid of f(r) * r^{N-1-weight_power} over the sampled grid (no tail).
double grid_radial_integral(const std::vector<double>& r, const std::vector<double>& f,
                            int N, double weight_power = 0.0);

// Least-squares power-law fit log f vs log r on the last decade of the grid.
// Returns the fitted exponent a in f ~ c r^a (and c via *coeff), or NaN when
// the tail has no usable positive samples.
double tail_power_fit(const std::vector<double>& r, const std::vector<double>& f,
                      double* coeff = nullptr, double decades = 1.0);

// Analytic completion of int_{rK}^inf c r^{a} r^{N-1-w} dr given the fitted tail.
// Throws std::domain_error when the fitted tail is not integrable.
double tail_completion(double rK, double c, double a, int N, double weight_power);

}  // namespace pfdlab
