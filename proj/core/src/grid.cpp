#include "pfdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pfdlab {

std::vector<double> log_radial_grid(std::size_t nodes, double rmin, double rmax,
                                    bool include_origin) {
    if (nodes < 8) throw std::invalid_argument("log_radial_grid: need at least 8 nodes");
    if (!(rmin > 0.0 && rmax > rmin)) throw std::invalid_argument("log_radial_grid: bad bounds");
    std::vector<double> r;
    r.reserve(nodes + (include_origin ? 1 : 0));
    if (include_origin) r.push_back(0.0);
    const double la = std::log(rmin), lb = std::log(rmax);
    for (std::size_t i = 0; i < nodes; ++i)
        r.push_back(std::exp(la + (lb - la) * static_cast<double>(i) / (nodes - 1)));
    r.back() = rmax;
    return r;
}

void RadialGridFunction::validate() const {
    if (r.size() != v.size() || r.size() < 4)
        throw std::invalid_argument("RadialGridFunction: size mismatch or too few nodes");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1]))
            throw std::invalid_argument("RadialGridFunction: radii not strictly increasing");
    for (double x : v)
        if (!std::isfinite(x) || x < 0.0)
            throw std::invalid_argument("RadialGridFunction: values must be finite and >= 0");
    if (frame.time < 0.0)
        throw std::invalid_argument("RadialGridFunction: frame time stamp must be >= 0");
}

double RadialGridFunction::sup() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

void Trajectory::validate() const {
    if (times.size() != snapshots.size())
        throw std::invalid_argument("Trajectory: times/snapshots length mismatch");
    if (!diagnostics.empty() && diagnostics.size() != snapshots.size())
        throw std::invalid_argument("Trajectory: diagnostics length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("Trajectory: time stamps not strictly increasing");
}

namespace {

// 4th-order first derivative on a uniform grid, df/dx at node i of a stencil row.
// centered:  (f[-2] - 8 f[-1] + 8 f[1] - f[2]) / 12h
// one-sided: standard 5-point forward/backward closures.
double d1_centered(const double* f, double h) {
    return (f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * h);
}
double d1_forward(const double* f, double h) {
    return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
}
double d1_backward(const double* f, double h) {
    return (25.0 * f[0] - 48.0 * f[-1] + 36.0 * f[-2] - 16.0 * f[-3] + 3.0 * f[-4]) / (12.0 * h);
}

}  // namespace

std::vector<double> radial_derivative(const std::vector<double>& r, const std::vector<double>& v) {
    const std::size_t n = r.size();
    if (n != v.size() || n < 6) throw std::invalid_argument("radial_derivative: bad input");
    std::vector<double> out(n, 0.0);

    // Positive-radius block (possibly excluding an r=0 node).
    const std::size_t i0 = (r[0] == 0.0) ? 1 : 0;
    const std::size_t m = n - i0;
    if (m < 6) throw std::invalid_argument("radial_derivative: too few positive nodes");

    // Check log-uniformity of the positive block; fall back to 2nd order otherwise.
    std::vector<double> x(m), f(m);
    for (std::size_t i = 0; i < m; ++i) { x[i] = std::log(r[i0 + i]); f[i] = v[i0 + i]; }
    const double h = x[1] - x[0];
    bool uniform = true;
    for (std::size_t i = 2; i < m && uniform; ++i)
        if (std::abs((x[i] - x[i - 1]) / h - 1.0) > 1e-6) uniform = false;

    for (std::size_t i = 0; i < m; ++i) {
        double dfdx;
        if (uniform) {
            if (i >= 2 && i + 2 < m) dfdx = d1_centered(&f[i], h);
            else if (i < 2)          dfdx = d1_forward(&f[i], h);
            else                     dfdx = d1_backward(&f[i], h);
        } else {
            // nonuniform fallback: 3-point Lagrange derivative
            const std::size_t j = std::min(std::max<std::size_t>(i, 1), m - 2);
            const double x0 = x[j - 1], x1 = x[j], x2 = x[j + 1], xi = x[i];
            dfdx = f[j - 1] * (2 * xi - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
                   f[j] * (2 * xi - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
                   f[j + 1] * (2 * xi - x0 - x1) / ((x2 - x0) * (x2 - x1));
        }
        out[i0 + i] = dfdx / r[i0 + i];  // d/dr = (1/r) d/d(ln r)
    }
    if (i0 == 1) out[0] = 0.0;  // radial symmetry
    return out;
}

std::vector<double> radial_derivative(const RadialGridFunction& fn) {
    return radial_derivative(fn.r, fn.v);
}

}  // namespace pfdlab
