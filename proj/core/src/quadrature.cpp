#include "pfdlab/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pfdlab {

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1] (Gauss-7 embedded).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
    double kronrod;
    double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = hl * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    resk *= hl;
    resg *= hl;
    return {resk, std::abs(resk - resg)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double rel_tol,
             double abs_tol, int depth, double whole_scale) {
    const GkResult g = gk15(f, a, b);
    if (depth <= 0 || g.err <= abs_tol + rel_tol * std::max(std::abs(g.kronrod), whole_scale))
        return g.kronrod;
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, rel_tol, abs_tol * 0.5, depth - 1, whole_scale) +
           adapt(f, c, b, rel_tol, abs_tol * 0.5, depth - 1, whole_scale);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const GkResult first = gk15(f, a, b);
    return adapt(f, a, b, rel_tol, abs_tol, max_depth, std::abs(first.kronrod));
}

double integrate_halfline(const std::function<double(double)>& f, double rel_tol,
                          double abs_tol) {
    const double inner = integrate(f, 0.0, 1.0, rel_tol, abs_tol);
    // r = s/(1-s) maps [1/2, 1) to [1, inf); dr = ds/(1-s)^2
    auto outer_f = [&f](double s) {
        const double om = 1.0 - s;
        if (om <= 1e-300) return 0.0;
        const double r = s / om;
        return f(r) / (om * om);
    };
    const double outer = integrate(outer_f, 0.5, 1.0, rel_tol, abs_tol);
    return inner + outer;
}

double sphere_area(int N) {
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

double grid_radial_integral(const std::vector<double>& r, const std::vector<double>& f, int N,
                            double weight_power) {
    if (r.size() != f.size() || r.size() < 2)
        throw std::invalid_argument("grid_radial_integral: bad input");
    const double e = N - 1.0 - weight_power;
    const std::size_t i0 = (r[0] == 0.0) ? 1 : 0;
    const std::size_t m = r.size() - i0;

    // origin segment [0, r_{i0}]: integrand ~ f(0) + (f(r1)-f(0)) r/r1 against r^e
    double acc = 0.0;
    if (i0 == 1 && e > -1.0) {
        const double r1 = r[1];
        const double w = std::pow(r1, e + 1.0);
        acc += f[0] * w / (e + 1.0) + (f[1] - f[0]) * w / (e + 2.0);
    }

    // positive block: substitute x = ln r, integrand g(x) = f r^{e+1}; composite
    // Simpson when the block is log-uniform (the default grids are), else trapezoid
    std::vector<double> g(m), x(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::log(r[i0 + i]);
        g[i] = f[i0 + i] * std::pow(r[i0 + i], e + 1.0);
    }
    const double h = x[1] - x[0];
    bool uniform = m >= 5;
    for (std::size_t i = 2; i < m && uniform; ++i)
        if (std::abs((x[i] - x[i - 1]) / h - 1.0) > 1e-8) uniform = false;

    if (uniform) {
        std::size_t i = 0;
        if ((m - 1) % 2 == 1) {  // odd interval count: one trapezoid panel first
            acc += 0.5 * h * (g[0] + g[1]);
            i = 1;
        }
        for (; i + 2 < m + 1 && i + 2 <= m - 1 + 1; i += 2) {
            if (i + 2 > m - 1) break;
            acc += h / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
        }
    } else {
        for (std::size_t i = 0; i + 1 < m; ++i)
            acc += 0.5 * (g[i] + g[i + 1]) * (x[i + 1] - x[i]);
    }
    return acc;
}

double tail_power_fit(const std::vector<double>& r, const std::vector<double>& f, double* coeff,
                      double decades) {
    const double rK = r.back();
    const double r_lo = rK / std::pow(10.0, decades);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_lo || f[i] <= 0.0) continue;
        const double x = std::log(r[i]), y = std::log(f[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 4) {
        if (coeff) *coeff = 0.0;
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double den = n * sxx - sx * sx;
    const double a = (n * sxy - sx * sy) / den;
    if (coeff) *coeff = std::exp((sy - a * sx) / n);
    return a;
}

double tail_completion(double rK, double c, double a, int N, double weight_power) {
    const double e = a + N - 1.0 - weight_power;  // integrand power
    if (e >= -1.0)
        throw std::domain_error("tail_completion: fitted tail power " + std::to_string(a) +
                                " is not integrable against r^{N-1-w}");
    return -c * std::pow(rK, e + 1.0) / (e + 1.0);
}

}  // namespace pfdlab
