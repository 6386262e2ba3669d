#include "pfdlab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pfdlab/functionals.hpp"
#include "pfdlab/profiles.hpp"
#include "pfdlab/quadrature.hpp"

namespace pfdlab {

RateFit fit_rate(const std::vector<std::pair<double, double>>& series, FitMode mode,
                 double window_lo, double window_hi) {
    RateFit out;
    out.mode = mode;
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    for (const auto& [t, y] : series) {
        if (t < window_lo || t > window_hi) continue;
        if (!(y > 0.0))
            throw std::invalid_argument("fit_rate: nonpositive value inside the fit window");
        const double x = (mode == FitMode::ExpInTau) ? t : std::log(t);
        const double ly = std::log(y);
        sx += x; sy += ly; sxx += x * x; sxy += x * ly; syy += ly * ly;
        out.series.emplace_back(t, y);
        ++n;
    }
    if (n < 8) throw std::invalid_argument("fit_rate: need at least 8 points in the window");
    const double den = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / den;
    out.intercept = (sy - slope * sx) / n;
    out.fitted_rate = (mode == FitMode::ExpInTau) ? -slope : slope;
    const double ss_tot = syy - sy * sy / n;
    const double ss_res = ss_tot - slope * (sxy - sx * sy / n);
    out.r_squared = (ss_tot > 0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return out;
}

CylinderThresholds cylinder_thresholds(double eps, double M, const GhpData& ghp,
                                       const Params& params) {
    params.validate();
    if (params.p <= p_c(params.N))
        throw std::domain_error("cylinder_thresholds: good range only");
    if (!(M > 0 && ghp.M1 > 0 && ghp.M2 > 0 && ghp.M1 <= M && M <= ghp.M2))
        throw std::invalid_argument("cylinder_thresholds: need M1 <= M <= M2, all positive");
    if (!(ghp.tau1 > 0 && ghp.tau2 > 0))
        throw std::invalid_argument("cylinder_thresholds: need positive tau shifts");

    const double p = params.p;
    const double beta = 1.0 / (p - params.N * (2.0 - p));
    const double pp = p / (p - 1.0);
    const double e = (2.0 - p) / (p - 1.0);

    CylinderThresholds out;
    out.eps = eps;
    out.eps_under_max = 1.0 - std::pow(ghp.M1 / M, beta);
    out.eps_over_max = std::pow(ghp.M2 / M, beta) - 1.0;
    const double eps_max = std::min({out.eps_under_max, out.eps_over_max, 1.0});
    if (!(eps > 0.0 && eps < eps_max))
        throw std::invalid_argument("cylinder_thresholds: eps outside (0, " +
                                    std::to_string(eps_max) + ")");

    out.c = b2_const(params) / b1_const(params) * std::pow(M, (2.0 - p) * beta * pp);

    // lower bound region
    const double A1 = std::pow(1.0 - eps, e);
    out.rho_under = std::pow(
        A1 * (1.0 + A1) / (out.c * std::pow(1.0 - out.eps_under_max, e) * (1.0 - A1)),
        1.0 / pp);
    {
        const double A = 2.0 / (1.0 + A1);            // eta(t1)^{1/(beta(p-1))}
        const double a = std::pow(A, p - 1.0);        // t/(t - tau1) at t1
        const double t1 = a * ghp.tau1 / (a - 1.0);
        out.T_under = std::max({ghp.tau1 / (1.0 - std::pow(1.0 - eps, 2.0 - p)), t1, 1.0});
    }
    // upper bound region
    const double B1 = std::pow(1.0 + eps, e);
    out.rho_over = std::pow((1.0 + B1) / (out.c * (B1 - 1.0)), 1.0 / pp);
    {
        const double A = 2.0 / (1.0 + B1);            // eta(t2)^{1/(beta(p-1))} < 1
        const double a = std::pow(A, p - 1.0);        // t/(t + tau2) at t2
        const double t2 = a * ghp.tau2 / (1.0 - a);
        out.T_over = std::max({ghp.tau2 / (std::pow(1.0 + eps, 2.0 - p) - 1.0), t2, 1.0});
    }
    return out;
}

namespace {

// sup over r >= 0 of |B_M(t+T, r)/B_M(t, r) - 1| (shift = time) or
// |B_M(t, r+x0)/B_M(t, r) - 1| (shift = space), scanned on a wide log grid
// around the bulk scale plus the analytic r -> 0 / r -> inf limits.
double sup_shift_error(const BarenblattSpec& spec, double t, double T, double x0) {
    const double beta = 1.0 / (spec.params.p - spec.params.N * (2.0 - spec.params.p));
    const double scale = std::pow(t / beta, beta);
    double sup = 0;
    auto probe = [&](double r) {
        const double denom = eval_barenblatt(spec, t, r);
        const double num = (T != 0.0) ? eval_barenblatt(spec, t + T, r)
                                      : eval_barenblatt(spec, t, r + x0);
        sup = std::max(sup, std::abs(num / denom - 1.0));
    };
    probe(0.0);
    for (int i = 0; i <= 400; ++i)
        probe(scale * std::pow(10.0, -4.0 + 8.0 * i / 400.0));
    if (T != 0.0) {
        // r -> infinity limit of the time-shift ratio: ((t+T)/t)^{1/(2-p)}
        sup = std::max(sup, std::abs(std::pow((t + T) / t, 1.0 / (2.0 - spec.params.p)) - 1.0));
    }
    return sup;
}

}  // namespace

ShiftedRates shifted_barenblatt_rates(const Params& params, double M, double T, double x0) {
    params.validate();
    if (params.p <= p_c(params.N))
        throw std::domain_error("shifted_barenblatt_rates: good range only");
    if (T == 0.0 && x0 == 0.0)
        throw std::invalid_argument("shifted_barenblatt_rates: zero shifts have no rate");
    BarenblattSpec spec;
    spec.params = params;
    spec.kind = BarenblattKind::MassParam;
    spec.M = M;

    ShiftedRates out;
    std::vector<std::pair<double, double>> ts, ss;
    for (int i = 0; i <= 24; ++i) {
        const double t = std::pow(10.0, 1.0 + 2.0 * i / 24.0);  // t in [10, 1000]
        if (T != 0.0) ts.emplace_back(t, sup_shift_error(spec, t, T, 0.0));
        if (x0 != 0.0) ss.emplace_back(t, sup_shift_error(spec, t, 0.0, x0));
    }
    if (T != 0.0) out.time_shift = fit_rate(ts, FitMode::PowerInT, 10.0, 1000.0);
    if (x0 != 0.0) out.space_shift = fit_rate(ss, FitMode::PowerInT, 10.0, 1000.0);
    return out;
}

RateExperimentReport relative_error_rate_experiment(const RadialGridFunction& v0,
                                                    const SolverConfig& config, double tau_end,
                                                    double fit_lo, double fit_hi) {
    v0.validate();
    const Params& params = v0.params;
    const bool good_range = params.p > p_c(params.N);

    if (!(xp_norm(v0) < std::numeric_limits<double>::infinity()))
        throw std::invalid_argument("relative_error_rate_experiment: datum not in X_p");

    RateExperimentReport rep;
    rep.transfer_factor = (2.0 - params.p) / (params.N + 1.0);
    rep.D = match_mass_D(v0);

    rep.trajectory = evolve_rcple(v0, config, tau_end);
    if (!rep.trajectory.completed)
        throw std::runtime_error("relative_error_rate_experiment: solver failed: " +
                                 rep.trajectory.error);
    attach_diagnostics(rep.trajectory, rep.D);

    // L1 distance series
    std::vector<std::pair<double, double>> l1, supr, ent;
    const double omega = sphere_area(params.N);
    for (std::size_t k = 0; k < rep.trajectory.snapshots.size(); ++k) {
        const auto& f = rep.trajectory.snapshots[k];
        std::vector<double> ad(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            ad[i] = std::abs(f.v[i] - eval_VD(rep.D, f.r[i], params).first);
        l1.emplace_back(f.frame.time, omega * grid_radial_integral(f.r, ad, params.N, 0.0));
        const auto& d = rep.trajectory.diagnostics[k];
        if (d.sup_rel_err) supr.emplace_back(f.frame.time, *d.sup_rel_err);
        if (d.entropy && *d.entropy > 0.0) ent.emplace_back(f.frame.time, *d.entropy);
    }

    if (!supr.empty() && supr.front().second < 1e-9) {
        rep.stationary = true;  // datum at the scheme-noise floor around V_D
        return rep;
    }
    if (fit_hi <= fit_lo) fit_hi = tau_end - 0.5;
    rep.l1_rate = fit_rate(l1, FitMode::ExpInTau, fit_lo, fit_hi);
    rep.sup_rate = fit_rate(supr, FitMode::ExpInTau, fit_lo, fit_hi);
    if (ent.size() >= 8) rep.entropy_rate = fit_rate(ent, FitMode::ExpInTau, fit_lo, fit_hi);
    if (good_range)
        rep.transfer_ok =
            rep.sup_rate.fitted_rate >= rep.l1_rate.fitted_rate * rep.transfer_factor * 0.8;
    return rep;
}

WeakGronwallResult weak_gronwall_check(const std::vector<std::pair<double, double>>& series,
                                       double s) {
    if (!(s > 0.0)) throw std::invalid_argument("weak_gronwall_check: s must be positive");
    if (series.size() < 8) throw std::invalid_argument("weak_gronwall_check: series too short");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].second < 0.0)
            throw std::invalid_argument("weak_gronwall_check: series must be nonnegative");
        if (i > 0 && series[i].second > series[i - 1].second * (1.0 + 1e-9))
            throw std::invalid_argument("weak_gronwall_check: series must be nonincreasing");
    }

    // tail of int_t^inf u: exponential fitted on the last window
    double tail = 0.0;
    {
        const double t_hi = series.back().first;
        const double t_lo = 0.5 * (series.front().first + t_hi);
        std::vector<std::pair<double, double>> wnd;
        for (const auto& pt : series)
            if (pt.first >= t_lo && pt.second > 0.0) wnd.push_back(pt);
        if (wnd.size() >= 8) {
            const auto fit = fit_rate(wnd, FitMode::ExpInTau, t_lo, t_hi);
            if (fit.fitted_rate > 0.0) tail = series.back().second / fit.fitted_rate;
        }
    }

    // cumulative integral from the right
    const std::size_t n = series.size();
    std::vector<double> I(n, 0.0);
    I[n - 1] = tail;
    for (std::size_t i = n - 1; i-- > 0;)
        I[i] = I[i + 1] + 0.5 * (series[i].second + series[i + 1].second) *
                              (series[i + 1].first - series[i].first);

    WeakGronwallResult out;
    const double u0 = series.front().second;
    const double t0 = series.front().first;
    for (std::size_t i = 0; i + 1 < n; ++i) {  // skip the last point (tail-dominated)
        const auto& [t, u] = series[i];
        if (s * I[i] <= u * (1.0 + 1e-12)) {
            out.hypothesis_ever_held = true;
            ++out.hypothesis_points;
            const double bound = std::exp(s) / s * u0 * std::exp(-s * (t - t0));
            if (u > bound * (1.0 + 1e-9)) out.conclusion_holds = false;
        }
    }
    return out;
}

}  // namespace pfdlab
