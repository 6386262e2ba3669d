#include "pfdlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfdlab/quadrature.hpp"

namespace pfdlab {

namespace {

double gamma_of(const Params& params) { return (2.0 * params.p - 3.0) / (params.p - 1.0); }

void require_entropy_defined(const Params& params) {
    if (gamma_of(params) == 0.0)
        throw EntropyUndefinedError(
            "entropy undefined at p = 3/2 (gamma = 0); the paper names no substitute");
}

double phi_pow(double s, double p) {
    return (s == 0.0) ? 0.0 : std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

// Quadrature of a nodewise integrand against r^{N-1} dr with power-fit tail
// completion; throws NonIntegrableTailError when the measured tail diverges.
FunctionalValue complete_integral(const std::vector<double>& r, const std::vector<double>& g,
                                  int N, const char* who) {
    FunctionalValue out;
    out.grid_part = sphere_area(N) * grid_radial_integral(r, g, N, 0.0);
    double c = 0.0;
    const double a = tail_power_fit(r, g, &c);
    out.tail_power = a;
    if (!std::isnan(a) && c > 0.0) {
        if (a + N - 1.0 >= -1.0)
            throw NonIntegrableTailError(std::string(who) +
                                             ": non-integrable tail, measured power " +
                                             std::to_string(a),
                                         a);
        out.tail_part = sphere_area(N) * tail_completion(r.back(), c, a, N, 0.0);
    }
    out.value = out.grid_part + out.tail_part;
    return out;
}

}  // namespace

FunctionalValue entropy_detailed(const RadialGridFunction& v, double D) {
    v.validate();
    require_entropy_defined(v.params);
    const Params& params = v.params;
    const double g = gamma_of(params);
    std::vector<double> integrand(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double V = eval_VD(D, v.r[i], params).first;
        const double x = v.v[i];
        // nonnegative by convexity of t -> t^g / (g(g-1))
        integrand[i] =
            (std::pow(x, g) - std::pow(V, g) - g * std::pow(V, g - 1.0) * (x - V)) /
            (g * (g - 1.0));
    }
    return complete_integral(v.r, integrand, params.N, "entropy");
}

double entropy(const RadialGridFunction& v, double D) { return entropy_detailed(v, D).value; }

FunctionalValue fisher_detailed(const RadialGridFunction& v, double D) {
    // d_r V_D^{gamma-1} = (1-gamma) r^{2-gamma} carries no D: the relative Fisher
    // information is the same against every member of the stationary family.
    (void)D;
    v.validate();
    require_entropy_defined(v.params);
    const Params& params = v.params;
    const double p = params.p;
    const double g = gamma_of(params);
    const double pref = 1.0 / std::pow(std::abs(g - 1.0), p);

    const auto dv = radial_derivative(v.r, v.v);
    std::vector<double> integrand(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.v[i] <= 0.0 || v.r[i] == 0.0) continue;
        const double dwv = (g - 1.0) * std::pow(v.v[i], g - 2.0) * dv[i];
        const double dwV = (1.0 - g) * std::pow(v.r[i], 2.0 - g);
        integrand[i] =
            pref * v.v[i] * (dwv - dwV) * (phi_pow(dwv, p) - phi_pow(dwV, p));
    }
    return complete_integral(v.r, integrand, params.N, "fisher");
}

double fisher(const RadialGridFunction& v, double D) { return fisher_detailed(v, D).value; }

LinearizedFunctionals lin_functionals(const RadialGridFunction& v, double D, double eta) {
    v.validate();
    require_entropy_defined(v.params);
    if (eta < 0.0) throw std::invalid_argument("lin_functionals: eta must be >= 0");
    const Params& params = v.params;
    const double p = params.p;
    const double g = gamma_of(params);
    const double pref = 1.0 / std::pow(std::abs(g - 1.0), p);

    const std::size_t n = v.size();
    std::vector<double> V(n), lin_e(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        V[i] = eval_VD(D, v.r[i], params).first;
        const double d = v.v[i] - V[i];
        lin_e[i] = 0.5 * d * d * std::pow(V[i], g - 2.0);
        phi[i] = std::pow(V[i], g - 2.0) * d;
    }
    const auto dv = radial_derivative(v.r, v.v);
    const auto dphi = radial_derivative(v.r, phi);

    std::vector<double> ig(n, 0.0), il(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double dwV = (1.0 - g) * std::pow(v.r[i], 2.0 - g);
        const double weight = V[i] * std::pow(eta + dwV, p - 2.0);
        if (v.v[i] > 0.0 && v.r[i] > 0.0) {
            const double dwv = (g - 1.0) * std::pow(v.v[i], g - 2.0) * dv[i];
            ig[i] = pref * (dwv - dwV) * (dwv - dwV) * weight;
        }
        il[i] = pref * dphi[i] * dphi[i] * weight;
    }

    LinearizedFunctionals out;
    out.eta = eta;
    out.lin_entropy = complete_integral(v.r, lin_e, params.N, "lin_entropy").value;
    out.lin_fisher_gamma = complete_integral(v.r, ig, params.N, "lin_fisher_gamma").value;
    out.lin_fisher = complete_integral(v.r, il, params.N, "lin_fisher").value;
    return out;
}

EntropyReport entropy_report(const RadialGridFunction& v, double D, double eta) {
    EntropyReport rep;
    rep.eta = eta;
    try {
        rep.entropy = entropy(v, D);
        rep.entropy_finite = true;
    } catch (const std::exception&) {
    }
    try {
        rep.fisher = fisher(v, D);
        rep.fisher_finite = true;
    } catch (const std::exception&) {
    }
    try {
        const auto lin = lin_functionals(v, D, eta);
        rep.lin_entropy = lin.lin_entropy;
        rep.lin_fisher_gamma = lin.lin_fisher_gamma;
        rep.lin_fisher = lin.lin_fisher;
        rep.linear_finite = true;
    } catch (const std::exception&) {
    }
    return rep;
}

FisherComparison fisher_comparison_constants(const Params& params, double eps) {
    params.validate();
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("fisher_comparison_constants: need 0 < eps < 1");
    const double p = params.p;
    const double g = gamma_of(params);
    FisherComparison out;
    out.a = 1.0 + (1.0 - g) * (2.0 - p);
    out.c_lower = std::pow(1.0 - eps, out.a) * (p - 1.0) / std::pow(1.0 + eps, 2.0 - p);
    out.c_upper = std::pow(1.0 + eps, out.a) * (p - 1.0) / std::pow(1.0 - eps, 2.0 - p);
    return out;
}

KappaConstants kappa_constants(const Params& params, double eps) {
    params.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("kappa_constants: bad eps");
    const double p = params.p;
    const double g = gamma_of(params);
    KappaConstants k;
    k.C_pN = (params.N + p - g - 1.0) / std::pow(1.0 - g, 2.0 - p);
    const double e1 = std::pow(1.0 + eps, 2.0 * (2.0 - g));
    const double e2 = std::pow(1.0 - eps, 2.0 * (2.0 - g));
    k.kappa1 = e1 / ((1.0 - g) * (1.0 - g));
    k.kappa2 = k.C_pN / std::pow(1.0 - g, p - 1.0) * (e1 / e2 - 1.0);
    return k;
}

double linearization_divergence(double r, double eta, const Params& params) {
    const double p = params.p;
    const double g = gamma_of(params);
    const double base = eta + (1.0 - g) * std::pow(r, 2.0 - g);
    return std::pow(r, 1.0 - g) * std::pow(base, p - 3.0) *
           (eta * (params.N + 1.0 - g) + params.N * (1.0 - g) * std::pow(r, 2.0 - g));
}

CsiszarKullback csiszar_kullback_check(const RadialGridFunction& v, double D, double mass_tol) {
    v.validate();
    const Params& params = v.params;
    const double g = gamma_of(params);

    // relative mass must vanish
    std::vector<double> diff(v.size()), absdiff(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double V = eval_VD(D, v.r[i], params).first;
        diff[i] = v.v[i] - V;
        absdiff[i] = std::abs(diff[i]);
    }
    const double omega = sphere_area(params.N);
    const double relmass = omega * grid_radial_integral(v.r, diff, params.N, 0.0);
    const double vmass = mass(v).value;
    if (std::abs(relmass) > mass_tol * std::max(vmass, 1e-300))
        throw std::invalid_argument("csiszar_kullback_check: relative mass " +
                                    std::to_string(relmass) + " not ~0; adjust D first");

    CsiszarKullback out;
    const double l1 = complete_integral(v.r, absdiff, params.N, "csiszar_kullback L1").value;
    out.lhs = l1 * l1;
    // ||V_D^{2-g}||_1 in closed form by half-line quadrature
    auto f = [&](double r) {
        return std::pow(eval_VD(D, r, params).first, 2.0 - g) * std::pow(r, params.N - 1.0);
    };
    const double norm_v2g = omega * integrate_halfline(f, 1e-10, 1e-14);
    out.rhs = 8.0 * norm_v2g * entropy(v, D);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-8);
    return out;
}

namespace {

std::vector<double> reference_values(const RadialGridFunction& v, const BarenblattSpec& ref) {
    std::vector<double> out(v.size());
    if (ref.kind == BarenblattKind::Stationary) {
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = eval_VD(ref.D, v.r[i], ref.params).first;
    } else {
        if (v.frame.kind != FrameKind::Original)
            throw std::invalid_argument(
                "relative_error: time-dependent reference needs an original-frame profile");
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = eval_barenblatt(ref, v.frame.time, v.r[i]);
    }
    return out;
}

}  // namespace

double relative_error(const RadialGridFunction& v, const BarenblattSpec& reference, double q) {
    v.validate();
    const Params& params = v.params;
    const auto ref = reference_values(v, reference);
    std::vector<double> rel(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) rel[i] = std::abs(v.v[i] - ref[i]) / ref[i];

    if (std::isinf(q)) {
        double s = 0;
        for (double x : rel) s = std::max(s, x);
        // tail extrapolation: if the relative error still grows at the boundary,
        // continue its fitted power to flag an unbounded sup
        double c = 0;
        const double a = tail_power_fit(v.r, rel, &c);
        if (!std::isnan(a) && a > 1e-3) return std::numeric_limits<double>::infinity();
        return s;
    }
    const double q_min = params.N * (params.p - 1.0) / params.p;
    if (!(q > q_min))
        throw std::invalid_argument("relative_error: q must exceed N(p-1)/p = " +
                                    std::to_string(q_min));
    std::vector<double> integrand(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) integrand[i] = std::pow(rel[i], q);
    return std::pow(complete_integral(v.r, integrand, params.N, "relative_error").value,
                    1.0 / q);
}

double relative_error_vs_VD(const RadialGridFunction& v, double D, double q) {
    BarenblattSpec ref;
    ref.params = v.params;
    ref.kind = BarenblattKind::Stationary;
    ref.D = D;
    return relative_error(v, ref, q);
}

GnInterpolation gn_interpolation_check(const RadialGridFunction& f) {
    f.validate();
    GnInterpolation out;
    out.lhs = f.sup();
    const auto df = radial_derivative(f.r, f.v);
    double gsup = 0;
    for (double x : df) gsup = std::max(gsup, std::abs(x));
    const double l1 = mass(f).value;
    const double N = f.params.N;
    out.rhs = std::pow(gsup, N / (N + 1.0)) * std::pow(l1, 1.0 / (N + 1.0));
    out.ratio = (out.rhs > 0) ? out.lhs / out.rhs : 0.0;
    return out;
}

double match_mass_D(const RadialGridFunction& v, double D_lo, double D_hi) {
    v.validate();
    const Params& params = v.params;
    const double omega = sphere_area(params.N);
    auto relmass = [&](double D) {
        std::vector<double> diff(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            diff[i] = v.v[i] - eval_VD(D, v.r[i], params).first;
        return omega * grid_radial_integral(v.r, diff, params.N, 0.0);
    };
    // relative mass is increasing in D (V_D decreases with D)
    double lo = D_lo, hi = D_hi;
    int guard = 0;
    while (relmass(lo) > 0.0 && guard++ < 60) lo *= 0.25;
    guard = 0;
    while (relmass(hi) < 0.0 && guard++ < 60) hi *= 4.0;
    if (relmass(lo) > 0.0 || relmass(hi) < 0.0)
        throw std::runtime_error("match_mass_D: failed to bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (relmass(mid) < 0.0) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-14 * mid) break;
    }
    return std::sqrt(lo * hi);
}

void attach_diagnostics(Trajectory& traj, double D) {
    traj.validate();
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        auto& d = traj.diagnostics[k];
        const auto& f = traj.snapshots[k];
        try {
            d.entropy = entropy(f, D);
        } catch (const std::exception&) {
            d.entropy.reset();
        }
        try {
            d.fisher = fisher(f, D);
        } catch (const std::exception&) {
            d.fisher.reset();
        }
        try {
            d.sup_rel_err = relative_error_vs_VD(f, D, std::numeric_limits<double>::infinity());
        } catch (const std::exception&) {
            d.sup_rel_err.reset();
        }
    }
}

}  // namespace pfdlab
