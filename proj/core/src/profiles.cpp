#include "pfdlab/profiles.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pfdlab/quadrature.hpp"

namespace pfdlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double beta_of(const Params& params) { return 1.0 / (params.p - params.N * (2.0 - params.p)); }

void require_good_range(const Params& params, const char* who) {
    if (params.p <= p_c(params.N))
        throw std::domain_error(std::string(who) + ": requires p > p_c = " +
                                std::to_string(p_c(params.N)));
}
}  // namespace

double b2_const(const Params& params) {
    params.validate();
    require_good_range(params, "b2");
    const double p = params.p;
    return (2.0 - p) / p * std::pow(p - params.N * (2.0 - p), -1.0 / (p - 1.0));
}

namespace {

double normalization_integral(const Params& params, double b1, double b2) {
    const double p = params.p;
    const int N = params.N;
    const double pp = p / (p - 1.0);
    const double expo = -(p - 1.0) / (2.0 - p);
    auto f = [&](double r) {
        return std::pow(b1 + b2 * std::pow(r, pp), expo) * std::pow(r, N - 1.0);
    };
    return sphere_area(N) * integrate_halfline(f, 1e-12, 1e-16);
}

std::map<std::pair<double, int>, double> g_b1_cache;
std::mutex g_b1_mutex;

}  // namespace

double b1_const(const Params& params, double rel_tol) {
    params.validate();
    require_good_range(params, "b1");
    {
        std::lock_guard<std::mutex> lock(g_b1_mutex);
        auto it = g_b1_cache.find({params.p, params.N});
        if (it != g_b1_cache.end()) return it->second;
    }
    const double b2 = b2_const(params);
    // The normalization integral is strictly decreasing in b1: bracket then bisect.
    double lo = 1e-8, hi = 1.0;
    while (normalization_integral(params, lo, b2) < 1.0) lo *= 0.25;
    while (normalization_integral(params, hi, b2) > 1.0) hi *= 4.0;
    if (!(lo < hi)) throw std::runtime_error("b1: bracketing failed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (normalization_integral(params, mid, b2) > 1.0) lo = mid;
        else hi = mid;
        if ((hi - lo) < rel_tol * mid) break;
    }
    const double b1 = 0.5 * (lo + hi);
    std::lock_guard<std::mutex> lock(g_b1_mutex);
    g_b1_cache[{params.p, params.N}] = b1;
    return b1;
}

double m_star(const Params& params) {
    const double p = params.p;
    const double beta = beta_of(params);
    return std::pow(beta, params.N / p) *
           std::pow(b1_const(params), (p - 1.0) / (beta * p * (2.0 - p)));
}

double D_of_mass(const Params& params, double M) {
    require_good_range(params, "D_of_mass");
    if (!(M > 0.0)) throw std::invalid_argument("D_of_mass: mass must be positive");
    const double p = params.p;
    const double beta = beta_of(params);
    const double e = beta * (2.0 - p) / (p - 1.0);
    return std::pow(beta, params.N * e) * b1_const(params) / std::pow(M, p * e);
}

double mass_of_VD(const Params& params, double D) {
    require_good_range(params, "mass_of_VD");
    if (!(D > 0.0)) throw std::invalid_argument("mass_of_VD: D must be positive");
    const double p = params.p;
    const double e = (p - 1.0) * (params.N / p - 1.0 / (2.0 - p));
    return m_star(params) * std::pow(D, e);
}

std::pair<double, double> eval_VD(double D, double r, const Params& params) {
    if (!(D > 0.0)) throw std::invalid_argument("eval_VD: D must be positive");
    const double p = params.p;
    const double K = D + (2.0 - p) / p * std::pow(r, p / (p - 1.0));
    const double val = std::pow(K, -(p - 1.0) / (2.0 - p));
    const double der = (r == 0.0) ? 0.0
                                  : -std::pow(r, 1.0 / (p - 1.0)) * std::pow(val, 1.0 / (p - 1.0));
    return {val, der};
}

void BarenblattSpec::validate() const {
    params.validate();
    const double pc = p_c(params.N);
    switch (kind) {
        case BarenblattKind::MassParam:
            if (params.p < pc)
                throw std::domain_error("BarenblattSpec: MassParam needs p >= p_c");
            if (!(M > 0.0)) throw std::invalid_argument("BarenblattSpec: M must be positive");
            break;
        case BarenblattKind::FreeParam:
            if (params.p > pc)
                throw std::domain_error("BarenblattSpec: FreeParam needs p <= p_c");
            if (!(D > 0.0 && T > 0.0))
                throw std::invalid_argument("BarenblattSpec: D,T must be positive");
            break;
        case BarenblattKind::Stationary:
            if (!(D > 0.0)) throw std::invalid_argument("BarenblattSpec: D must be positive");
            break;
    }
    if (!(ell > 0.0)) throw std::invalid_argument("BarenblattSpec: ell must be positive");
}

double FrameMap::scale(double t) const {
    params.validate();
    const double p = params.p;
    const double pc = p_c(params.N);
    const double beta = beta_of(params);
    if (p > pc) return std::pow((t + T) / beta, beta);
    if (p < pc) {
        if (t >= T) throw std::domain_error("FrameMap: t >= extinction time T");
        return std::pow((T - t) / std::abs(beta), beta);
    }
    return std::exp(ell * (T + t));
}

double FrameMap::tau_of_t(double t) const { return std::log(scale(t) / scale(0.0)); }

double FrameMap::t_of_tau(double tau) const {
    const double p = params.p;
    const double pc = p_c(params.N);
    const double beta = beta_of(params);
    if (p > pc) return T * (std::exp(tau / beta) - 1.0);
    if (p < pc) return T * (1.0 - std::exp(tau / beta));
    return tau / ell;
}

double eval_barenblatt(const BarenblattSpec& spec, double t, double r) {
    spec.validate();
    const Params& params = spec.params;
    const int N = params.N;
    switch (spec.kind) {
        case BarenblattKind::MassParam: {
            if (!(t > 0.0))
                throw std::domain_error("eval_barenblatt: fundamental solution needs t > 0");
            const double beta = beta_of(params);
            const double R = std::pow(t / beta, beta);
            return std::pow(R, -N) * eval_VD(D_of_mass(params, spec.M), r / R, params).first;
        }
        case BarenblattKind::FreeParam: {
            FrameMap map{params, spec.T, spec.ell};
            const double R = map.scale(t);  // throws at/after extinction
            return std::pow(R, -N) * eval_VD(spec.D, r / R, params).first;
        }
        case BarenblattKind::Stationary:
            return eval_VD(spec.D, r, params).first;
    }
    return 0.0;
}

RadialGridFunction sample_barenblatt(const BarenblattSpec& spec, double t,
                                     const std::vector<double>& r) {
    RadialGridFunction f;
    f.r = r;
    f.v.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) f.v[i] = eval_barenblatt(spec, t, r[i]);
    f.frame = {FrameKind::Original, t};
    f.params = spec.params;
    return f;
}

RadialGridFunction sample_VD(const Params& params, double D, const std::vector<double>& r) {
    RadialGridFunction f;
    f.r = r;
    f.v.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) f.v[i] = eval_VD(D, r[i], params).first;
    f.frame = {FrameKind::SelfSimilar, 0.0};
    f.params = params;
    return f;
}

// ---- weighted FDE profiles -------------------------------------------------

double eval_frak_U(double D, double rho, double m) {
    if (!(D > 0.0) || !(m > 0.0 && m < 1.0)) throw std::invalid_argument("eval_frak_U: bad args");
    return std::pow(D + (1.0 - m) / (2.0 * m) * rho * rho, -1.0 / (1.0 - m));
}

double fde_a2(double m, double n) {
    const double theta = 1.0 / (2.0 - n * (1.0 - m));
    return (1.0 - m) * theta / (2.0 * m);
}

namespace {
double fde_norm_integral(double a1, double a2, double m, double n, int N) {
    const double expo = -1.0 / (1.0 - m);
    auto f = [&](double rho) {
        return std::pow(a1 + a2 * rho * rho, expo) * std::pow(rho, n - 1.0);
    };
    return sphere_area(N) * integrate_halfline(f, 1e-12, 1e-16);
}
}  // namespace

double fde_a1(double m, double n, int N, double rel_tol) {
    if (!(m > (n - 2.0) / n && m < 1.0))
        throw std::domain_error("fde_a1: requires the good FDE range m > (n-2)/n");
    const double a2 = fde_a2(m, n);
    if (!(a2 > 0.0)) throw std::domain_error("fde_a1: a2 must be positive in the good range");
    double lo = 1e-8, hi = 1.0;
    while (fde_norm_integral(lo, a2, m, n, N) < 1.0) lo *= 0.25;
    while (fde_norm_integral(hi, a2, m, n, N) > 1.0) hi *= 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fde_norm_integral(mid, a2, m, n, N) > 1.0) lo = mid;
        else hi = mid;
        if ((hi - lo) < rel_tol * mid) break;
    }
    return 0.5 * (lo + hi);
}

double eval_fde_barenblatt(double M, double t, double rho, double m, double n, int N) {
    if (!(M > 0.0 && t > 0.0)) throw std::invalid_argument("eval_fde_barenblatt: bad args");
    const double theta = 1.0 / (2.0 - n * (1.0 - m));
    if (!(theta > 0.0))
        throw std::domain_error("eval_fde_barenblatt: needs the good FDE range (theta > 0)");
    const double a1 = fde_a1(m, n, N);
    const double a2 = fde_a2(m, n);
    const double bracket =
        a1 * std::pow(t, 2.0 * theta) * std::pow(M, -2.0 * theta * (1.0 - m)) + a2 * rho * rho;
    return std::pow(t, 1.0 / (1.0 - m)) * std::pow(bracket, -1.0 / (1.0 - m));
}

double eval_fde_pseudo(double D, double T, double t, double rho, double m, double n, double ell) {
    if (!(D > 0.0 && T > 0.0)) throw std::invalid_argument("eval_fde_pseudo: bad args");
    const double theta_den = 2.0 - n * (1.0 - m);
    double R;
    if (theta_den < 0.0) {
        const double theta = 1.0 / theta_den;
        if (t >= T) return 0.0;  // extinct
        R = std::pow((T - t) / std::abs(theta), theta);
    } else if (theta_den == 0.0) {
        R = std::exp(ell * (T + t));
    } else {
        throw std::domain_error("eval_fde_pseudo: needs m <= (n-2)/n");
    }
    return std::pow(R, -n) * eval_frak_U(D, rho / R, m);
}

// ---- integral functionals ---------------------------------------------------

MassResult mass(const RadialGridFunction& f, double weight_power) {
    f.validate();
    const int N = f.params.N;
    MassResult out;
    out.grid_part = sphere_area(N) * grid_radial_integral(f.r, f.v, N, weight_power);
    double c = 0.0;
    const double a = tail_power_fit(f.r, f.v, &c);
    out.tail_power = a;
    if (std::isnan(a) || c == 0.0) {
        out.tail_part = 0.0;  // identically-zero (or unusable) tail: nothing to add
    } else {
        out.tail_part = sphere_area(N) * tail_completion(f.r.back(), c, a, N, weight_power);
    }
    out.value = out.grid_part + out.tail_part;
    return out;
}

double xp_norm(const RadialGridFunction& f) {
    f.validate();
    const int N = f.params.N;
    const double p = f.params.p;
    const double e = p / (2.0 - p) - N;
    const double omega = sphere_area(N);

    double c = 0.0;
    const double a = tail_power_fit(f.r, f.v, &c);
    double tail = 0.0;
    if (!std::isnan(a) && c > 0.0) {
        if (a + N - 1.0 >= -1.0) return kInf;  // tail integral diverges
        tail = omega * tail_completion(f.r.back(), c, a, N, 0.0);
    }

    // R^e * omega int_{>=R} f r^{N-1} dr, accumulated from the outside in.
    double best = std::pow(f.r.back(), e) * tail;
    double acc = tail;
    for (std::size_t i = f.r.size() - 1; i >= 1; --i) {
        const double g1 = omega * f.v[i] * std::pow(f.r[i], N - 1.0);
        const double g0 =
            (f.r[i - 1] == 0.0) ? 0.0 : omega * f.v[i - 1] * std::pow(f.r[i - 1], N - 1.0);
        acc += 0.5 * (g0 + g1) * (f.r[i] - f.r[i - 1]);
        if (f.r[i - 1] > 0.0) best = std::max(best, std::pow(f.r[i - 1], e) * acc);
    }
    return best;
}

RadialGridFunction to_selfsimilar(const RadialGridFunction& u, const FrameMap& map) {
    u.validate();
    if (u.frame.kind != FrameKind::Original)
        throw std::invalid_argument("to_selfsimilar: input must be in the original frame");
    const double t = u.frame.time;
    const double R = map.scale(t);
    RadialGridFunction v;
    v.params = u.params;
    v.frame = {FrameKind::SelfSimilar, map.tau_of_t(t)};
    v.r.resize(u.size());
    v.v.resize(u.size());
    const double RN = std::pow(R, u.params.N);
    for (std::size_t i = 0; i < u.size(); ++i) {
        v.r[i] = u.r[i] / R;
        v.v[i] = RN * u.v[i];
    }
    return v;
}

RadialGridFunction from_selfsimilar(const RadialGridFunction& v, const FrameMap& map) {
    v.validate();
    if (v.frame.kind != FrameKind::SelfSimilar)
        throw std::invalid_argument("from_selfsimilar: input must be in the self-similar frame");
    const double t = map.t_of_tau(v.frame.time);
    const double R = map.scale(t);
    RadialGridFunction u;
    u.params = v.params;
    u.frame = {FrameKind::Original, t};
    u.r.resize(v.size());
    u.v.resize(v.size());
    const double RN = std::pow(R, v.params.N);
    for (std::size_t i = 0; i < v.size(); ++i) {
        u.r[i] = v.r[i] * R;
        u.v[i] = v.v[i] / RN;
    }
    return u;
}

MassRescaleResult mass_rescale(const RadialGridFunction& u, double M_target) {
    u.validate();
    require_good_range(u.params, "mass_rescale");
    if (!(M_target > 0.0)) throw std::invalid_argument("mass_rescale: target mass must be > 0");
    const double M = mass(u).value;
    if (!(M > 0.0)) throw std::invalid_argument("mass_rescale: zero-mass input");
    const double lam = M_target / M;
    MassRescaleResult out;
    out.datum = u;
    for (double& x : out.datum.v) x *= lam;
    out.time_dilation = std::pow(lam, 2.0 - u.params.p);
    return out;
}

}  // namespace pfdlab
