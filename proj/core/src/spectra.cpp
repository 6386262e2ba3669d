#include "pfdlab/spectra.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "pfdlab/functionals.hpp"
#include "pfdlab/quadrature.hpp"

namespace pfdlab {

namespace {

// 8-point Gauss-Legendre on [-1,1]
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

void tridiag_solve(const std::vector<double>& lo, const std::vector<double>& di,
                   const std::vector<double>& up, const std::vector<double>& b,
                   std::vector<double>& x) {
    const std::size_t K = di.size();
    std::vector<double> cp(K), dq(K);
    cp[0] = up[0] / di[0];
    dq[0] = b[0] / di[0];
    for (std::size_t i = 1; i < K; ++i) {
        const double m = di[i] - lo[i] * cp[i - 1];
        cp[i] = (i + 1 < K) ? up[i] / m : 0.0;
        dq[i] = (b[i] - lo[i] * dq[i - 1]) / m;
    }
    x.resize(K);
    x[K - 1] = dq[K - 1];
    for (std::size_t i = K - 1; i-- > 0;) x[i] = dq[i] - cp[i] * x[i + 1];
}

}  // namespace

SpectralProblem SpectralProblem::assemble(const Params& params, std::size_t nodes, double s_min,
                                          double s_max) {
    params.validate();
    if (nodes < 64) throw std::invalid_argument("SpectralProblem: grid_size >= 64 required");
    const double p = params.p;
    const int N = params.N;
    const double a = 2.0 * N * (p - 1.0) / p - 1.0;
    const double es = -(p - 1.0) / (2.0 - p);
    const double em = -1.0 / (2.0 - p);
    // mass-weight integrability at infinity: a + 2 em < -1  <=>  N(p-1)(2-p) < p
    if (!(N * (p - 1.0) * (2.0 - p) < p))
        throw std::domain_error("SpectralProblem: mass weight not integrable for these (p,N)");

    SpectralProblem sp;
    sp.s.resize(nodes);
    const double la = std::log(s_min), lb = std::log(s_max);
    for (std::size_t i = 0; i < nodes; ++i)
        sp.s[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (nodes - 1));
    sp.A_diag.assign(nodes, 0.0);
    sp.A_off.assign(nodes - 1, 0.0);
    sp.M_diag.assign(nodes, 0.0);
    sp.M_off.assign(nodes - 1, 0.0);

    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        const double h = sp.s[i + 1] - sp.s[i];
        double k = 0, m00 = 0, m11 = 0, m01 = 0;
        for (int q = 0; q < 8; ++q) {
            const double x = 0.5 * (sp.s[i] + sp.s[i + 1]) + 0.5 * h * kGx[q];
            const double w = 0.5 * h * kGw[q];
            const double ws = std::pow(x, a) * std::pow(1.0 + x * x, es);
            const double wm = std::pow(x, a) * std::pow(1.0 + x * x, em);
            const double bi = (sp.s[i + 1] - x) / h;
            const double bj = (x - sp.s[i]) / h;
            k += w * ws;
            m00 += w * wm * bi * bi;
            m11 += w * wm * bj * bj;
            m01 += w * wm * bi * bj;
        }
        k /= h * h;
        sp.A_diag[i] += k;
        sp.A_diag[i + 1] += k;
        sp.A_off[i] -= k;
        sp.M_diag[i] += m00;
        sp.M_diag[i + 1] += m11;
        sp.M_off[i] += m01;
    }
    return sp;
}

double SpectralProblem::smallest_constrained(std::vector<double>* eigenvector,
                                             int max_iter) const {
    const std::size_t K = s.size();
    auto mul_M = [&](const std::vector<double>& x, std::vector<double>& y) {
        y.assign(K, 0.0);
        for (std::size_t i = 0; i < K; ++i) y[i] = M_diag[i] * x[i];
        for (std::size_t i = 0; i + 1 < K; ++i) {
            y[i] += M_off[i] * x[i + 1];
            y[i + 1] += M_off[i] * x[i];
        }
    };
    auto mul_A = [&](const std::vector<double>& x, std::vector<double>& y) {
        y.assign(K, 0.0);
        for (std::size_t i = 0; i < K; ++i) y[i] = A_diag[i] * x[i];
        for (std::size_t i = 0; i + 1 < K; ++i) {
            y[i] += A_off[i] * x[i + 1];
            y[i + 1] += A_off[i] * x[i];
        }
    };

    double amax = 0;
    for (double d : A_diag) amax = std::max(amax, std::abs(d));
    const double sigma = 1e-12 * amax;  // shift keeps A + sigma M positive definite

    std::vector<double> lo(K, 0.0), di(K), up(K, 0.0);
    for (std::size_t i = 0; i < K; ++i) di[i] = A_diag[i] + sigma * M_diag[i];
    for (std::size_t i = 0; i + 1 < K; ++i) {
        const double o = A_off[i] + sigma * M_off[i];
        up[i] = o;
        lo[i + 1] = o;
    }

    // deflate the constant vector (the pencil's zero mode, M-orthogonally)
    std::vector<double> ones(K, 1.0), Mones, tmp, x(K), Mx, Ax;
    mul_M(ones, Mones);
    double denom = 0;
    for (std::size_t i = 0; i < K; ++i) denom += Mones[i];
    auto deflate = [&](std::vector<double>& y) {
        double c = 0;
        for (std::size_t i = 0; i < K; ++i) c += y[i] * Mones[i];
        c /= denom;
        for (double& yi : y) yi -= c;
    };

    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& xi : x) xi = gauss(rng);
    deflate(x);

    double lam = 0, lam_prev = -1;
    for (int it = 0; it < max_iter; ++it) {
        mul_M(x, Mx);
        tridiag_solve(lo, di, up, Mx, tmp);
        deflate(tmp);
        mul_M(tmp, Mx);
        double nrm2 = 0;
        for (std::size_t i = 0; i < K; ++i) nrm2 += tmp[i] * Mx[i];
        const double nrm = std::sqrt(std::max(nrm2, 1e-300));
        for (std::size_t i = 0; i < K; ++i) x[i] = tmp[i] / nrm;
        mul_A(x, Ax);
        mul_M(x, Mx);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < K; ++i) {
            num += x[i] * Ax[i];
            den += x[i] * Mx[i];
        }
        lam = num / den;
        if (it > 4 && std::abs(lam - lam_prev) < 1e-13 * std::abs(lam)) break;
        lam_prev = lam;
    }
    if (eigenvector) *eigenvector = x;
    return lam;
}

HpOptimalResult hp_optimal_constant(const Params& params, std::size_t grid_size) {
    params.validate();
    HpOptimalResult out;
    out.domain_sizes = {1e3, 1e4, 1e5};
    for (double L : out.domain_sizes) {
        const auto sp = SpectralProblem::assemble(params, grid_size, 1e-4, L);
        out.history.push_back(sp.smallest_constrained());
    }
    const bool essential = (params.p <= p_M(params.N));
    out.essential_estimate = essential;
    if (!essential) {
        out.lambda_opt = out.history.back();
    } else {
        // truncated eigenvalues follow lambda(L) ~ lambda_inf + k/(ln L)^2
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(out.history.size());
        for (int i = 0; i < n; ++i) {
            const double xi = 1.0 / std::pow(std::log(out.domain_sizes[i]), 2);
            sx += xi;
            sy += out.history[i];
            sxx += xi * xi;
            sxy += xi * out.history[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.lambda_opt = (sy - slope * sx) / n;
    }
    out.lambda_hp_est = params.p * out.lambda_opt / (4.0 * (2.0 - params.p));
    return out;
}

GroundMode hp_ground_mode(const Params& params, std::size_t grid_size, double s_max) {
    const auto sp = SpectralProblem::assemble(params, grid_size, 1e-4, s_max);
    GroundMode gm;
    gm.lambda = sp.smallest_constrained(&gm.g);
    gm.s = sp.s;
    // normalize sup |g| = 1 for convenient perturbation sizing
    double sup = 0;
    for (double x : gm.g) sup = std::max(sup, std::abs(x));
    if (sup > 0)
        for (double& x : gm.g) x /= sup;
    return gm;
}

HpGeneralCheck hp_general_check(const Params& params, int n_tests, unsigned seed) {
    params.validate();
    const double p = params.p;
    const int N = params.N;
    if (!(N < p / ((2.0 - p) * (p - 1.0))))
        throw std::domain_error("hp_general_check: requires N < p/((2-p)(p-1))");
    const double pp = p / (p - 1.0);
    const double e = -1.0 / (2.0 - p);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    HpGeneralCheck out;
    for (int t = 0; t < n_tests; ++t) {
        // random compactly supported bump: sum of smooth humps on [0, R]
        const double R = 0.5 + 8.0 * uni(rng);
        const double r0 = R * (0.1 + 0.8 * uni(rng));
        const double w0 = R * (0.05 + 0.3 * uni(rng));
        const double amp = 0.2 + uni(rng);
        auto phi = [&](double r) {
            if (r >= R) return 0.0;
            const double bump = std::exp(-(r - r0) * (r - r0) / (2.0 * w0 * w0));
            const double cut = std::pow(1.0 - (r / R) * (r / R), 2.0);
            return amp * bump * cut;
        };
        auto dphi = [&](double r) {
            const double h = 1e-6 * R;
            return (phi(std::min(r + h, R)) - phi(std::max(r - h, 0.0))) / (2.0 * h);
        };
        auto weight = [&](double r) { return std::pow(1.0 + std::pow(r, pp), e); };
        const double msr = integrate_halfline(
            [&](double r) { return weight(r) * std::pow(r, N - 1.0); }, 1e-9, 1e-13);
        const double mean = integrate_halfline(
                                [&](double r) { return phi(r) * weight(r) * std::pow(r, N - 1.0); },
                                1e-9, 1e-13) /
                            msr;
        const double lhs = integrate_halfline(
            [&](double r) {
                const double d = phi(r) - mean;
                return d * d * weight(r) * std::pow(r, N - 1.0);
            },
            1e-9, 1e-13);
        const double rhs = integrate_halfline(
            [&](double r) {
                const double d = dphi(r);
                return d * d * r * r * weight(r) * std::pow(r, N - 1.0);
            },
            1e-9, 1e-13);
        if (rhs > 0) out.max_ratio = std::max(out.max_ratio, lhs / rhs);
        ++out.tested;
    }
    return out;
}

double rayleigh_quotient(const RadialGridFunction& v, double D) {
    const double E = entropy(v, D);
    if (!(E > 0.0))
        throw std::domain_error("rayleigh_quotient: zero entropy (v == V_D?)");
    return fisher(v, D) / E;
}

}  // namespace pfdlab
