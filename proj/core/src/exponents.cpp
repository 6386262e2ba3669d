#include "pfdlab/exponents.hpp"

#include <cmath>
#include <limits>

namespace pfdlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dimension(int N) {
    if (N < 2) throw std::invalid_argument("dimension N must be >= 2");
}
}  // namespace

double p_c(int N) { require_dimension(N); return 2.0 * N / (N + 1.0); }
double p_Y(int N) { require_dimension(N); return 2.0 * N / (N + 2.0); }

double p_M(int N) {
    require_dimension(N);
    const double s = std::sqrt((N + 1.0) * (N + 1.0) + 8.0);
    return (3.0 * (N + 1.0) + s) / (2.0 * (N + 2.0));
}

double p_D(int N) { require_dimension(N); return (2.0 * N + 1.0) / (N + 1.0); }

std::optional<double> p_1(int N) {
    require_dimension(N);
    const double disc = static_cast<double>(N) * N - 6.0 * N + 1.0;
    if (disc < 0.0) return std::nullopt;
    return 1.5 - 1.0 / (2.0 * N) - std::sqrt(disc) / (2.0 * N);
}

std::optional<double> p_2(int N) {
    require_dimension(N);
    const double disc = static_cast<double>(N) * N - 6.0 * N + 1.0;
    if (disc < 0.0) return std::nullopt;
    return 1.5 - 1.0 / (2.0 * N) + std::sqrt(disc) / (2.0 * N);
}

ExponentTable critical_exponents(int N) {
    require_dimension(N);
    ExponentTable t;
    t.N = N;
    t.p_c = p_c(N);
    t.p_Y = p_Y(N);
    t.p_M = p_M(N);
    t.p_D = p_D(N);
    t.p_1 = p_1(N);
    t.p_2 = p_2(N);
    t.p_Y_admissible = (N != 2);  // p_Y(2) = 1 sits on the boundary of (1,2)
    return t;
}

ExponentTable derived_constants(const Params& params) {
    params.validate();
    const double p = params.p;
    const int N = params.N;

    ExponentTable t = critical_exponents(N);
    t.p = p;
    t.gamma = (2.0 * p - 3.0) / (p - 1.0);
    t.entropy_undefined = (t.gamma == 0.0);

    const double beta_den = p - N * (2.0 - p);
    // signed infinity at p = p_c, with the sign of the limit from the good range
    t.beta = (beta_den == 0.0) ? kInf : 1.0 / beta_den;

    t.m = p - 1.0;
    t.n = 2.0 + 2.0 * N * (p - 1.0) / p;   // 2 + 2N/p' with p' = p/(p-1)
    t.frak_a = N - t.n;

    const double theta_den = 2.0 - t.n * (1.0 - t.m);  // = 2(p-1)/(p beta)
    t.theta = (theta_den == 0.0) ? kInf : 1.0 / theta_den;

    if (p > t.p_c) {
        t.lambda_star = lambda_star(params);
        t.lambda_hp = lambda_hp(params);
    }
    return t;
}

const char* regime_name(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::VeryFastBelowP1: return "VeryFastBelowP1";
        case RegimeTag::MiddleP1P2: return "MiddleP1P2";
        case RegimeTag::VeryFastAboveP2: return "VeryFastAboveP2";
        case RegimeTag::CriticalPc: return "CriticalPc";
        case RegimeTag::GoodPcToPM: return "GoodPcToPM";
        case RegimeTag::GoodPMToPD: return "GoodPMToPD";
        case RegimeTag::GoodPDto2: return "GoodPDto2";
    }
    return "?";
}

Regime classify_regime(const Params& params) {
    params.validate();
    const double p = params.p;
    const int N = params.N;

    Regime out{};
    out.mass_conserved = (p >= p_c(N));
    // N(2-p)(p-1) < p  <=>  p in (1,p_1) u (p_2,2) for N >= 6, always for N < 6
    out.diff_barenblatt_integrable = (N * (2.0 - p) * (p - 1.0) < p);

    const double pc = p_c(N), pm = p_M(N), pd = p_D(N);
    if (p >= pd)      out.tag = RegimeTag::GoodPDto2;       // [p_D, 2)
    else if (p > pm)  out.tag = RegimeTag::GoodPMToPD;      // (p_M, p_D)
    else if (p > pc)  out.tag = RegimeTag::GoodPcToPM;      // (p_c, p_M]
    else if (p == pc) out.tag = RegimeTag::CriticalPc;
    else {
        const auto p1 = p_1(N), p2 = p_2(N);
        if (p1 && p >= *p1 && p <= *p2) out.tag = RegimeTag::MiddleP1P2;   // [p_1, p_2]
        else if (p1 && p < *p1)         out.tag = RegimeTag::VeryFastBelowP1;
        else                            out.tag = RegimeTag::VeryFastAboveP2;
    }
    return out;
}

double lambda_star(const Params& params) {
    params.validate();
    const double p = params.p;
    const int N = params.N;
    if (p <= p_c(N))
        throw std::domain_error("lambda_star: defined only in the good range p > p_c "
                                "(the paper leaves rates below p_c open)");
    if (p > p_M(N)) return p - N * (2.0 - p);
    const double num = p - N * (2.0 - p) * (p - 1.0);
    return num * num / (4.0 * p * (p - 1.0) * (2.0 - p));
}

double lambda_hp(const Params& params) {
    params.validate();
    const double p = params.p;
    const int N = params.N;
    if (p <= p_c(N))
        throw std::domain_error("lambda_hp: defined only in the good range p > p_c");
    if (p > p_M(N)) {
        const double beta = 1.0 / (p - N * (2.0 - p));
        return (p - 1.0) / ((2.0 - p) * (2.0 - p) * beta);
    }
    const double num = p - N * (2.0 - p) * (p - 1.0);
    return num * num / (4.0 * p * (2.0 - p) * (2.0 - p) * (2.0 - p));
}

double lambda_ess(double m, double n) {
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("lambda_ess: need 0 < m < 1");
    if (!(n > 2.0)) throw std::invalid_argument("lambda_ess: need n > 2");
    const double num = (n - 2.0) * (1.0 - m) - 2.0;
    return num * num / (4.0 * (1.0 - m) * (1.0 - m));
}

}  // namespace pfdlab
