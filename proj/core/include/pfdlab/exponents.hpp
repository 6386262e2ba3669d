#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace pfdlab {

// Exponent pair for the fast p-Laplace evolution, 1 < p < 2, integer N >= 2.
struct Params {
    double p = 1.5;
    int N = 3;

    void validate() const {
        if (!(p > 1.0 && p < 2.0))
            throw std::invalid_argument("Params: need 1 < p < 2, got p=" + std::to_string(p));
        if (N < 2)
            throw std::invalid_argument("Params: need N >= 2, got N=" + std::to_string(N));
    }
};

// Critical exponents of dimension N.
double p_c(int N);  // 2N/(N+1), mass-conservation threshold
double p_Y(int N);  // 2N/(N+2), gradient-regularity (Yamabe) threshold
double p_M(int N);  // (3(N+1)+sqrt((N+1)^2+8))/(2(N+2)), p'-moment threshold
double p_D(int N);  // (2N+1)/(N+1), displacement-convexity threshold

// p_1/p_2: integrability thresholds for differences of Barenblatt profiles.
// Real only for N^2-6N+1 >= 0, i.e. N >= 6.
std::optional<double> p_1(int N);
std::optional<double> p_2(int N);

struct ExponentTable {
    int N = 0;
    double p = 0.0;          // 0 when only dimension-level exponents were requested
    double p_c = 0, p_Y = 0, p_M = 0, p_D = 0;
    std::optional<double> p_1, p_2;   // absent for N <= 5
    bool p_Y_admissible = true;       // false at N=2 where p_Y = 1 (boundary value)

    // p-dependent entries (populated by derived_constants)
    double gamma = 0;        // (2p-3)/(p-1); 0 exactly at p = 3/2
    double beta = 0;         // 1/(p - N(2-p)); signed infinity at p = p_c
    double m = 0;            // p - 1
    double n = 0;            // 2 + 2N(p-1)/p, artificial FDE dimension
    double frak_a = 0;       // N - n
    double theta = 0;        // 1/(2 - n(1-m)); signed infinity at p = p_c
    bool entropy_undefined = false;   // gamma == 0 (p = 3/2)

    std::optional<double> lambda_star; // good range only
    std::optional<double> lambda_hp;   // good range only
};

// Dimension-level table: the five critical exponents (no p needed).
ExponentTable critical_exponents(int N);

// Full table at (p,N): exponents plus gamma, beta, m, n, frak_a, theta and,
// in the good range, lambda_star / lambda_hp.
ExponentTable derived_constants(const Params& params);

enum class RegimeTag {
    VeryFastBelowP1,   // 1 < p < p_1 (N >= 6 only)
    MiddleP1P2,        // p_1 <= p <= p_2 (N >= 6 only; difference of Barenblatts not integrable)
    VeryFastAboveP2,   // max(1,p_2) < p < p_c   (the whole of (1,p_c) when N < 6)
    CriticalPc,        // p = p_c
    GoodPcToPM,        // p_c < p <= p_M
    GoodPMToPD,        // p_M < p < p_D
    GoodPDto2,         // p_D <= p < 2
};

const char* regime_name(RegimeTag tag);

struct Regime {
    RegimeTag tag;
    bool mass_conserved;              // p >= p_c
    bool diff_barenblatt_integrable;  // N(2-p)(p-1) < p
};

Regime classify_regime(const Params& params);

// Sharp entropy-decay constant of the paper's good-range theorem:
//   p > p_M : p - N(2-p)  ( = 1/beta )
//   p <= p_M: [p - N(2-p)(p-1)]^2 / (4 p (p-1) (2-p))
// Rejects p <= p_c (no rate is given there).
double lambda_star(const Params& params);

// Closed-form optimal Hardy-Poincare constant:
//   p > p_M : (p-1)/((2-p)^2 beta)
//   p <= p_M: [p - N(2-p)(p-1)]^2 / (4 p (2-p)^3)
// Satisfies (2-p)^2 lambda_hp / (p-1) == lambda_star identically.
double lambda_hp(const Params& params);

// Essential-spectrum constant of the weighted FDE linearization:
//   ((n-2)(1-m) - 2)^2 / (4 (1-m)^2),  0 < m < 1, n > 2.
double lambda_ess(double m, double n);

}  // namespace pfdlab
