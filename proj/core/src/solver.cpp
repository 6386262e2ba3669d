#include "pfdlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pfdlab/quadrature.hpp"

namespace pfdlab {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
    if (!(tol_newton > 0.0)) throw std::invalid_argument("SolverConfig: tol_newton must be > 0");
    if (max_newton < 2) throw std::invalid_argument("SolverConfig: max_newton must be >= 2");
    if (!(snapshot_every > 0.0))
        throw std::invalid_argument("SolverConfig: snapshot_every must be > 0");
}

namespace {

// Face geometry shared by all radial finite-volume models. "dim" may be a real
// (artificial) dimension for the weighted FDE.
struct FaceGeometry {
    std::vector<double> face;  // interior faces, size K-1
    std::vector<double> h;     // node spacings, size K-1
    std::vector<double> vol;   // cell volumes / omega_N, size K
    std::vector<double> area;  // face^{dim-1}, size K-1
    double face_out = 0, h_out = 0, area_out = 0, r_ghost = 0;

    FaceGeometry(const std::vector<double>& r, double dim) {
        const std::size_t K = r.size();
        face.resize(K - 1);
        h.resize(K - 1);
        area.resize(K - 1);
        vol.assign(K, 0.0);
        for (std::size_t j = 0; j + 1 < K; ++j) {
            face[j] = 0.5 * (r[j] + r[j + 1]);
            h[j] = r[j + 1] - r[j];
            area[j] = std::pow(face[j], dim - 1.0);
        }
        const double q = r[K - 1] / r[K - 2];
        r_ghost = r[K - 1] * q;
        face_out = 0.5 * (r[K - 1] + r_ghost);
        h_out = r_ghost - r[K - 1];
        area_out = std::pow(face_out, dim - 1.0);
        vol[0] = std::pow(face[0], dim) / dim;
        for (std::size_t i = 1; i + 1 < K; ++i)
            vol[i] = (std::pow(face[i], dim) - std::pow(face[i - 1], dim)) / dim;
        vol[K - 1] = (std::pow(face_out, dim) - std::pow(face[K - 2], dim)) / dim;
    }
};

struct FaceFlux {
    double value = 0;
    double d_left = 0;   // d/dv_j
    double d_right = 0;  // d/dv_{j+1}
};

double phi_eps(double s, double eps, double p) {
    return std::pow(s * s + eps * eps, 0.5 * (p - 2.0)) * s;
}
double dphi_eps(double s, double eps, double p) {
    const double e2 = eps * eps;
    return std::pow(s * s + e2, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + e2);
}

// Smallest positive initial face slope, the scale the auto regularization hangs on.
double auto_eps(const std::vector<double>& slopes, double sup) {
    double smin = 0.0;
    for (double s : slopes) {
        const double a = std::abs(s);
        if (a > 1e-290 && (smin == 0.0 || a < smin)) smin = a;
    }
    return smin > 0.0 ? 1e-3 * smin : 1e-12 * (sup + 1.0);
}

// ---- equation models --------------------------------------------------------

// Plain p-Laplace flux Phi_eps(d_r u): original-variables equation.
class CpleModel {
  public:
    CpleModel(const Params& params, const FaceGeometry& geo, const std::vector<double>& v0,
              double eps_reg, BoundaryCondition bc)
        : p_(params.p), geo_(geo), bc_(bc) {
        std::vector<double> s(geo.h.size());
        double sup = 0.0;
        for (std::size_t j = 0; j < geo.h.size(); ++j) {
            s[j] = (v0[j + 1] - v0[j]) / geo.h[j];
            sup = std::max(sup, v0[j]);
        }
        eps_ = (eps_reg >= 0.0) ? eps_reg : auto_eps(s, sup);
    }

    FaceFlux face(std::size_t j, const std::vector<double>& v) const {
        const double s = (v[j + 1] - v[j]) / geo_.h[j];
        FaceFlux F;
        F.value = geo_.area[j] * phi_eps(s, eps_, p_);
        const double d = geo_.area[j] * dphi_eps(s, eps_, p_) / geo_.h[j];
        F.d_left = -d;
        F.d_right = d;
        return F;
    }

    // Outer face: ghost continues the local power law  v_g = v_K (v_K/v_{K-1})^alpha
    // (alpha = 1 on a log grid), clamped to a nonincreasing tail.
    FaceFlux outer(const std::vector<double>& v) const {
        FaceFlux F;
        if (bc_ == BoundaryCondition::NeumannOriginZeroFlux) return F;
        const std::size_t K = v.size();
        const double a = v[K - 2], b = v[K - 1];
        double vg = 0, dvg_b = 0, dvg_a = 0;
        if (a > 0.0 && b > 0.0 && b <= a) {
            vg = b * b / a;
            dvg_b = 2.0 * b / a;
            dvg_a = -(b / a) * (b / a);
        }
        const double s = (vg - b) / geo_.h_out;
        F.value = geo_.area_out * phi_eps(s, eps_, p_);
        const double dp = geo_.area_out * dphi_eps(s, eps_, p_) / geo_.h_out;
        F.d_right = dp * (dvg_b - 1.0);  // w.r.t. v_{K-1}
        F.d_left = dp * dvg_a;           // w.r.t. v_{K-2}
        return F;
    }

    double eps() const { return eps_; }

  private:
    double p_;
    const FaceGeometry& geo_;
    BoundaryCondition bc_;
    double eps_ = 0;
};

// Well-balanced rescaled flux  v [ rho_j - Phi_eps(d_r v^{gamma-1}) / |gamma-1|^{p-1} ],
// where rho_j is the face value the V_D family produces exactly (D-independent).
class RcpleModel {
  public:
    RcpleModel(const Params& params, const FaceGeometry& geo, const std::vector<double>& v0,
               double eps_reg, BoundaryCondition bc, const std::vector<double>& r)
        : p_(params.p), geo_(geo), bc_(bc) {
        g_ = (2.0 * p_ - 3.0) / (p_ - 1.0);
        c_ = std::pow(std::abs(g_ - 1.0), p_ - 1.0);
        vfloor_ = 1e-30 * ([&] {
            double s = 0;
            for (double x : v0) s = std::max(s, x);
            return s + 1.0;
        }());
        const double pp = p_ / (p_ - 1.0);
        dwV_.resize(geo.h.size());
        for (std::size_t j = 0; j < geo.h.size(); ++j)
            dwV_[j] = (2.0 - p_) / p_ * (std::pow(r[j + 1], pp) - std::pow(r[j], pp)) / geo.h[j];
        dwV_out_ =
            (2.0 - p_) / p_ * (std::pow(geo.r_ghost, pp) - std::pow(r.back(), pp)) / geo.h_out;
        if (eps_reg >= 0.0) {
            eps_ = eps_reg;
        } else {
            double med = dwV_[dwV_.size() / 2];
            eps_ = 1e-8 * med;
        }
        rho_.resize(dwV_.size());
        for (std::size_t j = 0; j < dwV_.size(); ++j) rho_[j] = phi_eps(dwV_[j], eps_, p_) / c_;
        rho_out_ = phi_eps(dwV_out_, eps_, p_) / c_;
    }

    double w_of(double v) const { return std::pow(std::max(v, vfloor_), g_ - 1.0); }
    double dw_dv(double v) const {
        return v > vfloor_ ? (g_ - 1.0) * std::pow(v, g_ - 2.0) : 0.0;
    }

    FaceFlux face(std::size_t j, const std::vector<double>& v) const {
        const double wl = w_of(v[j]), wr = w_of(v[j + 1]);
        const double s = (wr - wl) / geo_.h[j];
        const double vb = 0.5 * (v[j] + v[j + 1]);
        const double bracket = rho_[j] - phi_eps(s, eps_, p_) / c_;
        const double dbr = -dphi_eps(s, eps_, p_) / c_;
        FaceFlux F;
        F.value = geo_.area[j] * vb * bracket;
        F.d_left = geo_.area[j] * (0.5 * bracket + vb * dbr * (-dw_dv(v[j]) / geo_.h[j]));
        F.d_right = geo_.area[j] * (0.5 * bracket + vb * dbr * (dw_dv(v[j + 1]) / geo_.h[j]));
        return F;
    }

    // Ghost continues w = v^{gamma-1} along the Barenblatt family (profile match):
    // the family increment is D-free, plus the local deviation slope of the data.
    FaceFlux outer(const std::vector<double>& v) const {
        FaceFlux F;
        if (bc_ == BoundaryCondition::NeumannOriginZeroFlux) return F;
        const std::size_t K = v.size();
        const double wK = w_of(v[K - 1]), wKm1 = w_of(v[K - 2]);
        const double hK = geo_.h.back();
        const double dev = (wK - wKm1) / hK - dwV_.back();
        const double sg = dwV_out_ + dev;
        const double wg = wK + sg * geo_.h_out;
        if (!(wg > 0.0)) return F;
        const double vg = std::pow(wg, 1.0 / (g_ - 1.0));
        const double vb = 0.5 * (v[K - 1] + vg);
        const double bracket = rho_out_ - phi_eps(sg, eps_, p_) / c_;
        const double dbr = -dphi_eps(sg, eps_, p_) / c_;
        // sg depends on w_K, w_{K-1}; v_g on w_g = w_K + sg h_out
        const double dsg_dwK = 1.0 / hK, dsg_dwKm1 = -1.0 / hK;
        const double dwg_dwK = 1.0 + geo_.h_out * dsg_dwK;
        const double dwg_dwKm1 = geo_.h_out * dsg_dwKm1;
        const double dvg_dwg = (1.0 / (g_ - 1.0)) * std::pow(wg, 1.0 / (g_ - 1.0) - 1.0);
        F.value = geo_.area_out * vb * bracket;
        const double dF_dwK =
            geo_.area_out * (0.5 * dvg_dwg * dwg_dwK * bracket + vb * dbr * dsg_dwK);
        const double dF_dwKm1 =
            geo_.area_out * (0.5 * dvg_dwg * dwg_dwKm1 * bracket + vb * dbr * dsg_dwKm1);
        F.d_right = geo_.area_out * 0.5 * bracket + dF_dwK * dw_dv(v[K - 1]);
        F.d_left = dF_dwKm1 * dw_dv(v[K - 2]);
        return F;
    }

    double eps() const { return eps_; }

  private:
    double p_, g_, c_, vfloor_, eps_ = 0;
    const FaceGeometry& geo_;
    BoundaryCondition bc_;
    std::vector<double> dwV_, rho_;
    double dwV_out_ = 0, rho_out_ = 0;
};

// Weighted FDE flux. Unrescaled: d_rho(Phi^m). Rescaled: well-balanced form
// Psi [ f - (m/(1-m)) d_rho Psi^{m-1} ], exact on the frak-U family.
class WfdeModel {
  public:
    WfdeModel(double m, const FaceGeometry& geo, const std::vector<double>& v0, bool rescaled,
              BoundaryCondition bc)
        : m_(m), geo_(geo), rescaled_(rescaled), bc_(bc) {
        double sup = 0;
        for (double x : v0) sup = std::max(sup, x);
        vfloor_ = 1e-30 * (sup + 1.0);
    }

    double xi_of(double v) const { return std::pow(std::max(v, vfloor_), m_ - 1.0); }
    double dxi_dv(double v) const {
        return v > vfloor_ ? (m_ - 1.0) * std::pow(v, m_ - 2.0) : 0.0;
    }
    double pm_of(double v) const { return std::pow(std::max(v, 0.0), m_); }
    double dpm_dv(double v) const {
        return v > vfloor_ ? m_ * std::pow(v, m_ - 1.0) : m_ * std::pow(vfloor_, m_ - 1.0);
    }

    FaceFlux face(std::size_t j, const std::vector<double>& v) const {
        FaceFlux F;
        if (!rescaled_) {
            const double s = (pm_of(v[j + 1]) - pm_of(v[j])) / geo_.h[j];
            F.value = geo_.area[j] * s;
            F.d_left = -geo_.area[j] * dpm_dv(v[j]) / geo_.h[j];
            F.d_right = geo_.area[j] * dpm_dv(v[j + 1]) / geo_.h[j];
            return F;
        }
        const double k = m_ / (1.0 - m_);
        const double s = (xi_of(v[j + 1]) - xi_of(v[j])) / geo_.h[j];
        const double vb = 0.5 * (v[j] + v[j + 1]);
        const double bracket = geo_.face[j] - k * s;
        F.value = geo_.area[j] * vb * bracket;
        F.d_left = geo_.area[j] * (0.5 * bracket + vb * (-k) * (-dxi_dv(v[j]) / geo_.h[j]));
        F.d_right = geo_.area[j] * (0.5 * bracket + vb * (-k) * (dxi_dv(v[j + 1]) / geo_.h[j]));
        return F;
    }

    FaceFlux outer(const std::vector<double>& v) const {
        FaceFlux F;
        if (bc_ == BoundaryCondition::NeumannOriginZeroFlux) return F;
        const std::size_t K = v.size();
        if (!rescaled_) {
            // geometric continuation of Psi (local power law), nonincreasing tail
            const double a = v[K - 2], b = v[K - 1];
            double vg = 0, dvg_b = 0, dvg_a = 0;
            if (a > 0.0 && b > 0.0 && b <= a) {
                vg = b * b / a;
                dvg_b = 2.0 * b / a;
                dvg_a = -(b / a) * (b / a);
            }
            const double s = (pm_of(vg) - pm_of(b)) / geo_.h_out;
            F.value = geo_.area_out * s;
            const double d = geo_.area_out / geo_.h_out;
            F.d_right = d * (dpm_dv(vg) * dvg_b - dpm_dv(b));
            F.d_left = d * dpm_dv(vg) * dvg_a;
            return F;
        }
        // xi = Psi^{m-1} is affine in rho^2 on the frak-U family; continue it with
        // the family increment plus the local deviation slope.
        const double cm = (1.0 - m_) / (2.0 * m_);
        const double k = m_ / (1.0 - m_);
        const double xK = xi_of(v[K - 1]), xKm1 = xi_of(v[K - 2]);
        const double hK = geo_.h.back();
        const double rK = geo_.r_ghost - geo_.h_out;  // last node radius
        const double rKm1 = rK - hK;
        const double famK = cm * (rK * rK - rKm1 * rKm1) / hK;
        const double famOut = cm * (geo_.r_ghost * geo_.r_ghost - rK * rK) / geo_.h_out;
        const double dev = (xK - xKm1) / hK - famK;
        const double sg = famOut + dev;
        const double xg = xK + sg * geo_.h_out;
        if (!(xg > 0.0)) return F;
        const double vg = std::pow(xg, 1.0 / (m_ - 1.0));
        const double vb = 0.5 * (v[K - 1] + vg);
        const double bracket = geo_.face_out - k * sg;
        const double dsg_dxK = 1.0 / hK, dsg_dxKm1 = -1.0 / hK;
        const double dxg_dxK = 1.0 + geo_.h_out * dsg_dxK;
        const double dxg_dxKm1 = geo_.h_out * dsg_dxKm1;
        const double dvg_dxg = (1.0 / (m_ - 1.0)) * std::pow(xg, 1.0 / (m_ - 1.0) - 1.0);
        F.value = geo_.area_out * vb * bracket;
        const double dF_dxK =
            geo_.area_out * (0.5 * dvg_dxg * dxg_dxK * bracket + vb * (-k) * dsg_dxK);
        const double dF_dxKm1 =
            geo_.area_out * (0.5 * dvg_dxg * dxg_dxKm1 * bracket + vb * (-k) * dsg_dxKm1);
        F.d_right = geo_.area_out * 0.5 * bracket + dF_dxK * dxi_dv(v[K - 1]);
        F.d_left = dF_dxKm1 * dxi_dv(v[K - 2]);
        return F;
    }

  private:
    double m_, vfloor_;
    const FaceGeometry& geo_;
    bool rescaled_;
    BoundaryCondition bc_;
};

void thomas_solve(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
                  std::vector<double>& rhs, std::vector<double>& x) {
    const std::size_t K = di.size();
    static thread_local std::vector<double> cp, dq;
    cp.assign(K, 0.0);
    dq.assign(K, 0.0);
    cp[0] = up[0] / di[0];
    dq[0] = rhs[0] / di[0];
    for (std::size_t i = 1; i < K; ++i) {
        const double m = di[i] - lo[i] * cp[i - 1];
        cp[i] = (i + 1 < K) ? up[i] / m : 0.0;
        dq[i] = (rhs[i] - lo[i] * dq[i - 1]) / m;
    }
    x[K - 1] = dq[K - 1];
    for (std::size_t i = K - 1; i-- > 0;) x[i] = dq[i] - cp[i] * x[i + 1];
}

template <class Model>
class Stepper {
  public:
    Stepper(const Model& model, const FaceGeometry& geo, const SolverConfig& config)
        : model_(model), geo_(geo), config_(config) {}

    // One backward-Euler step by Newton. Returns false on non-convergence.
    bool implicit_step(const std::vector<double>& v, double dt, std::vector<double>& out) const {
        const std::size_t K = v.size();
        out = v;
        double sup = 0;
        for (double x : v) sup = std::max(sup, x);
        sup += 1e-300;
        static thread_local std::vector<double> R, lo, di, up, dx;
        R.assign(K, 0.0);
        lo.assign(K, 0.0);
        di.assign(K, 0.0);
        up.assign(K, 0.0);
        dx.assign(K, 0.0);
        static thread_local std::vector<FaceFlux> F;
        F.assign(K - 1, FaceFlux{});

        for (int it = 0; it < config_.max_newton; ++it) {
            for (std::size_t j = 0; j + 1 < K; ++j) F[j] = model_.face(j, out);
            const FaceFlux Fo = model_.outer(out);
            for (std::size_t i = 0; i < K; ++i) R[i] = (out[i] - v[i]) * geo_.vol[i] / dt;
            R[0] -= F[0].value;
            for (std::size_t i = 1; i + 1 < K; ++i) R[i] -= (F[i].value - F[i - 1].value);
            R[K - 1] -= (Fo.value - F[K - 2].value);

            di[0] = geo_.vol[0] / dt - F[0].d_left;
            up[0] = -F[0].d_right;
            for (std::size_t i = 1; i + 1 < K; ++i) {
                lo[i] = F[i - 1].d_left;
                di[i] = geo_.vol[i] / dt + F[i - 1].d_right - F[i].d_left;
                up[i] = -F[i].d_right;
            }
            lo[K - 1] = F[K - 2].d_left - Fo.d_left;
            di[K - 1] = geo_.vol[K - 1] / dt + F[K - 2].d_right - Fo.d_right;

            thomas_solve(lo, di, up, R, dx);
            double upd = 0;
            bool finite = true;
            for (std::size_t i = 0; i < K; ++i) {
                out[i] -= dx[i];
                upd = std::max(upd, std::abs(dx[i]));
                finite = finite && std::isfinite(out[i]);
            }
            if (!finite) return false;
            if (upd / sup < config_.tol_newton) return true;
        }
        return false;
    }

    bool explicit_step(const std::vector<double>& v, double dt, std::vector<double>& out) const {
        const std::size_t K = v.size();
        out.resize(K);
        static thread_local std::vector<double> Fv;
        Fv.assign(K - 1, 0.0);
        for (std::size_t j = 0; j + 1 < K; ++j) Fv[j] = model_.face(j, v).value;
        const double Fo = model_.outer(v).value;
        out[0] = v[0] + dt * Fv[0] / geo_.vol[0];
        for (std::size_t i = 1; i + 1 < K; ++i)
            out[i] = v[i] + dt * (Fv[i] - Fv[i - 1]) / geo_.vol[i];
        out[K - 1] = v[K - 1] + dt * (Fo - Fv[K - 2]) / geo_.vol[K - 1];
        for (double x : out)
            if (!std::isfinite(x)) return false;
        return true;
    }

  private:
    const Model& model_;
    const FaceGeometry& geo_;
    const SolverConfig& config_;
};

template <class Model>
Trajectory run_evolution(const RadialGridFunction& v0, const Model& model,
                         const FaceGeometry& geo, const SolverConfig& config, double t_end,
                         FrameKind frame, double mass_weight_dim) {
    Trajectory traj;
    const double t0 = v0.frame.time;
    const double omega = sphere_area(v0.params.N);

    std::vector<double> v = v0.v;
    Stepper<Model> stepper(model, geo, config);

    auto record = [&](double t, const std::vector<double>& vv) {
        RadialGridFunction f;
        f.r = v0.r;
        f.v = vv;
        f.frame = {frame, t};
        f.params = v0.params;
        SnapshotDiagnostics d;
        d.time = t;
        double fv_mass = 0;
        for (std::size_t i = 0; i < vv.size(); ++i) fv_mass += vv[i] * geo.vol[i];
        d.mass = omega * fv_mass;
        d.sup = f.sup();
        const auto der = radial_derivative(f.r, f.v);
        for (double x : der) d.sup_deriv = std::max(d.sup_deriv, std::abs(x));
        traj.times.push_back(t);
        traj.snapshots.push_back(std::move(f));
        traj.diagnostics.push_back(d);
        (void)mass_weight_dim;
    };

    record(t0, v);
    double t = t0;
    double dt = config.dt;
    const double horizon = t0 + t_end;
    double next_snap = t0 + config.snapshot_every;
    std::vector<double> vn;

    while (t < horizon - 1e-14 * std::max(1.0, horizon)) {
        double step_dt = std::min({dt, horizon - t, next_snap - t});
        bool ok = false;
        double rel_change = 0.0;
        for (int tries = 0; tries < 14; ++tries) {
            ok = (config.scheme == Scheme::SemiImplicit) ? stepper.implicit_step(v, step_dt, vn)
                                                         : stepper.explicit_step(v, step_dt, vn);
            if (ok) {
                double sup = 0, ch = 0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    sup = std::max(sup, v[i]);
                    ch = std::max(ch, std::abs(vn[i] - v[i]));
                }
                rel_change = (sup > 0) ? ch / sup : 0.0;
                if (rel_change > 2.0 * config.max_rel_change && step_dt > 1e-12)
                    ok = false;  // too aggressive, halve below
            }
            if (ok) break;
            step_dt *= 0.5;
            dt = std::min(dt, step_dt);
            if (step_dt < 1e-14 * std::max(1.0, horizon)) break;
        }
        if (!ok) {
            traj.completed = false;
            traj.error = "time stepper failed to converge at t = " + std::to_string(t);
            return traj;
        }
        // clip undershoots
        double sup = 0;
        for (double x : vn) sup = std::max(sup, x);
        double worst = 0;
        for (double& x : vn) {
            if (x < 0.0) {
                worst = std::min(worst, x);
                x = 0.0;
                ++traj.clipped_negative;
            }
        }
        if (worst < -config.clip_abort * (sup + 1e-300)) {
            traj.completed = false;
            traj.error = "instability: undershoot " + std::to_string(worst) + " at t = " +
                         std::to_string(t);
            return traj;
        }
        t += step_dt;
        v.swap(vn);
        if (t >= next_snap - 1e-12 * std::max(1.0, std::abs(next_snap))) {
            record(t, v);
            next_snap += config.snapshot_every;
        }
        if (rel_change < 0.25 * config.max_rel_change) dt = std::min(dt * 1.25, config.dt);
    }
    if (traj.times.back() < t) record(t, v);
    return traj;
}

}  // namespace

Trajectory evolve_cple(const RadialGridFunction& u0, const SolverConfig& config, double t_end) {
    u0.validate();
    config.validate();
    FaceGeometry geo(u0.r, u0.params.N);
    CpleModel model(u0.params, geo, u0.v, config.eps_reg, config.boundary);
    return run_evolution(u0, model, geo, config, t_end, FrameKind::Original, u0.params.N);
}

Trajectory evolve_rcple(const RadialGridFunction& v0, const SolverConfig& config,
                        double tau_end) {
    v0.validate();
    config.validate();
    FaceGeometry geo(v0.r, v0.params.N);
    RcpleModel model(v0.params, geo, v0.v, config.eps_reg, config.boundary, v0.r);
    return run_evolution(v0, model, geo, config, tau_end, FrameKind::SelfSimilar, v0.params.N);
}

Trajectory evolve_wfde(const RadialGridFunction& phi0, double m, double n,
                       const SolverConfig& config, double t_end, bool rescaled) {
    phi0.validate();
    config.validate();
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("evolve_wfde: need 0 < m < 1");
    if (!(n > 2.0)) throw std::invalid_argument("evolve_wfde: need n > 2");
    FaceGeometry geo(phi0.r, n);
    WfdeModel model(m, geo, phi0.v, rescaled, config.boundary);
    return run_evolution(phi0, model, geo, config, t_end,
                         rescaled ? FrameKind::SelfSimilar : FrameKind::Original, n);
}

ComparisonReport comparison_probe(const RadialGridFunction& u0_low,
                                  const RadialGridFunction& u0_high, const SolverConfig& config,
                                  double t_end) {
    u0_low.validate();
    u0_high.validate();
    if (u0_low.r != u0_high.r)
        throw std::invalid_argument("comparison_probe: grids must coincide");
    for (std::size_t i = 0; i < u0_low.size(); ++i)
        if (u0_low.v[i] > u0_high.v[i] + 1e-14 * (1.0 + u0_high.v[i]))
            throw std::invalid_argument("comparison_probe: data not ordered at node " +
                                        std::to_string(i));
    ComparisonReport rep;
    rep.low = evolve_rcple(u0_low, config, t_end);
    rep.high = evolve_rcple(u0_high, config, t_end);
    const std::size_t n = std::min(rep.low.snapshots.size(), rep.high.snapshots.size());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < u0_low.size(); ++i)
            rep.max_violation =
                std::max(rep.max_violation, rep.low.snapshots[k].v[i] - rep.high.snapshots[k].v[i]);
    rep.max_violation = std::max(rep.max_violation, 0.0);
    return rep;
}

}  // namespace pfdlab
