#include "pfdlab/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pfdlab/functionals.hpp"
#include "pfdlab/profiles.hpp"
#include "pfdlab/quadrature.hpp"
#include "pfdlab/spectra.hpp"
#include "pfdlab/transform.hpp"

namespace pfdlab {

using nlohmann::json;

void ExperimentSpec::validate() const {
    params.validate();
    if (equation != "cple" && equation != "rcple" && equation != "wfde" &&
        equation != "wfde_rescaled")
        throw std::invalid_argument("spec.equation: unknown equation '" + equation + "'");
    if (datum_kind != "barenblatt" && datum_kind != "pseudo" && datum_kind != "stationary" &&
        datum_kind != "vd_mixture" && datum_kind != "ground_mode" && datum_kind != "csv")
        throw std::invalid_argument("spec.datum.kind: unknown datum '" + datum_kind + "'");
    if (!(t_end > 0.0)) throw std::invalid_argument("spec.t_end: must be positive");
    if (grid_nodes < 64) throw std::invalid_argument("spec.grid.nodes: must be >= 64");
    solver.validate();
}

namespace {

// minimal [section]/key=value reader lowered onto the same JSON layout
json ini_to_json(const std::string& text) {
    json j = json::object();
    json* cur = &j;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto h = line.find_first_of("#;");
        if (h != std::string::npos) line = line.substr(0, h);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return (a == std::string::npos) ? std::string{} : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            const std::string sec = trim(line.substr(1, line.size() - 2));
            cur = &j[sec];
            if (!cur->is_object()) *cur = json::object();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec: malformed line '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val == "true" || val == "false") {
            (*cur)[key] = (val == "true");
        } else {
            try {
                std::size_t used = 0;
                const double d = std::stod(val, &used);
                if (used == val.size()) {
                    (*cur)[key] = d;
                    continue;
                }
            } catch (...) {
            }
            (*cur)[key] = val;
        }
    }
    return j;
}

template <class T>
void maybe(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec s;
    maybe(j, "equation", s.equation);
    maybe(j, "p", s.params.p);
    if (j.contains("N")) s.params.N = static_cast<int>(j.at("N").get<double>());
    if (j.contains("datum")) {
        const json& d = j.at("datum");
        maybe(d, "kind", s.datum_kind);
        maybe(d, "M", s.M);
        maybe(d, "D", s.D);
        maybe(d, "T", s.T);
        maybe(d, "D1", s.D1);
        maybe(d, "D2", s.D2);
        maybe(d, "delta", s.delta);
        maybe(d, "path", s.datum_path);
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("nodes")) s.grid_nodes = static_cast<std::size_t>(g.at("nodes").get<double>());
        maybe(g, "rmin", s.grid_rmin);
        maybe(g, "rmax", s.grid_rmax);
    }
    if (j.contains("solver")) {
        const json& c = j.at("solver");
        maybe(c, "dt", s.solver.dt);
        maybe(c, "eps_reg", s.solver.eps_reg);
        maybe(c, "tol_newton", s.solver.tol_newton);
        if (c.contains("max_newton"))
            s.solver.max_newton = static_cast<int>(c.at("max_newton").get<double>());
        maybe(c, "snapshot_every", s.solver.snapshot_every);
        maybe(c, "max_rel_change", s.solver.max_rel_change);
        if (c.contains("boundary")) {
            const std::string b = c.at("boundary").get<std::string>();
            if (b == "profile_match")
                s.solver.boundary = BoundaryCondition::NeumannOriginFarFieldProfileMatch;
            else if (b == "zero_flux")
                s.solver.boundary = BoundaryCondition::NeumannOriginZeroFlux;
            else
                throw std::invalid_argument("spec.solver.boundary: unknown '" + b + "'");
        }
        if (c.contains("scheme")) {
            const std::string b = c.at("scheme").get<std::string>();
            if (b == "semi_implicit") s.solver.scheme = Scheme::SemiImplicit;
            else if (b == "explicit") s.solver.scheme = Scheme::Explicit;
            else throw std::invalid_argument("spec.solver.scheme: unknown '" + b + "'");
        }
    }
    maybe(j, "t_end", s.t_end);
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        maybe(d, "entropy", s.track_entropy);
        maybe(d, "D", s.entropy_D);
        maybe(d, "fit_lo", s.fit_lo);
        maybe(d, "fit_hi", s.fit_hi);
    }
    maybe(j, "out_dir", s.out_dir);
    if (j.contains("seed")) s.seed = static_cast<std::uint64_t>(j.at("seed").get<double>());
    s.validate();
    return s;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return spec_from_json(json::parse(text));
    return spec_from_json(ini_to_json(text));
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_spec(ss.str());
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string canonical_spec_json(const ExperimentSpec& s) {
    json j;
    j["equation"] = s.equation;
    j["p"] = s.params.p;
    j["N"] = s.params.N;
    j["datum"] = {{"kind", s.datum_kind}, {"M", s.M},   {"D", s.D},
                  {"T", s.T},             {"D1", s.D1}, {"D2", s.D2},
                  {"delta", s.delta},     {"path", s.datum_path}};
    j["grid"] = {{"nodes", s.grid_nodes}, {"rmin", s.grid_rmin}, {"rmax", s.grid_rmax}};
    j["solver"] = {{"dt", s.solver.dt},
                   {"eps_reg", s.solver.eps_reg},
                   {"tol_newton", s.solver.tol_newton},
                   {"max_newton", s.solver.max_newton},
                   {"snapshot_every", s.solver.snapshot_every},
                   {"max_rel_change", s.solver.max_rel_change},
                   {"boundary", s.solver.boundary == BoundaryCondition::NeumannOriginZeroFlux
                                    ? "zero_flux"
                                    : "profile_match"},
                   {"scheme", s.solver.scheme == Scheme::Explicit ? "explicit" : "semi_implicit"}};
    j["t_end"] = s.t_end;
    j["diagnostics"] = {{"entropy", s.track_entropy},
                        {"D", s.entropy_D},
                        {"fit_lo", s.fit_lo},
                        {"fit_hi", s.fit_hi}};
    j["out_dir"] = s.out_dir;
    j["seed"] = s.seed;
    return j.dump(2);
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
    const std::string text = canonical_spec_json(spec);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RadialGridFunction build_datum(const ExperimentSpec& spec) {
    const auto grid = log_radial_grid(spec.grid_nodes, spec.grid_rmin, spec.grid_rmax);
    const Params& params = spec.params;
    RadialGridFunction f;
    f.params = params;
    f.r = grid;
    f.v.assign(grid.size(), 0.0);
    const bool selfsim = (spec.equation == "rcple" || spec.equation == "wfde_rescaled");
    f.frame = {selfsim ? FrameKind::SelfSimilar : FrameKind::Original, 0.0};

    if (spec.datum_kind == "stationary") {
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.v[i] = eval_VD(spec.D, grid[i], params).first;
    } else if (spec.datum_kind == "barenblatt") {
        BarenblattSpec b;
        b.params = params;
        b.kind = BarenblattKind::MassParam;
        b.M = spec.M;
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.v[i] = eval_barenblatt(b, spec.T, grid[i]);  // T doubles as the evaluation time
        f.frame.time = spec.T;
    } else if (spec.datum_kind == "pseudo") {
        BarenblattSpec b;
        b.params = params;
        b.kind = BarenblattKind::FreeParam;
        b.D = spec.D;
        b.T = spec.T;
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.v[i] = eval_barenblatt(b, 0.0, grid[i]);
    } else if (spec.datum_kind == "vd_mixture") {
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.v[i] = 0.5 * (eval_VD(spec.D1, grid[i], params).first +
                            eval_VD(spec.D2, grid[i], params).first);
    } else if (spec.datum_kind == "ground_mode") {
        // V_D + delta V_D^{2-gamma} g(s(r)) with the constrained ground mode g
        const auto gm = hp_ground_mode(params, 1024, 1e4);
        const double g = (2.0 * params.p - 3.0) / (params.p - 1.0);
        const double pp = params.p / (params.p - 1.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double V = eval_VD(spec.D, grid[i], params).first;
            const double sr = std::sqrt((2.0 - params.p) / (params.p * spec.D)) *
                              std::pow(grid[i], 0.5 * pp);
            double gv = 0.0;
            if (sr > 0.0) {
                auto it = std::lower_bound(gm.s.begin(), gm.s.end(), sr);
                if (it != gm.s.begin() && it != gm.s.end()) {
                    const std::size_t j = static_cast<std::size_t>(it - gm.s.begin());
                    const double t = (std::log(sr) - std::log(gm.s[j - 1])) /
                                     (std::log(gm.s[j]) - std::log(gm.s[j - 1]));
                    gv = (1.0 - t) * gm.g[j - 1] + t * gm.g[j];
                } else if (it == gm.s.begin()) {
                    gv = gm.g.front();
                } else {
                    gv = gm.g.back();
                }
            } else {
                gv = gm.g.front();
            }
            f.v[i] = std::max(V + spec.delta * std::pow(V, 2.0 - g) * gv, 0.0);
        }
    } else if (spec.datum_kind == "csv") {
        std::ifstream in(spec.datum_path);
        if (!in) throw std::invalid_argument("datum csv not found: " + spec.datum_path);
        std::vector<double> r, v;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
            double a, b;
            if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2) {
                r.push_back(a);
                v.push_back(b);
            }
        }
        f.r = r;
        f.v = v;
    }
    f.validate();
    return f;
}

void write_profile_csv(const std::string& path, const RadialGridFunction& f,
                       const std::vector<double>* deriv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << (deriv ? "r,value,derivative\n" : "r,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_double(f.r[i]) << ',' << format_double(f.v[i]);
        if (deriv) out << ',' << format_double((*deriv)[i]);
        out << '\n';
    }
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "time,mass,sup,sup_deriv,entropy,fisher,sup_rel_err\n";
    for (const auto& d : traj.diagnostics) {
        out << format_double(d.time) << ',' << format_double(d.mass) << ','
            << format_double(d.sup) << ',' << format_double(d.sup_deriv) << ','
            << (d.entropy ? format_double(*d.entropy) : "") << ','
            << (d.fisher ? format_double(*d.fisher) : "") << ','
            << (d.sup_rel_err ? format_double(*d.sup_rel_err) : "") << '\n';
    }
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult res;
    try {
        spec.validate();
        const auto datum = build_datum(spec);
        namespace fs = std::filesystem;
        fs::create_directories(spec.out_dir);

        Trajectory traj;
        const auto tc = transform_constants(spec.params);
        if (spec.equation == "cple") traj = evolve_cple(datum, spec.solver, spec.t_end);
        else if (spec.equation == "rcple") traj = evolve_rcple(datum, spec.solver, spec.t_end);
        else
            traj = evolve_wfde(datum, tc.m, tc.n, spec.solver, spec.t_end,
                               spec.equation == "wfde_rescaled");
        if (!traj.completed) throw std::runtime_error("solver: " + traj.error);

        double D = spec.entropy_D;
        const bool entropyable =
            spec.track_entropy && spec.params.p != 1.5 &&
            (spec.equation == "rcple");
        if (entropyable) {
            if (D <= 0.0) D = match_mass_D(datum);
            attach_diagnostics(traj, D);
        }

        // emit snapshots + diagnostics
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
            write_profile_csv(spec.out_dir + "/" + name, traj.snapshots[k]);
        }
        write_diagnostics_csv(spec.out_dir + "/diagnostics.csv", traj);

        // invariants: mass conservation in the good range; entropy monotone
        json inv;
        bool pass = true;
        const bool good = spec.params.p > p_c(spec.params.N) &&
                          (spec.equation == "rcple" || spec.equation == "cple");
        if (good && !traj.diagnostics.empty()) {
            const double m0 = traj.diagnostics.front().mass;
            double worst = 0;
            for (const auto& d : traj.diagnostics)
                worst = std::max(worst, std::abs(d.mass - m0) / std::max(m0, 1e-300));
            inv["mass_conservation_rel"] = worst;
            inv["mass_conserved"] = worst <= 1e-3;
            pass = pass && worst <= 1e-3;
        }
        bool entropy_monotone = true;
        std::vector<std::pair<double, double>> ent;
        for (std::size_t k = 0; k < traj.diagnostics.size(); ++k) {
            const auto& d = traj.diagnostics[k];
            if (!d.entropy) continue;
            if (!ent.empty() && *d.entropy > ent.back().second + 1e-10) entropy_monotone = false;
            ent.emplace_back(d.time, *d.entropy);
        }
        if (!ent.empty()) {
            inv["entropy_monotone"] = entropy_monotone;
            pass = pass && entropy_monotone;
        }

        // fitted entropy rate when there is a usable decaying series
        res.stationary = !ent.empty() && ent.front().second < 1e-12;
        json fits;
        if (!res.stationary && ent.size() >= 10) {
            try {
                double hi = (spec.fit_hi > spec.fit_lo) ? spec.fit_hi : spec.t_end - 0.5;
                const auto fit = fit_rate(ent, FitMode::ExpInTau, spec.fit_lo, hi);
                res.fitted_entropy_rate = fit.fitted_rate;
                fits["entropy_rate"] = fit.fitted_rate;
                fits["entropy_rate_r2"] = fit.r_squared;
            } catch (const std::exception& e) {
                fits["entropy_rate_error"] = e.what();
            }
        }

        const auto table = derived_constants(spec.params);
        json jt;
        jt["p_c"] = table.p_c; jt["p_Y"] = table.p_Y; jt["p_M"] = table.p_M;
        jt["p_D"] = table.p_D; jt["gamma"] = table.gamma; jt["beta"] = table.beta;
        jt["m"] = table.m; jt["n"] = table.n; jt["frak_a"] = table.frak_a;
        if (table.lambda_star) jt["lambda_star"] = *table.lambda_star;
        if (table.lambda_hp) jt["lambda_hp"] = *table.lambda_hp;

        json summary;
        char hash_buf[32];
        std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                      static_cast<unsigned long long>(spec_hash(spec)));
        summary["spec_hash"] = hash_buf;
        summary["build_id"] = kBuildId;
        summary["equation"] = spec.equation;
        summary["exponents"] = jt;
        summary["snapshots"] = traj.snapshots.size();
        summary["clipped_negative"] = traj.clipped_negative;
        summary["stationary"] = res.stationary;
        summary["invariants"] = inv;
        summary["fits"] = fits;
        summary["invariants_pass"] = pass;
        if (entropyable) summary["entropy_D"] = D;

        res.summary_json = summary.dump(2) + "\n";
        res.summary_path = spec.out_dir + "/summary.json";
        std::ofstream out(res.summary_path, std::ios::binary);
        out << res.summary_json;
        res.invariants_pass = pass;
        res.exit_code = pass ? 0 : 2;
        res.message = pass ? "ok" : "invariant failure";
    } catch (const std::exception& e) {
        res.exit_code = 1;
        res.invariants_pass = false;
        res.message = e.what();
    }
    return res;
}

}  // namespace pfdlab
