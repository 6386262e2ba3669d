#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "pfdlab/experiment.hpp"
#include "pfdlab/exponents.hpp"
#include "pfdlab/functionals.hpp"
#include "pfdlab/profiles.hpp"
#include "pfdlab/rates.hpp"
#include "pfdlab/solver.hpp"
#include "pfdlab/spectra.hpp"
#include "pfdlab/transform.hpp"

using namespace pfdlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string out_root() {
    if (const char* env = std::getenv("PFDLAB_OUT")) return env;
    return ".";
}

int cmd_exponents(int N, double p, const std::string& format) {
    json j;
    if (p > 0.0) {
        const auto t = derived_constants({p, N});
        j = {{"N", N},       {"p", p},           {"p_c", t.p_c},     {"p_Y", t.p_Y},
             {"p_M", t.p_M}, {"p_D", t.p_D},     {"gamma", t.gamma}, {"beta", t.beta},
             {"m", t.m},     {"n", t.n},         {"frak_a", t.frak_a}, {"theta", t.theta},
             {"entropy_undefined", t.entropy_undefined}};
        if (t.p_1) j["p_1"] = *t.p_1;
        if (t.p_2) j["p_2"] = *t.p_2;
        if (t.lambda_star) j["lambda_star"] = *t.lambda_star;
        if (t.lambda_hp) j["lambda_hp"] = *t.lambda_hp;
        const auto reg = classify_regime({p, N});
        j["regime"] = regime_name(reg.tag);
        j["mass_conserved"] = reg.mass_conserved;
        j["diff_barenblatt_integrable"] = reg.diff_barenblatt_integrable;
    } else {
        const auto t = critical_exponents(N);
        j = {{"N", N}, {"p_c", t.p_c}, {"p_Y", t.p_Y}, {"p_M", t.p_M}, {"p_D", t.p_D},
             {"p_Y_admissible", t.p_Y_admissible}};
        if (t.p_1) j["p_1"] = *t.p_1;
        if (t.p_2) j["p_2"] = *t.p_2;
    }
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        std::string header, row;
        for (auto it = j.begin(); it != j.end(); ++it) {
            header += it.key() + ",";
            row += (it->is_number() ? format_double(it->get<double>()) : it->dump()) + ",";
        }
        header.pop_back();
        row.pop_back();
        std::cout << header << "\n" << row << "\n";
    } else {
        for (auto it = j.begin(); it != j.end(); ++it)
            std::cout << it.key() << " = "
                      << (it->is_number() ? format_double(it->get<double>()) : it->dump())
                      << "\n";
    }
    return 0;
}

int cmd_profile(const std::string& kind, double p, int N, double M, double D, double T,
                double t_eval, const std::string& emit) {
    Params params{p, N};
    auto grid = log_radial_grid();
    RadialGridFunction f;
    f.params = params;
    f.r = grid;
    f.v.resize(grid.size());
    if (kind == "stationary") {
        for (std::size_t i = 0; i < grid.size(); ++i) f.v[i] = eval_VD(D, grid[i], params).first;
        f.frame = {FrameKind::SelfSimilar, 0.0};
    } else if (kind == "barenblatt") {
        BarenblattSpec s;
        s.params = params;
        s.kind = BarenblattKind::MassParam;
        s.M = M;
        f = sample_barenblatt(s, t_eval, grid);
    } else if (kind == "pseudo") {
        BarenblattSpec s;
        s.params = params;
        s.kind = BarenblattKind::FreeParam;
        s.D = D;
        s.T = T;
        f = sample_barenblatt(s, t_eval, grid);
    } else if (kind == "fde") {
        const auto c = transform_constants(params);
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.v[i] = eval_fde_barenblatt(M, std::max(t_eval, 1e-12), grid[i], c.m, c.n, N);
        f.frame = {FrameKind::Original, t_eval};
    } else {
        std::cerr << "unknown profile kind '" << kind << "'\n";
        return 1;
    }
    const auto der = radial_derivative(f);
    if (emit.empty() || emit == "-") {
        std::cout << "r,value,derivative\n";
        for (std::size_t i = 0; i < f.size(); ++i)
            std::cout << format_double(f.r[i]) << ',' << format_double(f.v[i]) << ','
                      << format_double(der[i]) << "\n";
    } else {
        write_profile_csv(emit, f, &der);
    }
    return 0;
}

int cmd_evolve(const std::string& equation, const std::string& config_path, double t_end,
               double snapshot_every, const std::string& out_dir) {
    ExperimentSpec spec;
    if (!config_path.empty()) spec = load_experiment_spec(config_path);
    if (!equation.empty()) spec.equation = equation;
    if (t_end > 0) spec.t_end = t_end;
    if (snapshot_every > 0) spec.solver.snapshot_every = snapshot_every;
    if (!out_dir.empty()) spec.out_dir = out_dir;
    else if (spec.out_dir == "out") spec.out_dir = out_root() + "/evolve";
    const auto res = run_experiment(spec);
    if (res.exit_code != 0) std::cerr << res.message << "\n";
    else std::cout << "wrote " << res.summary_path << "\n";
    return res.exit_code;
}

int cmd_entropy_track(const std::string& traj_dir, double p, int N, double D,
                      const std::string& out_path) {
    Params params{p, N};
    // times come from the run's diagnostics.csv
    std::ifstream diag(traj_dir + "/diagnostics.csv");
    if (!diag) {
        std::cerr << "no diagnostics.csv under " << traj_dir << "\n";
        return 1;
    }
    std::vector<double> times;
    std::string line;
    std::getline(diag, line);  // header
    while (std::getline(diag, line)) {
        if (line.empty()) continue;
        times.push_back(std::atof(line.c_str()));
    }
    std::ofstream out(out_path, std::ios::binary);
    out << "time,entropy,fisher,lin_entropy,lin_fisher_gamma,lin_fisher\n";
    for (std::size_t k = 0;; ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "%s/snapshot_%04zu.csv", traj_dir.c_str(), k);
        std::ifstream in(name);
        if (!in) break;
        RadialGridFunction f;
        f.params = params;
        f.frame = {FrameKind::SelfSimilar, k < times.size() ? times[k] : static_cast<double>(k)};
        std::getline(in, line);
        while (std::getline(in, line)) {
            double r, v;
            if (std::sscanf(line.c_str(), "%lf,%lf", &r, &v) == 2) {
                f.r.push_back(r);
                f.v.push_back(v);
            }
        }
        const auto rep = entropy_report(f, D, 0.0);
        out << format_double(f.frame.time) << ','
            << (rep.entropy_finite ? format_double(rep.entropy) : "") << ','
            << (rep.fisher_finite ? format_double(rep.fisher) : "") << ','
            << (rep.linear_finite ? format_double(rep.lin_entropy) : "") << ','
            << (rep.linear_finite ? format_double(rep.lin_fisher_gamma) : "") << ','
            << (rep.linear_finite ? format_double(rep.lin_fisher) : "") << '\n';
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_transform_check(double p, int N, const std::string& datum, int refinements,
                        double t_end, const std::string& out_path) {
    Params params{p, N};
    const auto tc = transform_constants(params);
    std::ofstream out(out_path, std::ios::binary);
    out << "nodes,h_rel,discrepancy\n";
    double prev = 0;
    for (int k = 0; k < refinements; ++k) {
        const std::size_t nodes = 512u << k;
        const auto grid = log_radial_grid(nodes, 1e-3, 1e2);
        RadialGridFunction u0;
        u0.params = params;
        u0.r = grid;
        u0.v.resize(grid.size());
        if (datum == "barenblatt" && p > p_c(N)) {
            BarenblattSpec s;
            s.params = params;
            s.kind = BarenblattKind::MassParam;
            s.M = 1.0;
            u0 = sample_barenblatt(s, 1.0, grid);
        } else if (datum == "sandwich") {
            BarenblattSpec s;
            s.params = params;
            s.kind = (p > p_c(N)) ? BarenblattKind::MassParam : BarenblattKind::FreeParam;
            s.M = 1.0;
            s.D = 1.0;
            s.T = 4.0;
            const auto a = sample_barenblatt(s, 0.5, grid);
            s.D = (p > p_c(N)) ? s.D : 1.3;
            s.M = 1.4;
            const auto b = sample_barenblatt(s, 0.5, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) u0.v[i] = 0.5 * (a.v[i] + b.v[i]);
            u0.frame = {FrameKind::Original, 0.0};
        } else {
            BarenblattSpec s;
            s.params = params;
            s.kind = BarenblattKind::FreeParam;
            s.D = 1.0;
            s.T = 4.0;
            u0 = sample_barenblatt(s, 0.0, grid);
        }
        u0.frame.time = 0.0;

        SolverConfig cfg;
        cfg.dt = 1e-3 / (1 << k);
        cfg.snapshot_every = t_end / 4;
        auto u_traj = evolve_cple(u0, cfg, t_end);
        auto phi0 = u_to_phi(u0);
        auto phi_traj = evolve_wfde(phi0, tc.m, tc.n, cfg, t_end, false);
        const auto rep = equivalence_residual(u_traj, phi_traj);
        out << nodes << ',' << format_double(1.0 / nodes) << ','
            << format_double(rep.max_discrepancy) << "\n";
        std::cout << "nodes=" << nodes << " discrepancy=" << rep.max_discrepancy
                  << (k > 0 ? (" factor=" + std::to_string(prev / rep.max_discrepancy)) : "")
                  << "\n";
        prev = rep.max_discrepancy;
    }
    return 0;
}

int cmd_hp_spectrum(double p, int N, std::size_t nodes, double domain,
                    const std::string& out_path) {
    Params params{p, N};
    json j;
    if (domain > 0) {
        const auto sp = SpectralProblem::assemble(params, nodes, 1e-4, domain);
        const double lam = sp.smallest_constrained();
        j["lambda_opt"] = lam;
        j["lambda_hp_est"] = p * lam / (4.0 * (2.0 - p));
        j["domain"] = domain;
    } else {
        const auto res = hp_optimal_constant(params, nodes);
        j["lambda_opt"] = res.lambda_opt;
        j["lambda_hp_est"] = res.lambda_hp_est;
        j["essential_estimate"] = res.essential_estimate;
        j["domains"] = res.domain_sizes;
        j["history"] = res.history;
    }
    try {
        j["lambda_hp_closed_form"] = lambda_hp(params);
        j["lambda_star"] = lambda_star(params);
    } catch (const std::exception&) {
    }
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") std::cout << text;
    else {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
    }
    return 0;
}

int cmd_rate_fit(const std::string& diag_path, const std::string& column,
                 const std::string& mode, const std::string& window) {
    std::ifstream in(diag_path);
    if (!in) {
        std::cerr << "cannot open " << diag_path << "\n";
        return 1;
    }
    std::string header;
    std::getline(in, header);
    int col = -1, c = 0;
    std::string want = column;
    if (column == "l1") want = "mass";  // alias kept for spec'd column names
    if (column == "rel_sup") want = "sup_rel_err";
    std::stringstream hs(header);
    std::string tok;
    while (std::getline(hs, tok, ',')) {
        if (tok == want || tok == column) col = c;
        ++c;
    }
    if (col < 0) {
        std::cerr << "column '" << column << "' not in " << header << "\n";
        return 1;
    }
    std::vector<std::pair<double, double>> series;
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        double t = 0, y = 0;
        int i = 0;
        bool got = false;
        while (std::getline(ls, tok, ',')) {
            if (i == 0) t = std::atof(tok.c_str());
            if (i == col && !tok.empty()) {
                y = std::atof(tok.c_str());
                got = true;
            }
            ++i;
        }
        if (got && y > 0) series.emplace_back(t, y);
    }
    double a = 0, b = 1e300;
    if (!window.empty()) std::sscanf(window.c_str(), "%lf,%lf", &a, &b);
    try {
        const auto fit = fit_rate(series, mode == "power" ? FitMode::PowerInT : FitMode::ExpInTau,
                                  a, b);
        json j = {{"column", column},
                  {"mode", mode},
                  {"rate", fit.fitted_rate},
                  {"r_squared", fit.r_squared},
                  {"points", fit.series.size()}};
        std::cout << j.dump(2) << "\n";
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_experiment(const std::vector<std::string>& spec_paths, int jobs) {
    std::vector<ExperimentResult> results(spec_paths.size());
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(spec_paths.size())));
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t mine;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= spec_paths.size()) return;
                    mine = next++;
                }
                try {
                    results[mine] = run_experiment(load_experiment_spec(spec_paths[mine]));
                } catch (const std::exception& e) {
                    results[mine].exit_code = 1;
                    results[mine].message = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    int rc = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::cout << spec_paths[i] << ": "
                  << (results[i].exit_code == 0 ? "ok" : results[i].message) << "\n";
        rc = std::max(rc, results[i].exit_code);
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for fast p-Laplace asymptotics"};
    app.require_subcommand(1);

    // exponents
    int N = 3;
    double p = -1.0;
    std::string format = "table";
    auto* exps = app.add_subcommand("exponents", "critical exponents and derived constants");
    exps->add_option("--dimension,-N", N, "spatial dimension")->required();
    exps->add_option("--p", p, "evolution exponent in (1,2)");
    exps->add_option("--format", format, "json|csv|table");

    // profile
    std::string kind = "stationary", emit;
    double M = 1.0, D = 1.0, T = 1.0, t_eval = 1.0;
    double pr_p = 1.75;
    int pr_N = 3;
    auto* prof = app.add_subcommand("profile", "closed-form profile tables");
    prof->add_option("--kind", kind, "barenblatt|pseudo|stationary|fde")->required();
    prof->add_option("--p", pr_p)->required();
    prof->add_option("--N", pr_N)->required();
    prof->add_option("--M", M);
    prof->add_option("--D", D);
    prof->add_option("--T", T);
    prof->add_option("--t", t_eval, "evaluation time");
    prof->add_option("--emit", emit, "output csv path ('-' for stdout)");

    // evolve
    std::string equation, config_path, out_dir;
    double t_end = -1, snap = -1;
    auto* ev = app.add_subcommand("evolve", "evolve a radial Cauchy problem");
    ev->add_option("--equation", equation, "cple|rcple|wfde|wfde_rescaled");
    ev->add_option("--config", config_path, "experiment spec file (json or key=value)");
    ev->add_option("--t-end", t_end);
    ev->add_option("--snapshot-every", snap);
    ev->add_option("--out", out_dir);

    // entropy-track
    std::string traj_dir, et_out = "diagnostics_entropy.csv";
    double et_D = 1.0, et_p = 1.75;
    int et_N = 3;
    auto* et = app.add_subcommand("entropy-track", "entropy/Fisher along a stored trajectory");
    et->add_option("--trajectory", traj_dir)->required();
    et->add_option("--D", et_D)->required();
    et->add_option("--p", et_p)->required();
    et->add_option("--N", et_N)->required();
    et->add_option("--out", et_out);

    // transform-check
    double tcp = 1.4;
    int tcN = 3, refinements = 3;
    double tc_tend = 0.05;
    std::string tc_datum = "barenblatt", tc_out = "transform_check.csv";
    auto* tcc = app.add_subcommand("transform-check", "dual-solver correspondence residual");
    tcc->add_option("--p", tcp)->required();
    tcc->add_option("--N", tcN)->required();
    tcc->add_option("--datum", tc_datum, "barenblatt|sandwich");
    tcc->add_option("--refinements", refinements);
    tcc->add_option("--t-end", tc_tend);
    tcc->add_option("--out", tc_out);

    // hp-spectrum
    double hp_p = 1.75, hp_domain = -1;
    int hp_N = 3;
    std::size_t hp_nodes = 2048;
    std::string hp_out;
    auto* hp = app.add_subcommand("hp-spectrum", "optimal Hardy-Poincare constant");
    hp->add_option("--p", hp_p)->required();
    hp->add_option("--N", hp_N)->required();
    hp->add_option("--nodes", hp_nodes);
    hp->add_option("--domain", hp_domain, "fixed s_max (default: domain study)");
    hp->add_option("--out", hp_out, "json output path ('-' for stdout)");

    // rate-fit
    std::string rf_diag, rf_col = "entropy", rf_mode = "exp", rf_window;
    auto* rf = app.add_subcommand("rate-fit", "fit decay rates from diagnostics.csv");
    rf->add_option("--diagnostics", rf_diag)->required();
    rf->add_option("--column", rf_col, "entropy|l1|rel_sup|sup|mass");
    rf->add_option("--mode", rf_mode, "exp|power");
    rf->add_option("--window", rf_window, "a,b");

    // experiment
    std::vector<std::string> spec_paths;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    auto* ex = app.add_subcommand("experiment", "run experiment spec files");
    ex->add_option("--spec", spec_paths, "spec file(s)")->required();
    ex->add_option("--jobs", jobs, "parallel experiment limit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exps->parsed()) return cmd_exponents(N, p, format);
        if (prof->parsed()) return cmd_profile(kind, pr_p, pr_N, M, D, T, t_eval, emit);
        if (ev->parsed()) return cmd_evolve(equation, config_path, t_end, snap, out_dir);
        if (et->parsed()) return cmd_entropy_track(traj_dir, et_p, et_N, et_D, et_out);
        if (tcc->parsed())
            return cmd_transform_check(tcp, tcN, tc_datum, refinements, tc_tend, tc_out);
        if (hp->parsed()) return cmd_hp_spectrum(hp_p, hp_N, hp_nodes, hp_domain, hp_out);
        if (rf->parsed()) return cmd_rate_fit(rf_diag, rf_col, rf_mode, rf_window);
        if (ex->parsed()) return cmd_experiment(spec_paths, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
