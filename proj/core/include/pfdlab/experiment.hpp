#pragma once

#include <cstdint>
#include <string>

#include "pfdlab/grid.hpp"
#include "pfdlab/rates.hpp"
#include "pfdlab/solver.hpp"

namespace pfdlab {

inline constexpr const char* kBuildId = "pfdlab-0.1.0";

// Fully serializable experiment description. Re-running an identical spec with
// the same build reproduces outputs bit for bit.
struct ExperimentSpec {
    std::string equation = "rcple";  // cple | rcple | wfde | wfde_rescaled

    Params params{1.75, 3};

    // datum descriptor
    std::string datum_kind = "stationary";  // barenblatt|pseudo|stationary|vd_mixture|ground_mode|csv
    double M = 1.0;       // barenblatt
    double D = 1.0;       // stationary / pseudo
    double T = 1.0;       // pseudo extinction time, or barenblatt evaluation time
    double D1 = 1.15, D2 = 0.9;  // vd_mixture: (V_D1 + V_D2)/2
    double delta = 0.05;         // ground_mode perturbation amplitude
    std::string datum_path;      // csv datum: rows "r,value"

    std::size_t grid_nodes = 2048;
    double grid_rmin = 1e-4, grid_rmax = 1e3;

    SolverConfig solver{};
    double t_end = 5.0;

    bool track_entropy = true;
    double entropy_D = -1.0;  // negative: mass-match automatically
    double fit_lo = 1.0, fit_hi = -1.0;  // fit_hi < 0: t_end - 0.5

    std::string out_dir = "out";
    std::uint64_t seed = 42;

    void validate() const;
};

// Parse a spec from JSON text or from the key=value/[section] format; the two
// are interchangeable. Throws std::invalid_argument with field-level messages.
ExperimentSpec parse_experiment_spec(const std::string& text);
ExperimentSpec load_experiment_spec(const std::string& path);

// FNV-1a 64-bit hash of the spec's canonical serialization.
std::uint64_t spec_hash(const ExperimentSpec& spec);
std::string canonical_spec_json(const ExperimentSpec& spec);

struct ExperimentResult {
    int exit_code = 0;  // 0 = invariants pass, 2 = invariant failure, 1 = error
    std::string summary_json;
    std::string summary_path;
    bool stationary = false;
    double fitted_entropy_rate = 0;
    bool invariants_pass = true;
    std::string message;
};

// Runs the experiment: writes one CSV per snapshot, diagnostics.csv and
// summary.json under out_dir, and returns the exit report.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// CSV helpers shared by the tool (deterministic %.17g formatting).
std::string format_double(double x);
void write_profile_csv(const std::string& path, const RadialGridFunction& f,
                       const std::vector<double>* deriv = nullptr);
void write_diagnostics_csv(const std::string& path, const Trajectory& traj);

// Build the datum described by the spec (shared with the CLI).
RadialGridFunction build_datum(const ExperimentSpec& spec);

}  // namespace pfdlab
