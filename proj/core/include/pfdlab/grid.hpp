#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pfdlab/exponents.hpp"

namespace pfdlab {

// Strictly increasing radii r0 = 0 < r1 < ... < rK.
// Default: 0 plus logarithmically spaced nodes from rmin to rmax.
std::vector<double> log_radial_grid(std::size_t nodes = 2048, double rmin = 1e-4,
                                    double rmax = 1e3, bool include_origin = true);

enum class FrameKind { Original, SelfSimilar };

struct Frame {
    FrameKind kind = FrameKind::SelfSimilar;
    double time = 0.0;  // t for Original, tau for SelfSimilar
};

// A radial profile sampled on a nonuniform grid, together with its frame.
struct RadialGridFunction {
    std::vector<double> r;
    std::vector<double> v;
    Frame frame{};
    Params params{};

    std::size_t size() const { return r.size(); }
    void validate() const;
    double sup() const;
};

// Fourth-order radial derivative: the log-spaced interior is uniform in ln r,
// so centered stencils apply there; one-sided closures at both ends and the
// symmetry value 0 at r = 0.
std::vector<double> radial_derivative(const RadialGridFunction& f);
std::vector<double> radial_derivative(const std::vector<double>& r, const std::vector<double>& v);

struct SnapshotDiagnostics {
    double time = 0;
    double mass = 0;
    double sup = 0;
    double sup_deriv = 0;
    std::optional<double> entropy;
    std::optional<double> fisher;
    std::optional<double> sup_rel_err;
};

// Time-stamped sequence of grid functions plus per-snapshot diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<RadialGridFunction> snapshots;
    std::vector<SnapshotDiagnostics> diagnostics;
    std::size_t clipped_negative = 0;  // total nodes clipped at 0 over the run
    bool completed = true;             // false when the stepper gave up early
    std::string error;

    void validate() const;
};

}  // namespace pfdlab
