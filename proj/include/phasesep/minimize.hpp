#pragma once

#include "phasesep/energy.hpp"
#include "phasesep/error.hpp"
#include "phasesep/potential.hpp"
#include "phasesep/surface.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

namespace phasesep {

struct MinimizeOptions {
    double mass_target = 0.0; // required value of sum_v mass_v u_v
    int max_iterations = 50000;
    double grad_tolerance = 1e-6; // on the mass-weighted norm of the projected gradient
    double step_init = 1e-2;
    double backtrack_factor = 0.5;
    std::uint64_t seed = 1;
    std::filesystem::path trace_path; // CSV trace when non-empty

    void validate() const;
};

/// Shift by a constant so that the lumped integral equals m.
VertexField project_mass(const VertexField& field, const SurfaceMeasure& measure, double m);

/// Gradient of the discrete Modica-Mortola value with respect to the vertex values.
Eigen::VectorXd mm_gradient(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                            double eps, const DoubleWell& w);

struct MinimizeResult {
    VertexField field;
    EnergyBreakdown energy;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

/// Line search could not decrease the energy; carries the last iterate.
class StagnationError : public Error {
public:
    StagnationError(const std::string& message, VertexField last, int iterations);

    const VertexField& last_iterate() const noexcept { return last_; }
    int iterations() const noexcept { return iterations_; }

private:
    VertexField last_;
    int iterations_;
};

/// Seeded values in [0.45, 0.55], projected onto the mass constraint.
VertexField random_initial_field(const SurfaceMeasure& measure, double mass_target, std::uint64_t seed);

/// Projected gradient descent in the lumped L2 metric with Barzilai-Borwein
/// step proposals and monotone backtracking.
MinimizeResult minimize_mm(const TriMesh& mesh, const SurfaceMeasure& measure, double eps, const DoubleWell& w,
                           const MinimizeOptions& opts, std::optional<VertexField> init = std::nullopt);

/// u_v = sigma(d_v / eps), with d_v the signed edge-graph distance from v to
/// the interface of the binary field (phase 1 positive).
VertexField recovery_field(const TriMesh& mesh, const SurfaceMeasure& measure, const FaceField& phase, double eps,
                           const DoubleWell& w);

/// Binary field whose phase-1 region is the set of triangles with the lowest
/// barycentric coordinate along the longest bounding-box axis, filled until its
/// area reaches `mass_target`.
FaceField axis_split(const TriMesh& mesh, const SurfaceMeasure& measure, double mass_target);

struct AxisSplitStart {};
struct RandomStart {};
using ContinuationStart = std::variant<AxisSplitStart, RandomStart, VertexField, FaceField>;

struct ContinuationStep {
    double eps = 0.0;
    VertexField field;
    EnergyBreakdown energy;
    int iterations = 0;
    bool converged = false;
};

struct ContinuationResult {
    std::vector<ContinuationStep> steps;
    std::optional<Error> error; // set when a solve failed; steps holds what finished
};

/// Solves each epsilon in turn, warm-starting from the previous minimizer.
/// The first solve starts from the recovery field of `start` (or the field
/// itself when one is given).
ContinuationResult epsilon_continuation(const TriMesh& mesh, const SurfaceMeasure& measure,
                                        const std::vector<double>& eps_list, const DoubleWell& w,
                                        const MinimizeOptions& opts, const ContinuationStart& start = AxisSplitStart{});

} // namespace phasesep
