#pragma once

#include "phasesep/config.hpp"
#include "phasesep/minimize.hpp"
#include "phasesep/report.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace phasesep {

struct HarnessOptions {
    std::filesystem::path out_dir; // nothing is written when empty
    bool deterministic = false;    // wallclock columns are written as 0
};

// Builders shared by the runners. Sections and keys are documented in README.md.
TriMesh mesh_from_config(const Config& cfg);
DoubleWell potential_from_config(const Config& cfg);
MinimizeOptions solver_options_from_config(const Config& cfg, const SurfaceMeasure& measure);

/// Per-triangle majority vote of u >= 1/2 over the three vertices.
FaceField threshold_field(const TriMesh& mesh, const VertexField& field);

SweepRecord make_sweep_record(const TriMesh& mesh, const SurfaceMeasure& measure, const ContinuationStep& step,
                              const DoubleWell& w, const Interpolant& ip);

struct SweepError {
    double eps = 0.0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::vector<SweepError> errors;
    std::vector<VertexField> fields;
};

/// epsilon continuation on one surface; writes sweep.csv, sweep.json,
/// mesh.off and field_<i>.txt into the output directory.
SweepResult run_sweep(const Config& cfg, const HarnessOptions& opts);

struct MembraneReport {
    EnergyBreakdown diffuse;
    SharpEnergy sharp;
    double willmore_threshold = 0.0; // 8 pi min(a1, a2) - delta
    bool willmore_hypothesis = false;
    DensityReport density;
    bool lower_bound_holds = false; // diffuse total >= 0.9 * sharp total
    nlohmann::json to_json() const;
};

MembraneReport run_membrane(const Config& cfg, const HarnessOptions& opts);

struct VaryingReport {
    std::vector<double> amplitudes;
    StrictnessReport strictness;
    MfpReport mfp;
    std::vector<double> member_mm_values;
    double limit_jump_length = 0.0;
    double limit_sharp_line_energy = 0.0;
    bool liminf_holds = false; // min member mm_value >= 0.95 * limit sharp line energy
    nlohmann::json to_json() const;
};

VaryingReport run_varying(const Config& cfg, const HarnessOptions& opts);

} // namespace phasesep
