#pragma once

#include "phasesep/potential.hpp"
#include "phasesep/surface.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace phasesep {

struct EnergyBreakdown {
    double epsilon = 0.0;
    double dirichlet = 0.0; // sum_T eps area_T |grad u|^2
    double potential = 0.0; // sum_v mass_v W(u_v) / eps
    double willmore = 0.0;
    double total = 0.0;
    double mm_value = 0.0;  // dirichlet + potential
    double trick_lhs = 0.0; // 2 sum_T area_T sqrt(mean_T W) |grad u|
    double field_l1 = 0.0;  // sum_v mass_v |theta(u_v)|
};

/// Phase-dependent bending weight a(r) = s(r) a1 + (1 - s(r)) a2 with the
/// clamped cubic smoothstep s(t) = 3t^2 - 2t^3 on [0, 1].
class Interpolant {
public:
    Interpolant(double a1, double a2);

    double a1() const noexcept { return a1_; }
    double a2() const noexcept { return a2_; }

    double weight(double r) const;
    double operator()(double r) const;

private:
    double a1_;
    double a2_;
};

inline double interpolant_eval(const Interpolant& ip, double r) { return ip(r); }

/// Receives non-fatal diagnostics such as the resolution warning. The default
/// writes to stderr; pass an empty function to silence.
void set_warning_handler(std::function<void(std::string_view)> handler);
void warn(std::string_view message);

EnergyBreakdown modica_mortola(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                               double eps, const DoubleWell& w);

/// (1/4) sum_v mass_v a(u_v) |H_v|^2.
double willmore(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                const Interpolant& ip);

enum class EnergyMode { Full, ModicaMortolaOnly };

EnergyBreakdown total_energy(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                             double eps, const DoubleWell& w, const Interpolant& ip,
                             EnergyMode mode = EnergyMode::Full);

struct SharpEnergy {
    double bending = 0.0;
    double line = 0.0; // 2k times the jump length
    double total = 0.0;
};

/// Sharp-interface energy of a {0,1}-valued per-triangle field. Vertex phase
/// values are area-weighted averages of the incident triangles.
SharpEnergy sharp_energy(const TriMesh& mesh, const SurfaceMeasure& measure, const FaceField& field,
                         const DoubleWell& w, const Interpolant& ip);

struct DensityReport {
    std::vector<double> probe_radii;
    std::vector<double> max_density_per_radius;
    std::vector<int> sampled_vertices;
    double max_density = 0.0;
    double willmore = 0.0;
    double bound = 0.0; // max(1/a1, 1/a2) * willmore / (4 pi)
    bool violation = false;
};

inline constexpr double kDensityTolerance = 0.1;

/// Estimates area(B(x, r) ∩ mesh) / (pi r^2) at up to `max_samples` evenly
/// strided vertices and compares against the Li-Yau bound.
DensityReport density_bound(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                            const Interpolant& ip, const std::vector<double>& probe_radii,
                            int max_samples = 256);

/// Exact area of the intersection of triangle t with the closed ball B(center, r).
double triangle_ball_area(const TriMesh& mesh, int t, const Vec3& center, double r);

} // namespace phasesep
