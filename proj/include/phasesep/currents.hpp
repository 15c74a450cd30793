#pragma once

#include "phasesep/surface.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace phasesep {

/// Mass decomposition of the discrete graph current over a surface: sheets
/// above the triangles (horizontal) and walls above jump edges (vertical).
struct GraphCurrent {
    double horizontal_mass = 0.0;
    double vertical_mass = 0.0;
    double total_mass = 0.0;
};

struct JumpCurve {
    std::vector<std::pair<Vec3, Vec3>> segments;
    double length = 0.0;
};

/// Piecewise-constant field: sheets are flat copies of the triangles and each
/// interior edge carries a wall of height |u+ - u-|.
GraphCurrent graph_mass_p0(const TriMesh& mesh, const SurfaceMeasure& measure, const FaceField& field);

/// Piecewise-linear field: mass of the lifted surface, sum_T area_T sqrt(1 + |grad v|^2).
/// The vertical entry is the tilt excess over the flat area.
GraphCurrent graph_mass_p1(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field);

/// Interior edges whose two triangles carry different values.
JumpCurve jump_curve_p0(const TriMesh& mesh, const FaceField& field);

/// Marching-triangles isoline. Vertices exactly at the level count as lying
/// above it by 1e-12 times the field range.
JumpCurve level_curve_p1(const TriMesh& mesh, const VertexField& field, double level);

struct MeasuredSurface {
    TriMesh mesh;
    SurfaceMeasure measure;
};

MeasuredSurface measured(TriMesh mesh);

struct StrictnessReport {
    std::vector<double> member_areas;
    double limit_area = 0.0;
    std::vector<double> gaps;
    bool monotone_convergent = false; // gaps non-increasing
    bool strictly_decreasing = false;
};

StrictnessReport strictness_report(const std::vector<MeasuredSurface>& family, const MeasuredSurface& limit);

struct TestFunction {
    std::string name;
    std::function<double(const Vec3&, double)> phi;
};

/// {1, y, y^2, exp(-|x - e_z|^2)}.
std::vector<TestFunction> standard_test_functions();

struct FieldSurface {
    MeasuredSurface surface;
    VertexField field;
};

struct MfpSeries {
    std::string name;
    std::vector<double> integrals;
    double limit_integral = 0.0;
    std::vector<double> gaps;
    bool monotone_convergent = false;
    bool strictly_decreasing = false;
};

struct MfpReport {
    std::vector<MfpSeries> series;
    std::vector<double> field_l1; // per member, sum_v mass_v |u_v|
    double limit_field_l1 = 0.0;
};

/// Lumped-vertex integrals of phi(x, u(x)) over each family member and the limit.
MfpReport mfp_test(const std::vector<FieldSurface>& family, const FieldSurface& limit,
                   const std::vector<TestFunction>& testset);

double lumped_integral(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                       const std::function<double(const Vec3&, double)>& phi);

} // namespace phasesep
