#include "phasesep/currents.hpp"

#include "phasesep/error.hpp"
#include "phasesep/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phasesep {

namespace {

void check_face_field(const TriMesh& mesh, const FaceField& field)
{
    if (static_cast<std::size_t>(field.values.size()) != mesh.triangle_count())
        fail(ErrorKind::Input, "P0 field size " + std::to_string(field.values.size()) +
                                   " does not match triangle count " + std::to_string(mesh.triangle_count()));
}

void check_vertex_field(const TriMesh& mesh, const VertexField& field)
{
    if (static_cast<std::size_t>(field.values.size()) != mesh.vertex_count())
        fail(ErrorKind::Input, "P1 field size " + std::to_string(field.values.size()) +
                                   " does not match vertex count " + std::to_string(mesh.vertex_count()));
}

template <class Flags>
void flag_monotone(const std::vector<double>& gaps, Flags& out)
{
    out.monotone_convergent = true;
    out.strictly_decreasing = true;
    for (std::size_t j = 1; j < gaps.size(); ++j) {
        if (!(gaps[j] <= gaps[j - 1]))
            out.monotone_convergent = false;
        if (!(gaps[j] < gaps[j - 1]))
            out.strictly_decreasing = false;
    }
}

} // namespace

GraphCurrent graph_mass_p0(const TriMesh& mesh, const SurfaceMeasure& measure, const FaceField& field)
{
    check_face_field(mesh, field);
    GraphCurrent g;
    g.horizontal_mass = measure.total_area;
    for (const auto& e : mesh.edges()) {
        if (!e.interior())
            continue;
        const double jump = std::abs(field.values[e.faces[0]] - field.values[e.faces[1]]);
        if (jump > 0.0)
            g.vertical_mass += jump * mesh.edge_length(e);
    }
    g.total_mass = g.horizontal_mass + g.vertical_mass;
    return g;
}

GraphCurrent graph_mass_p1(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field)
{
    check_vertex_field(mesh, field);
    const auto grad = p1_gradient(mesh, field);
    std::vector<double> lifted(grad.size());
    parallel_for(static_cast<std::ptrdiff_t>(grad.size()), [&](std::ptrdiff_t t) {
        lifted[static_cast<std::size_t>(t)] =
            measure.triangle_areas[t] * std::sqrt(1.0 + grad[static_cast<std::size_t>(t)].squaredNorm());
    });
    GraphCurrent g;
    for (double m : lifted)
        g.total_mass += m;
    g.horizontal_mass = measure.total_area;
    g.vertical_mass = g.total_mass - g.horizontal_mass;
    return g;
}

JumpCurve jump_curve_p0(const TriMesh& mesh, const FaceField& field)
{
    check_face_field(mesh, field);
    JumpCurve c;
    for (const auto& e : mesh.edges()) {
        if (!e.interior() || field.values[e.faces[0]] == field.values[e.faces[1]])
            continue;
        c.segments.emplace_back(mesh.vertex(e.v0), mesh.vertex(e.v1));
        c.length += mesh.edge_length(e);
    }
    return c;
}

JumpCurve level_curve_p1(const TriMesh& mesh, const VertexField& field, double level)
{
    check_vertex_field(mesh, field);
    JumpCurve c;
    if (field.values.size() == 0)
        return c;
    const double lo = field.values.minCoeff();
    const double hi = field.values.maxCoeff();
    if (level < lo || level > hi)
        return c;
    const double eta = 1e-12 * (hi - lo);
    auto shifted = [&](int v) {
        const double x = field.values[v];
        return x == level ? level + eta : x;
    };

    for (const auto& tri : mesh.triangles()) {
        std::array<double, 3> val{shifted(tri[0]), shifted(tri[1]), shifted(tri[2])};
        std::array<Vec3, 2> crossing;
        int found = 0;
        for (int k = 0; k < 3 && found < 2; ++k) {
            const int a = k;
            const int b = (k + 1) % 3;
            if ((val[a] >= level) == (val[b] >= level))
                continue;
            // classify with the shifted values, place the point with the true ones
            const double xa = field.values[tri[a]];
            const double xb = field.values[tri[b]];
            const double s = std::clamp((level - xa) / (xb - xa), 0.0, 1.0);
            crossing[found++] = mesh.vertex(tri[a]) + s * (mesh.vertex(tri[b]) - mesh.vertex(tri[a]));
        }
        // a triangle touched only at one vertex yields a single point
        if (found == 2 && crossing[0] != crossing[1]) {
            c.segments.emplace_back(crossing[0], crossing[1]);
            c.length += (crossing[1] - crossing[0]).norm();
        }
    }
    return c;
}

MeasuredSurface measured(TriMesh mesh)
{
    auto m = measures(mesh);
    return MeasuredSurface{std::move(mesh), std::move(m)};
}

StrictnessReport strictness_report(const std::vector<MeasuredSurface>& family, const MeasuredSurface& limit)
{
    if (family.empty())
        fail(ErrorKind::Input, "strictness report needs a nonempty family");
    StrictnessReport r;
    r.limit_area = limit.measure.total_area;
    for (const auto& member : family) {
        r.member_areas.push_back(member.measure.total_area);
        r.gaps.push_back(std::abs(member.measure.total_area - r.limit_area));
    }
    flag_monotone(r.gaps, r);
    return r;
}

std::vector<TestFunction> standard_test_functions()
{
    return {
        {"one", [](const Vec3&, double) { return 1.0; }},
        {"y", [](const Vec3&, double y) { return y; }},
        {"y^2", [](const Vec3&, double y) { return y * y; }},
        {"bump", [](const Vec3& x, double) { return std::exp(-(x - Vec3::UnitZ()).squaredNorm()); }},
    };
}

double lumped_integral(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                       const std::function<double(const Vec3&, double)>& phi)
{
    check_vertex_field(mesh, field);
    double sum = 0.0;
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const auto i = static_cast<Eigen::Index>(v);
        sum += measure.vertex_masses[i] * phi(mesh.vertex(static_cast<int>(v)), field.values[i]);
    }
    return sum;
}

MfpReport mfp_test(const std::vector<FieldSurface>& family, const FieldSurface& limit,
                   const std::vector<TestFunction>& testset)
{
    if (family.empty())
        fail(ErrorKind::Input, "measure-function pair test needs a nonempty family");
    auto abs_value = [](const Vec3&, double y) { return std::abs(y); };
    MfpReport r;
    for (const auto& member : family)
        r.field_l1.push_back(lumped_integral(member.surface.mesh, member.surface.measure, member.field, abs_value));
    r.limit_field_l1 = lumped_integral(limit.surface.mesh, limit.surface.measure, limit.field, abs_value);

    for (const auto& test : testset) {
        MfpSeries s;
        s.name = test.name;
        s.limit_integral = lumped_integral(limit.surface.mesh, limit.surface.measure, limit.field, test.phi);
        for (const auto& member : family) {
            const double value = lumped_integral(member.surface.mesh, member.surface.measure, member.field, test.phi);
            s.integrals.push_back(value);
            s.gaps.push_back(std::abs(value - s.limit_integral));
        }
        flag_monotone(s.gaps, s);
        r.series.push_back(std::move(s));
    }
    return r;
}

} // namespace phasesep
