#include "phasesep/energy.hpp"

#include "energy_internal.hpp"

#include "phasesep/currents.hpp"
#include "phasesep/error.hpp"
#include "phasesep/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

namespace phasesep {

namespace {

std::function<void(std::string_view)>& warning_handler()
{
    static std::function<void(std::string_view)> handler = [](std::string_view msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}

void check_vertex_field(const TriMesh& mesh, const VertexField& field)
{
    if (static_cast<std::size_t>(field.values.size()) != mesh.vertex_count())
        fail(ErrorKind::Input, "P1 field size " + std::to_string(field.values.size()) +
                                   " does not match vertex count " + std::to_string(mesh.vertex_count()));
}

// Signed area of disk(0, r) ∩ triangle(0, a, b).
double disk_wedge_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r)
{
    auto cross = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) { return p.x() * q.y() - p.y() * q.x(); };
    auto sector = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
        if (p.squaredNorm() == 0.0 || q.squaredNorm() == 0.0)
            return 0.0;
        return 0.5 * r * r * std::atan2(cross(p, q), p.dot(q));
    };
    const Eigen::Vector2d d = b - a;
    const double aa = d.squaredNorm();
    if (aa == 0.0)
        return 0.0;
    const double bb = a.dot(d);
    const double cc = a.squaredNorm() - r * r;
    const double disc = bb * bb - aa * cc;
    if (disc <= 0.0)
        return sector(a, b);
    const double s = std::sqrt(disc);
    const double t1 = (-bb - s) / aa;
    const double t2 = (-bb + s) / aa;
    if (t2 <= 0.0 || t1 >= 1.0)
        return sector(a, b);
    const Eigen::Vector2d p1 = a + std::max(t1, 0.0) * d;
    const Eigen::Vector2d p2 = a + std::min(t2, 1.0) * d;
    return sector(a, p1) + 0.5 * cross(p1, p2) + sector(p2, b);
}

} // namespace

Interpolant::Interpolant(double a1, double a2) : a1_(a1), a2_(a2)
{
    if (!(a1 > 0.0) || !(a2 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2))
        fail(ErrorKind::Input, "bending weights must be positive");
}

double Interpolant::weight(double r) const
{
    const double t = std::clamp(r, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

double Interpolant::operator()(double r) const
{
    const double s = weight(r);
    return s * a1_ + (1.0 - s) * a2_;
}

void set_warning_handler(std::function<void(std::string_view)> handler)
{
    warning_handler() = std::move(handler);
}

void warn(std::string_view message)
{
    if (auto& h = warning_handler())
        h(message);
}

EnergyBreakdown modica_mortola(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                               double eps, const DoubleWell& w)
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        fail(ErrorKind::Input, "epsilon must be positive");
    check_vertex_field(mesh, field);
    const double h = mean_edge_length(mesh);
    if (eps < 3.0 * h)
        warn("epsilon " + std::to_string(eps) + " is below three mean edge lengths (" + std::to_string(3.0 * h) +
             "); the interface is under-resolved");
    return detail::modica_mortola_quiet(mesh, measure, field, eps, w);
}

namespace detail {

EnergyBreakdown modica_mortola_quiet(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                                     double eps, const DoubleWell& w)
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        fail(ErrorKind::Input, "epsilon must be positive");
    check_vertex_field(mesh, field);
    const auto& u = field.values;
    const auto nv = u.size();
    Eigen::VectorXd well(nv);
    for (Eigen::Index v = 0; v < nv; ++v)
        well[v] = w.value(u[v]);

    const auto grad = p1_gradient(mesh, field);
    const auto nt = static_cast<std::ptrdiff_t>(mesh.triangle_count());
    std::vector<double> dirichlet(static_cast<std::size_t>(nt));
    std::vector<double> trick(static_cast<std::size_t>(nt));
    parallel_for(nt, [&](std::ptrdiff_t t) {
        const auto& tri = mesh.triangle(static_cast<int>(t));
        const auto i = static_cast<std::size_t>(t);
        const double area = measure.triangle_areas[t];
        const double g = grad[i].norm();
        const double mean_well = (well[tri[0]] + well[tri[1]] + well[tri[2]]) / 3.0;
        dirichlet[i] = eps * area * g * g;
        trick[i] = 2.0 * area * std::sqrt(mean_well) * g;
    });

    EnergyBreakdown e;
    e.epsilon = eps;
    for (std::ptrdiff_t t = 0; t < nt; ++t) {
        e.dirichlet += dirichlet[static_cast<std::size_t>(t)];
        e.trick_lhs += trick[static_cast<std::size_t>(t)];
    }
    for (Eigen::Index v = 0; v < nv; ++v) {
        e.potential += measure.vertex_masses[v] * well[v] / eps;
        e.field_l1 += measure.vertex_masses[v] * std::abs(w.first_integral(u[v]));
    }
    e.mm_value = e.dirichlet + e.potential;
    e.total = e.mm_value;
    return e;
}

MmFunctional::MmFunctional(const TriMesh& mesh, const SurfaceMeasure& measure, double eps, const DoubleWell& w)
    : stiffness_(stiffness_matrix(mesh)), measure_(measure), eps_(eps), w_(w)
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        fail(ErrorKind::Input, "epsilon must be positive");
}

double MmFunctional::value(const Eigen::VectorXd& u) const
{
    const Eigen::VectorXd ku = stiffness_ * u;
    double potential = 0.0;
    for (Eigen::Index v = 0; v < u.size(); ++v)
        potential += measure_.vertex_masses[v] * w_.value(u[v]);
    return eps_ * u.dot(ku) + potential / eps_;
}

Eigen::VectorXd MmFunctional::gradient(const Eigen::VectorXd& u) const
{
    Eigen::VectorXd g = 2.0 * eps_ * (stiffness_ * u);
    for (Eigen::Index v = 0; v < u.size(); ++v)
        g[v] += measure_.vertex_masses[v] * w_.derivative(u[v]) / eps_;
    return g;
}

} // namespace detail

double willmore(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                const Interpolant& ip)
{
    check_vertex_field(mesh, field);
    const auto h = mean_curvature(mesh, measure);
    double sum = 0.0;
    for (std::size_t v = 0; v < h.size(); ++v) {
        const auto i = static_cast<Eigen::Index>(v);
        sum += measure.vertex_masses[i] * ip(field.values[i]) * h[v].squaredNorm();
    }
    return 0.25 * sum;
}

EnergyBreakdown total_energy(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                             double eps, const DoubleWell& w, const Interpolant& ip, EnergyMode mode)
{
    auto e = modica_mortola(mesh, measure, field, eps, w);
    if (mode == EnergyMode::Full)
        e.willmore = willmore(mesh, measure, field, ip);
    e.total = e.mm_value + e.willmore;
    return e;
}

SharpEnergy sharp_energy(const TriMesh& mesh, const SurfaceMeasure& measure, const FaceField& field,
                         const DoubleWell& w, const Interpolant& ip)
{
    if (static_cast<std::size_t>(field.values.size()) != mesh.triangle_count())
        fail(ErrorKind::Input, "P0 field size does not match triangle count");
    for (Eigen::Index t = 0; t < field.values.size(); ++t)
        if (field.values[t] != 0.0 && field.values[t] != 1.0)
            fail(ErrorKind::Input, "sharp energy needs a {0,1}-valued field; triangle " + std::to_string(t) +
                                       " has " + std::to_string(field.values[t]));
    if (!mesh.closed())
        fail(ErrorKind::UnsupportedGeometry, "sharp energy requires a closed mesh");

    const auto nv = static_cast<Eigen::Index>(mesh.vertex_count());
    Eigen::VectorXd phase = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(nv);
    for (Eigen::Index t = 0; t < field.values.size(); ++t) {
        for (int v : mesh.triangle(static_cast<int>(t))) {
            phase[v] += measure.triangle_areas[t] * field.values[t];
            weight[v] += measure.triangle_areas[t];
        }
    }
    const auto h = mean_curvature(mesh, measure);
    SharpEnergy e;
    for (Eigen::Index v = 0; v < nv; ++v) {
        const double u = phase[v] / weight[v];
        e.bending += measure.vertex_masses[v] * (ip.a1() * u + ip.a2() * (1.0 - u)) *
                     h[static_cast<std::size_t>(v)].squaredNorm();
    }
    e.bending *= 0.25;
    e.line = 2.0 * w.tension_constant() * jump_curve_p0(mesh, field).length;
    e.total = e.bending + e.line;
    return e;
}

double triangle_ball_area(const TriMesh& mesh, int t, const Vec3& center, double r)
{
    const auto& tri = mesh.triangle(t);
    const Vec3& p0 = mesh.vertex(tri[0]);
    const Vec3& p1 = mesh.vertex(tri[1]);
    const Vec3& p2 = mesh.vertex(tri[2]);
    const double r2 = r * r;
    if ((p0 - center).squaredNorm() <= r2 && (p1 - center).squaredNorm() <= r2 && (p2 - center).squaredNorm() <= r2)
        return 0.5 * (p1 - p0).cross(p2 - p0).norm();

    const Vec3 n = (p1 - p0).cross(p2 - p0).normalized();
    const double offset = (center - p0).dot(n);
    if (std::abs(offset) >= r)
        return 0.0;
    const double rho = std::sqrt(r2 - offset * offset);
    const Vec3 foot = center - offset * n;
    const Vec3 e1 = (p1 - p0).normalized();
    const Vec3 e2 = n.cross(e1);
    auto planar = [&](const Vec3& p) { return Eigen::Vector2d((p - foot).dot(e1), (p - foot).dot(e2)); };
    const Eigen::Vector2d q0 = planar(p0), q1 = planar(p1), q2 = planar(p2);
    return std::abs(disk_wedge_area(q0, q1, rho) + disk_wedge_area(q1, q2, rho) + disk_wedge_area(q2, q0, rho));
}

DensityReport density_bound(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                            const Interpolant& ip, const std::vector<double>& probe_radii, int max_samples)
{
    DensityReport report;
    report.probe_radii = probe_radii;
    report.willmore = willmore(mesh, measure, field, ip);
    report.bound = std::max(1.0 / ip.a1(), 1.0 / ip.a2()) * report.willmore / (4.0 * std::numbers::pi);

    const int nv = static_cast<int>(mesh.vertex_count());
    const int stride = std::max(1, (nv + std::max(1, max_samples) - 1) / std::max(1, max_samples));
    for (int v = 0; v < nv; v += stride)
        report.sampled_vertices.push_back(v);

    // bounding spheres for the quick reject
    const auto nt = static_cast<int>(mesh.triangle_count());
    std::vector<Vec3> centroid(static_cast<std::size_t>(nt));
    std::vector<double> reach(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangle(t);
        const Vec3 c = (mesh.vertex(tri[0]) + mesh.vertex(tri[1]) + mesh.vertex(tri[2])) / 3.0;
        centroid[static_cast<std::size_t>(t)] = c;
        double rr = 0.0;
        for (int k : tri)
            rr = std::max(rr, (mesh.vertex(k) - c).norm());
        reach[static_cast<std::size_t>(t)] = rr;
    }

    for (double r : probe_radii) {
        if (!(r > 0.0))
            fail(ErrorKind::Input, "probe radii must be positive");
        std::vector<double> density(report.sampled_vertices.size());
        parallel_for(static_cast<std::ptrdiff_t>(density.size()), [&](std::ptrdiff_t s) {
            const Vec3& x = mesh.vertex(report.sampled_vertices[static_cast<std::size_t>(s)]);
            double area = 0.0;
            for (int t = 0; t < nt; ++t) {
                if ((centroid[static_cast<std::size_t>(t)] - x).norm() - reach[static_cast<std::size_t>(t)] > r)
                    continue;
                area += triangle_ball_area(mesh, t, x, r);
            }
            density[static_cast<std::size_t>(s)] = area / (std::numbers::pi * r * r);
        });
        const double best = density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
        report.max_density_per_radius.push_back(best);
        report.max_density = std::max(report.max_density, best);
    }
    report.violation = report.max_density > report.bound * (1.0 + kDensityTolerance);
    return report;
}

} // namespace phasesep
