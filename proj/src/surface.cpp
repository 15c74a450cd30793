#include "phasesep/surface.hpp"

#include "phasesep/error.hpp"
#include "phasesep/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace phasesep {

namespace {

std::uint64_t edge_key(int a, int b)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

std::vector<Vec3> unit_icosphere_directions(int subdivisions, std::vector<Triangle>& triangles)
{
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v{
        {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0},
        {0, -1, g}, {0, 1, g}, {0, -1, -g}, {0, 1, -g},
        {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1},
    };
    for (auto& p : v)
        p.normalize();
    triangles = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
    };

    for (int level = 0; level < subdivisions; ++level) {
        std::unordered_map<std::uint64_t, int> midpoint;
        auto split = [&](int a, int b) {
            const auto key = edge_key(std::min(a, b), std::max(a, b));
            if (auto it = midpoint.find(key); it != midpoint.end())
                return it->second;
            v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
            const int index = static_cast<int>(v.size()) - 1;
            midpoint.emplace(key, index);
            return index;
        };
        std::vector<Triangle> refined;
        refined.reserve(triangles.size() * 4);
        for (const auto& [a, b, c] : triangles) {
            const int ab = split(a, b);
            const int bc = split(b, c);
            const int ca = split(c, a);
            refined.push_back({a, ab, ca});
            refined.push_back({b, bc, ab});
            refined.push_back({c, ca, bc});
            refined.push_back({ab, bc, ca});
        }
        triangles = std::move(refined);
    }
    return v;
}

TriMesh make_sphere(int subdivisions, double radius, double amplitude, int frequency)
{
    if (subdivisions < 0 || subdivisions > 9)
        fail(ErrorKind::Input, "sphere subdivisions must be in [0, 9]");
    if (!(radius > 0.0) || !std::isfinite(radius))
        fail(ErrorKind::Input, "sphere radius must be positive");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        fail(ErrorKind::Input, "perturbation amplitude must be non-negative");
    if (amplitude >= radius)
        fail(ErrorKind::Input, "perturbation amplitude must be smaller than the radius");
    if (frequency < 0)
        fail(ErrorKind::Input, "perturbation frequency must be a natural number");

    std::vector<Triangle> triangles;
    auto directions = unit_icosphere_directions(subdivisions, triangles);
    std::vector<Vec3> vertices;
    vertices.reserve(directions.size());
    for (const auto& d : directions) {
        const double polar = std::acos(std::clamp(d.z(), -1.0, 1.0));
        const double azimuth = std::atan2(d.y(), d.x());
        const double offset = amplitude * std::sin(frequency * polar) * std::sin(frequency * azimuth);
        vertices.push_back((radius + offset) * d);
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh make_strip(const FlatStrip& s)
{
    if (s.nx < 1 || s.ny < 1)
        fail(ErrorKind::Input, "strip resolution must be at least 1x1");
    if (!(s.lx > 0.0) || !(s.ly > 0.0) || !std::isfinite(s.lx) || !std::isfinite(s.ly))
        fail(ErrorKind::Input, "strip extents must be positive");
    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<std::size_t>((s.nx + 1) * (s.ny + 1)));
    for (int j = 0; j <= s.ny; ++j)
        for (int i = 0; i <= s.nx; ++i)
            vertices.emplace_back(s.lx * i / s.nx, s.ly * j / s.ny, 0.0);
    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * s.nx * s.ny));
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            const int v00 = j * (s.nx + 1) + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + s.nx + 1;
            const int v11 = v01 + 1;
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

double cotangent(const Vec3& apex, const Vec3& a, const Vec3& b)
{
    const Vec3 u = a - apex;
    const Vec3 w = b - apex;
    return u.dot(w) / u.cross(w).norm();
}

} // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    if (triangles_.empty())
        fail(ErrorKind::Input, "mesh has no triangles");
    const int n = static_cast<int>(vertices_.size());
    for (const auto& p : vertices_)
        if (!p.allFinite())
            fail(ErrorKind::Input, "mesh has a non-finite vertex");

    std::unordered_map<std::uint64_t, int> directed;
    std::unordered_map<std::uint64_t, int> undirected;
    directed.reserve(triangles_.size() * 3);
    undirected.reserve(triangles_.size() * 3);
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= n)
                fail(ErrorKind::Input, "triangle " + std::to_string(t) + " has an out-of-range index");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            fail(ErrorKind::Input, "triangle " + std::to_string(t) + " repeats a vertex");
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            if (!directed.emplace(edge_key(a, b), static_cast<int>(t)).second)
                fail(ErrorKind::Input, "inconsistent orientation or non-manifold edge (" + std::to_string(a) + ", " +
                                           std::to_string(b) + ") at triangle " + std::to_string(t));
            const auto key = edge_key(std::min(a, b), std::max(a, b));
            auto [it, inserted] = undirected.emplace(key, static_cast<int>(edges_.size()));
            if (inserted) {
                Edge e;
                e.v0 = a;
                e.v1 = b;
                e.faces = {static_cast<int>(t), -1};
                edges_.push_back(e);
            } else {
                auto& e = edges_[static_cast<std::size_t>(it->second)];
                if (e.faces[1] >= 0)
                    fail(ErrorKind::Input, "non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
                e.faces[1] = static_cast<int>(t);
            }
        }
    }
    boundary_ = Boundary::Closed;
    for (const auto& e : edges_)
        if (!e.interior())
            boundary_ = Boundary::WithBoundary;
}

TriMesh generate(const MeshSpec& spec)
{
    return std::visit(
        [](const auto& s) -> TriMesh {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Icosphere>)
                return make_sphere(s.subdivisions, s.radius, 0.0, 1);
            else if constexpr (std::is_same_v<S, FlatStrip>)
                return make_strip(s);
            else
                return make_sphere(s.subdivisions, s.radius, s.amplitude, s.frequency);
        },
        spec);
}

SurfaceMeasure measures(const TriMesh& mesh)
{
    const auto nt = static_cast<Eigen::Index>(mesh.triangle_count());
    SurfaceMeasure m;
    m.triangle_areas.resize(nt);
    parallel_for(nt, [&](std::ptrdiff_t t) {
        const auto& [a, b, c] = mesh.triangle(static_cast<int>(t));
        m.triangle_areas[t] = 0.5 * (mesh.vertex(b) - mesh.vertex(a)).cross(mesh.vertex(c) - mesh.vertex(a)).norm();
    });
    double sum = 0.0;
    for (Eigen::Index t = 0; t < nt; ++t)
        sum += m.triangle_areas[t];
    const double mean = sum / static_cast<double>(nt);
    for (Eigen::Index t = 0; t < nt; ++t)
        if (!(m.triangle_areas[t] > 1e-14 * mean))
            fail(ErrorKind::Geometry, "degenerate triangle " + std::to_string(t));

    m.vertex_masses = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.vertex_count()));
    for (Eigen::Index t = 0; t < nt; ++t)
        for (int v : mesh.triangle(static_cast<int>(t)))
            m.vertex_masses[v] += m.triangle_areas[t] / 3.0;
    for (Eigen::Index v = 0; v < m.vertex_masses.size(); ++v)
        if (!(m.vertex_masses[v] > 0.0))
            fail(ErrorKind::Geometry, "vertex " + std::to_string(v) + " is not used by any triangle");
    m.total_area = sum;
    return m;
}

double mean_edge_length(const TriMesh& mesh)
{
    double sum = 0.0;
    for (const auto& e : mesh.edges())
        sum += mesh.edge_length(e);
    return sum / static_cast<double>(mesh.edges().size());
}

Vec3 triangle_normal(const TriMesh& mesh, int t)
{
    const auto& [a, b, c] = mesh.triangle(t);
    return (mesh.vertex(b) - mesh.vertex(a)).cross(mesh.vertex(c) - mesh.vertex(a)).normalized();
}

std::array<Vec3, 3> hat_gradients(const TriMesh& mesh, int t)
{
    const auto& tri = mesh.triangle(t);
    const Vec3& x0 = mesh.vertex(tri[0]);
    const Vec3& x1 = mesh.vertex(tri[1]);
    const Vec3& x2 = mesh.vertex(tri[2]);
    const Vec3 n = (x1 - x0).cross(x2 - x0);
    const double twice_area_sq = n.squaredNorm();
    // n x e / |n|^2 = (unit normal x e) / (2 area)
    return {n.cross(x2 - x1) / twice_area_sq, n.cross(x0 - x2) / twice_area_sq, n.cross(x1 - x0) / twice_area_sq};
}

std::vector<Vec3> p1_gradient(const TriMesh& mesh, const VertexField& field)
{
    if (static_cast<std::size_t>(field.values.size()) != mesh.vertex_count())
        fail(ErrorKind::Input, "P1 field size " + std::to_string(field.values.size()) + " does not match vertex count " +
                                   std::to_string(mesh.vertex_count()));
    std::vector<Vec3> grad(mesh.triangle_count());
    parallel_for(static_cast<std::ptrdiff_t>(grad.size()), [&](std::ptrdiff_t t) {
        const auto& tri = mesh.triangle(static_cast<int>(t));
        const auto g = hat_gradients(mesh, static_cast<int>(t));
        // differences against vertex 0 keep constant fields exactly gradient-free
        const double u0 = field.values[tri[0]];
        grad[static_cast<std::size_t>(t)] = (field.values[tri[1]] - u0) * g[1] + (field.values[tri[2]] - u0) * g[2];
    });
    return grad;
}

Eigen::SparseMatrix<double> stiffness_matrix(const TriMesh& mesh)
{
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(mesh.triangle_count() * 12);
    for (const auto& tri : mesh.triangles()) {
        for (int k = 0; k < 3; ++k) {
            const int i = tri[(k + 1) % 3];
            const int j = tri[(k + 2) % 3];
            const double w = 0.5 * cotangent(mesh.vertex(tri[k]), mesh.vertex(i), mesh.vertex(j));
            entries.emplace_back(i, j, -w);
            entries.emplace_back(j, i, -w);
            entries.emplace_back(i, i, w);
            entries.emplace_back(j, j, w);
        }
    }
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    Eigen::SparseMatrix<double> k(n, n);
    k.setFromTriplets(entries.begin(), entries.end());
    return k;
}

std::vector<Vec3> mean_curvature(const TriMesh& mesh, const SurfaceMeasure& measure)
{
    if (!mesh.closed())
        fail(ErrorKind::UnsupportedGeometry, "mean curvature requires a closed mesh");
    const auto k = stiffness_matrix(mesh);
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    Eigen::MatrixX3d x(n, 3);
    for (Eigen::Index v = 0; v < n; ++v)
        x.row(v) = mesh.vertex(static_cast<int>(v)).transpose();
    const Eigen::MatrixX3d kx = k * x;
    std::vector<Vec3> h(static_cast<std::size_t>(n));
    for (Eigen::Index v = 0; v < n; ++v)
        h[static_cast<std::size_t>(v)] = -kx.row(v).transpose() / measure.vertex_masses[v];
    return h;
}

TriMesh scaled(const TriMesh& mesh, double factor)
{
    std::vector<Vec3> v(mesh.vertices().begin(), mesh.vertices().end());
    for (auto& p : v)
        p *= factor;
    return TriMesh(std::move(v), std::vector<Triangle>(mesh.triangles().begin(), mesh.triangles().end()));
}

TriMesh translated(const TriMesh& mesh, const Vec3& offset)
{
    std::vector<Vec3> v(mesh.vertices().begin(), mesh.vertices().end());
    for (auto& p : v)
        p += offset;
    return TriMesh(std::move(v), std::vector<Triangle>(mesh.triangles().begin(), mesh.triangles().end()));
}

TriMesh disjoint_union(const TriMesh& a, const TriMesh& b)
{
    std::vector<Vec3> v(a.vertices().begin(), a.vertices().end());
    v.insert(v.end(), b.vertices().begin(), b.vertices().end());
    std::vector<Triangle> t(a.triangles().begin(), a.triangles().end());
    const int shift = static_cast<int>(a.vertex_count());
    for (const auto& tri : b.triangles())
        t.push_back({tri[0] + shift, tri[1] + shift, tri[2] + shift});
    return TriMesh(std::move(v), std::move(t));
}

} // namespace phasesep
