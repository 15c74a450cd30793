#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

namespace phasesep {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

/// Piecewise-linear field: one value per vertex.
struct VertexField {
    Eigen::VectorXd values;
};

/// Piecewise-constant field: one value per triangle.
struct FaceField {
    Eigen::VectorXd values;
};

enum class Boundary { Closed, WithBoundary };

/// Undirected mesh edge. `faces[1]` is -1 on a boundary edge.
struct Edge {
    int v0 = 0;
    int v1 = 0;
    std::array<int, 2> faces{-1, -1};

    bool interior() const noexcept { return faces[1] >= 0; }
};

/// Oriented triangle mesh. Construction validates indices, manifold edges
/// and consistent orientation; the edge table is built once.
class TriMesh {
public:
    TriMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

    std::span<const Vec3> vertices() const noexcept { return vertices_; }
    std::span<const Triangle> triangles() const noexcept { return triangles_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    Boundary boundary() const noexcept { return boundary_; }
    bool closed() const noexcept { return boundary_ == Boundary::Closed; }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t triangle_count() const noexcept { return triangles_.size(); }

    const Vec3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const Triangle& triangle(int i) const { return triangles_[static_cast<std::size_t>(i)]; }

    double edge_length(const Edge& e) const { return (vertex(e.v1) - vertex(e.v0)).norm(); }

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> edges_;
    Boundary boundary_ = Boundary::Closed;
};

struct Icosphere {
    int subdivisions = 0;
    double radius = 1.0;
};

struct FlatStrip {
    int nx = 1;
    int ny = 1;
    double lx = 1.0;
    double ly = 1.0;
};

/// Subdivided icosphere with vertices displaced radially by
/// amplitude * sin(f * polar) * sin(f * azimuth).
struct PerturbedSphere {
    int subdivisions = 0;
    double radius = 1.0;
    double amplitude = 0.0;
    int frequency = 1;
};

using MeshSpec = std::variant<Icosphere, FlatStrip, PerturbedSphere>;

TriMesh generate(const MeshSpec& spec);

/// Lumped discretization of the surface measure.
struct SurfaceMeasure {
    Eigen::VectorXd triangle_areas;
    Eigen::VectorXd vertex_masses; // one third of the incident triangle areas
    double total_area = 0.0;
};

SurfaceMeasure measures(const TriMesh& mesh);

inline double total_area(const SurfaceMeasure& measure) { return measure.total_area; }

double mean_edge_length(const TriMesh& mesh);

/// Unit normal of a triangle, following its orientation.
Vec3 triangle_normal(const TriMesh& mesh, int t);

/// Gradients of the three barycentric hat functions on triangle t.
std::array<Vec3, 3> hat_gradients(const TriMesh& mesh, int t);

/// Constant tangential gradient of the linear interpolant on each triangle.
std::vector<Vec3> p1_gradient(const TriMesh& mesh, const VertexField& field);

/// Cotangent stiffness matrix K with u^T K v = sum_T area_T <grad u, grad v>.
Eigen::SparseMatrix<double> stiffness_matrix(const TriMesh& mesh);

/// Mean-curvature vector per vertex (sum-of-principal-curvatures convention,
/// pointing toward the center on a sphere). Requires a closed mesh.
std::vector<Vec3> mean_curvature(const TriMesh& mesh, const SurfaceMeasure& measure);

TriMesh scaled(const TriMesh& mesh, double factor);
TriMesh translated(const TriMesh& mesh, const Vec3& offset);
TriMesh disjoint_union(const TriMesh& a, const TriMesh& b);

} // namespace phasesep
