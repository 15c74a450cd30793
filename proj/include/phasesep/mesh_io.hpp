#pragma once

#include "phasesep/surface.hpp"

#include <filesystem>

namespace phasesep {

struct JumpCurve;

// Format is chosen by extension: .off or .obj (v/f records, triangles only).
TriMesh read_mesh(const std::filesystem::path& path);
void write_mesh(const std::filesystem::path& path, const TriMesh& mesh);

/// Polyline export: one `v` per segment endpoint and one `l` per segment.
void write_polyline_obj(const std::filesystem::path& path, const JumpCurve& curve);

/// Sidecar scalar file: one value per line, in vertex (or triangle) order.
void write_scalar_field(const std::filesystem::path& path, const Eigen::VectorXd& values);
Eigen::VectorXd read_scalar_field(const std::filesystem::path& path);

} // namespace phasesep
