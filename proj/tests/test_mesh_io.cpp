#include "phasesep/currents.hpp"
#include "phasesep/error.hpp"
#include "phasesep/mesh_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace phasesep;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "phasesep_test_mesh_io";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

ErrorKind kind_of(const fs::path& p)
{
    try {
        read_mesh(p);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

} // namespace

TEST_CASE("round trip preserves combinatorics and coordinates")
{
    const auto mesh = generate(PerturbedSphere{2, 1.0, 0.13, 3});
    for (const char* name : {"rt.off", "rt.obj"}) {
        const auto path = scratch(name);
        write_mesh(path, mesh);
        const auto back = read_mesh(path);
        REQUIRE(back.vertex_count() == mesh.vertex_count());
        CHECK(std::ranges::equal(back.triangles(), mesh.triangles()));
        double worst = 0.0;
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
            worst = std::max(worst, (back.vertex(int(v)) - mesh.vertex(int(v))).norm());
        CHECK(worst <= 1e-15);
    }
}

TEST_CASE("quad faces are unsupported")
{
    const auto p = scratch("quad.off");
    write_text(p, "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    CHECK(kind_of(p) == ErrorKind::Unsupported);
    const auto q = scratch("quad.obj");
    write_text(q, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
    CHECK(kind_of(q) == ErrorKind::Unsupported);
}

TEST_CASE("missing files and unknown extensions")
{
    CHECK(kind_of(scratch("does_not_exist.off")) == ErrorKind::NotFound);
    const auto p = scratch("mesh.stl");
    write_text(p, "solid\n");
    CHECK_THROWS_AS(read_mesh(p), Error);
}

TEST_CASE("parse errors carry the line number")
{
    const auto p = scratch("bad.off");
    write_text(p, "OFF\n3 1 0\n0 0 0\n1 zero 0\n0 1 0\n3 0 1 2\n");
    try {
        read_mesh(p);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find(":4") != std::string::npos);
    }
    const auto q = scratch("bad.obj");
    write_text(q, "v 0 0 0\nv 1 0 0\nv 0 1 0\n# comment\nf 1 2 9\n");
    try {
        read_mesh(q);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find(":5") != std::string::npos);
    }
}

TEST_CASE("obj reader accepts slash and negative indices")
{
    const auto p = scratch("slash.obj");
    write_text(p, "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1/1/1 2//1 -1\n");
    const auto mesh = read_mesh(p);
    CHECK(mesh.triangle_count() == 1);
    CHECK(mesh.triangle(0) == Triangle{0, 1, 2});
}

TEST_CASE("scalar sidecar and polyline export")
{
    Eigen::VectorXd v(4);
    v << 0.1, 1.0 / 3.0, -2.5e-300, 7.0;
    const auto p = scratch("field.txt");
    write_scalar_field(p, v);
    CHECK(read_scalar_field(p) == v);

    JumpCurve c;
    c.segments = {{Vec3(0, 0, 0), Vec3(1, 0, 0)}, {Vec3(1, 0, 0), Vec3(1, 1, 0)}};
    c.length = 2.0;
    const auto q = scratch("curve.obj");
    write_polyline_obj(q, c);
    std::ifstream in(q);
    int vs = 0, ls = 0;
    for (std::string line; std::getline(in, line);) {
        vs += line.rfind("v ", 0) == 0;
        ls += line.rfind("l ", 0) == 0;
    }
    CHECK(vs == 4);
    CHECK(ls == 2);
}
