#include "phasesep/mesh_io.hpp"

#include "phasesep/currents.hpp"
#include "phasesep/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace phasesep {

namespace {

std::string lower_extension(const std::filesystem::path& path)
{
    auto ext = path.extension().string();
    for (auto& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path))
        fail(ErrorKind::NotFound, path.string());
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorKind::Io, "cannot write " + path.string());
    return out;
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, int line, const std::string& what)
{
    fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + what);
}

// Next line that is not blank and not a comment; strips trailing comments.
bool next_record(std::istream& in, std::string& line, int& line_no)
{
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            return true;
    }
    return false;
}

TriMesh read_off(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::string line;
    int line_no = 0;
    if (!next_record(in, line, line_no))
        parse_error(path, line_no, "empty file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF")
        parse_error(path, line_no, "missing OFF header");
    long nv = -1, nf = -1, ne = 0;
    if (!(header >> nv)) {
        if (!next_record(in, line, line_no))
            parse_error(path, line_no, "missing element counts");
        header = std::istringstream(line);
        header >> nv;
    }
    if (!(header >> nf >> ne) || nv < 0 || nf < 0)
        parse_error(path, line_no, "malformed element counts");

    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!next_record(in, line, line_no))
            parse_error(path, line_no, "unexpected end of file in vertex list");
        std::istringstream rec(line);
        Vec3 p;
        if (!(rec >> p.x() >> p.y() >> p.z()))
            parse_error(path, line_no, "malformed vertex");
        vertices.push_back(p);
    }
    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!next_record(in, line, line_no))
            parse_error(path, line_no, "unexpected end of file in face list");
        std::istringstream rec(line);
        int count = 0;
        if (!(rec >> count))
            parse_error(path, line_no, "malformed face");
        if (count != 3)
            fail(ErrorKind::Unsupported, path.string() + ":" + std::to_string(line_no) + ": face with " +
                                             std::to_string(count) + " vertices (only triangles are supported)");
        Triangle t;
        if (!(rec >> t[0] >> t[1] >> t[2]))
            parse_error(path, line_no, "malformed face indices");
        for (int v : t)
            if (v < 0 || v >= nv)
                parse_error(path, line_no, "face index out of range");
        triangles.push_back(t);
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

int parse_obj_index(const std::string& token, long vertex_count, const std::filesystem::path& path, int line_no)
{
    const auto slash = token.find('/');
    long index = 0;
    try {
        std::size_t used = 0;
        const auto head = token.substr(0, slash);
        index = std::stol(head, &used);
        if (used != head.size())
            parse_error(path, line_no, "malformed face index '" + token + "'");
    } catch (const std::logic_error&) {
        parse_error(path, line_no, "malformed face index '" + token + "'");
    }
    if (index < 0)
        index += vertex_count + 1;
    if (index < 1 || index > vertex_count)
        parse_error(path, line_no, "face index out of range");
    return static_cast<int>(index - 1);
}

TriMesh read_obj(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::string line;
    int line_no = 0;
    while (next_record(in, line, line_no)) {
        std::istringstream rec(line);
        std::string tag;
        rec >> tag;
        if (tag == "v") {
            Vec3 p;
            if (!(rec >> p.x() >> p.y() >> p.z()))
                parse_error(path, line_no, "malformed vertex");
            vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<std::string> tokens;
            for (std::string tok; rec >> tok;)
                tokens.push_back(tok);
            if (tokens.size() != 3)
                fail(ErrorKind::Unsupported, path.string() + ":" + std::to_string(line_no) + ": face with " +
                                                 std::to_string(tokens.size()) +
                                                 " vertices (only triangles are supported)");
            Triangle t;
            for (int k = 0; k < 3; ++k)
                t[static_cast<std::size_t>(k)] =
                    parse_obj_index(tokens[static_cast<std::size_t>(k)], static_cast<long>(vertices.size()), path, line_no);
            triangles.push_back(t);
        }
        // other record types (vn, vt, g, o, s, usemtl, l) are ignored
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

} // namespace

TriMesh read_mesh(const std::filesystem::path& path)
{
    const auto ext = lower_extension(path);
    if (ext == ".off")
        return read_off(path);
    if (ext == ".obj")
        return read_obj(path);
    fail(ErrorKind::Unsupported, "unknown mesh extension '" + ext + "'");
}

void write_mesh(const std::filesystem::path& path, const TriMesh& mesh)
{
    const auto ext = lower_extension(path);
    if (ext != ".off" && ext != ".obj")
        fail(ErrorKind::Unsupported, "unknown mesh extension '" + ext + "'");
    auto out = open_output(path);
    if (ext == ".off") {
        out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
        for (const auto& p : mesh.vertices())
            out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
        for (const auto& t : mesh.triangles())
            out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    } else {
        for (const auto& p : mesh.vertices())
            out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
        for (const auto& t : mesh.triangles())
            out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    if (!out)
        fail(ErrorKind::Io, "write failed for " + path.string());
}

void write_polyline_obj(const std::filesystem::path& path, const JumpCurve& curve)
{
    auto out = open_output(path);
    for (const auto& [a, b] : curve.segments) {
        out << "v " << format_double(a.x()) << ' ' << format_double(a.y()) << ' ' << format_double(a.z()) << '\n';
        out << "v " << format_double(b.x()) << ' ' << format_double(b.y()) << ' ' << format_double(b.z()) << '\n';
    }
    for (std::size_t s = 0; s < curve.segments.size(); ++s)
        out << "l " << 2 * s + 1 << ' ' << 2 * s + 2 << '\n';
    if (!out)
        fail(ErrorKind::Io, "write failed for " + path.string());
}

void write_scalar_field(const std::filesystem::path& path, const Eigen::VectorXd& values)
{
    auto out = open_output(path);
    for (Eigen::Index i = 0; i < values.size(); ++i)
        out << format_double(values[i]) << '\n';
    if (!out)
        fail(ErrorKind::Io, "write failed for " + path.string());
}

Eigen::VectorXd read_scalar_field(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (next_record(in, line, line_no)) {
        std::istringstream rec(line);
        double x = 0.0;
        std::string extra;
        if (!(rec >> x) || (rec >> extra))
            parse_error(path, line_no, "expected one value per line");
        values.push_back(x);
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

} // namespace phasesep
