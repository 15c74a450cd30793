#include "phasesep/report.hpp"

#include "phasesep/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace phasesep {

namespace {

constexpr const char* kColumns[] = {"eps",          "mm_value",          "dirichlet", "potential",
                                    "willmore",     "jump_length",       "sharp_line_energy",
                                    "ratio",        "iterations",        "wallclock_seconds"};

std::string number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out)
        fail(ErrorKind::Io, "write failed for " + path.string());
}

} // namespace

std::string to_csv(const std::vector<SweepRecord>& records)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < std::size(kColumns); ++i)
        out << (i ? "," : "") << kColumns[i];
    out << '\n';
    for (const auto& r : records) {
        out << number(r.eps) << ',' << number(r.mm_value) << ',' << number(r.dirichlet) << ','
            << number(r.potential) << ',' << number(r.willmore) << ',' << number(r.jump_length) << ','
            << number(r.sharp_line_energy) << ',' << number(r.ratio) << ',' << r.iterations << ','
            << number(r.wallclock_seconds) << '\n';
    }
    return out.str();
}

static nlohmann::ordered_json ordered(const SweepRecord& r)
{
    nlohmann::ordered_json j;
    j["eps"] = r.eps;
    j["mm_value"] = r.mm_value;
    j["dirichlet"] = r.dirichlet;
    j["potential"] = r.potential;
    j["willmore"] = r.willmore;
    j["jump_length"] = r.jump_length;
    j["sharp_line_energy"] = r.sharp_line_energy;
    j["ratio"] = r.ratio;
    j["iterations"] = r.iterations;
    j["wallclock_seconds"] = r.wallclock_seconds;
    return j;
}

void write_report(const std::vector<SweepRecord>& records, ReportFormat format, const std::filesystem::path& path)
{
    if (format == ReportFormat::Csv) {
        write_text(path, to_csv(records));
        return;
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records)
        arr.push_back(ordered(r));
    write_text(path, arr.dump(2) + "\n");
}

nlohmann::json to_json(const SweepRecord& r) { return nlohmann::json(ordered(r)); }

SweepRecord sweep_record_from_json(const nlohmann::json& j)
{
    SweepRecord r;
    try {
        r.eps = j.at("eps").get<double>();
        r.mm_value = j.at("mm_value").get<double>();
        r.dirichlet = j.at("dirichlet").get<double>();
        r.potential = j.at("potential").get<double>();
        r.willmore = j.at("willmore").get<double>();
        r.jump_length = j.at("jump_length").get<double>();
        r.sharp_line_energy = j.at("sharp_line_energy").get<double>();
        r.ratio = j.at("ratio").get<double>();
        r.iterations = j.at("iterations").get<int>();
        r.wallclock_seconds = j.at("wallclock_seconds").get<double>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("sweep record: ") + e.what());
    }
    return r;
}

std::vector<SweepRecord> read_report_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::NotFound, path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    if (!j.is_array())
        fail(ErrorKind::Parse, path.string() + ": expected an array of records");
    std::vector<SweepRecord> out;
    for (const auto& row : j)
        out.push_back(sweep_record_from_json(row));
    return out;
}

nlohmann::json to_json(const EnergyBreakdown& e)
{
    nlohmann::ordered_json j;
    j["epsilon"] = e.epsilon;
    j["dirichlet"] = e.dirichlet;
    j["potential"] = e.potential;
    j["willmore"] = e.willmore;
    j["total"] = e.total;
    j["mm_value"] = e.mm_value;
    j["trick_lhs"] = e.trick_lhs;
    j["field_l1"] = e.field_l1;
    return nlohmann::json(j);
}

nlohmann::json to_json(const GraphCurrent& g)
{
    return {{"horizontal_mass", g.horizontal_mass}, {"vertical_mass", g.vertical_mass}, {"total_mass", g.total_mass}};
}

nlohmann::json to_json(const SharpEnergy& e)
{
    return {{"bending", e.bending}, {"line", e.line}, {"total", e.total}};
}

nlohmann::json to_json(const DensityReport& d)
{
    return {{"probe_radii", d.probe_radii},
            {"max_density_per_radius", d.max_density_per_radius},
            {"sampled_vertex_count", d.sampled_vertices.size()},
            {"max_density", d.max_density},
            {"willmore", d.willmore},
            {"bound", d.bound},
            {"violation", d.violation}};
}

nlohmann::json to_json(const StrictnessReport& s)
{
    return {{"member_areas", s.member_areas},
            {"limit_area", s.limit_area},
            {"gaps", s.gaps},
            {"monotone_convergent", s.monotone_convergent},
            {"strictly_decreasing", s.strictly_decreasing}};
}

nlohmann::json to_json(const MfpReport& m)
{
    auto series = nlohmann::json::array();
    for (const auto& s : m.series)
        series.push_back({{"name", s.name},
                          {"integrals", s.integrals},
                          {"limit_integral", s.limit_integral},
                          {"gaps", s.gaps},
                          {"monotone_convergent", s.monotone_convergent},
                          {"strictly_decreasing", s.strictly_decreasing}});
    return {{"series", series}, {"field_l1", m.field_l1}, {"limit_field_l1", m.limit_field_l1}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    write_text(path, j.dump(2) + "\n");
}

} // namespace phasesep
