#pragma once

#include "phasesep/currents.hpp"
#include "phasesep/energy.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace phasesep {

/// One row of an epsilon sweep. Columns appear in declaration order.
struct SweepRecord {
    double eps = 0.0;
    double mm_value = 0.0;
    double dirichlet = 0.0;
    double potential = 0.0;
    double willmore = 0.0;
    double jump_length = 0.0;       // length of the u = 1/2 isoline
    double sharp_line_energy = 0.0; // 2k * jump_length
    double ratio = 0.0;             // mm_value / sharp_line_energy, 0 when there is no interface
    int iterations = 0;
    double wallclock_seconds = 0.0;

    bool operator==(const SweepRecord&) const = default;
};

enum class ReportFormat { Csv, Json };

void write_report(const std::vector<SweepRecord>& records, ReportFormat format, const std::filesystem::path& path);
std::string to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_report_json(const std::filesystem::path& path);

nlohmann::json to_json(const SweepRecord& r);
SweepRecord sweep_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const GraphCurrent& g);
nlohmann::json to_json(const SharpEnergy& e);
nlohmann::json to_json(const DensityReport& d);
nlohmann::json to_json(const StrictnessReport& s);
nlohmann::json to_json(const MfpReport& m);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace phasesep
