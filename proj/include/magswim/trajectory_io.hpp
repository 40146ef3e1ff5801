#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "magswim/config.hpp"
#include "magswim/ode_sim.hpp"

namespace magswim {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kTrajectoryCsvHeader = "t,x,y,theta,alpha2,alpha3,Hx,Hy";

enum class TrajectoryFormat { kCsv, kJsonLines };

TrajectoryFormat parse_trajectory_format(const std::string& name);

/// Formats a double with 17 significant digits (round-trips exactly).
std::string format_double(double v);

/// Parameter, field, solver and version echo attached to every output.
nlohmann::ordered_json run_metadata(const RunConfig& config);
nlohmann::ordered_json params_json(const SwimmerParams& params);
nlohmann::ordered_json field_json(const FieldProgram& field);

/// CSV: header then one row per sample. JSON lines: a metadata record followed
/// by one record per sample. Throws std::runtime_error naming the path on I/O failure.
void export_trajectory(const Trajectory& trajectory, const std::filesystem::path& path,
                       TrajectoryFormat format,
                       const nlohmann::ordered_json& metadata = nlohmann::ordered_json::object());

Trajectory read_trajectory_csv(const std::filesystem::path& path);
Trajectory read_trajectory_jsonl(const std::filesystem::path& path);

}  // namespace magswim
