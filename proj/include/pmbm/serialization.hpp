#pragma once

#include <filesystem>

#include "json.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

struct TrajectoryFile {
  Trajectory trajectory;
  double focal_px;
};

/// {"T": int, "focal_px": float, "angles_rad": [[pitch, yaw, roll], ...]}
nlohmann::json trajectory_to_json(const Trajectory& traj, double focal_px);
/// Throws ParseError for missing or mistyped fields, InvalidArgument or
/// DomainError when the content violates trajectory invariants.
TrajectoryFile trajectory_from_json(const nlohmann::json& j);

void save_traj(const Trajectory& traj, double focal_px,
               const std::filesystem::path& path);
TrajectoryFile load_traj(const std::filesystem::path& path);

/// Reads a whole file as JSON; IoError / ParseError on failure.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace pmbm
