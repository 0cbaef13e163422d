#include "pmbm/serialization.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "pmbm/error.hpp"

namespace pmbm {

nlohmann::json trajectory_to_json(const Trajectory& traj, double focal_px) {
  nlohmann::json angles = nlohmann::json::array();
  for (const auto& p : traj) angles.push_back({p.pitch(), p.yaw(), p.roll()});
  return {{"T", traj.size()}, {"focal_px", focal_px}, {"angles_rad", angles}};
}

TrajectoryFile trajectory_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("trajectory JSON must be an object");
  for (const char* key : {"T", "focal_px", "angles_rad"}) {
    if (!j.contains(key)) {
      throw ParseError(std::string("trajectory JSON is missing \"") + key + "\"");
    }
  }
  if (!j["T"].is_number_integer()) throw ParseError("\"T\" must be an integer");
  if (!j["focal_px"].is_number()) throw ParseError("\"focal_px\" must be a number");
  const auto& angles = j["angles_rad"];
  if (!angles.is_array()) throw ParseError("\"angles_rad\" must be an array");

  std::vector<PoseAngles> poses;
  poses.reserve(angles.size());
  for (const auto& row : angles) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number() ||
        !row[1].is_number() || !row[2].is_number()) {
      throw ParseError("each pose must be [pitch, yaw, roll] in radians");
    }
    poses.emplace_back(row[0].get<double>(), row[1].get<double>(),
                       row[2].get<double>());
  }
  if (poses.empty()) throw InvalidArgument("trajectory has no poses");
  if (j["T"].get<long long>() != static_cast<long long>(poses.size())) {
    throw InvalidArgument("\"T\" = " + j["T"].dump() + " but " +
                          std::to_string(poses.size()) + " poses are listed");
  }
  const double focal = j["focal_px"].get<double>();
  if (!(focal > 0.0)) throw InvalidArgument("\"focal_px\" must be positive");
  return {Trajectory(std::move(poses)), focal};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed to write " + path.string());
}

void save_traj(const Trajectory& traj, double focal_px,
               const std::filesystem::path& path) {
  write_json_file(trajectory_to_json(traj, focal_px), path);
}

TrajectoryFile load_traj(const std::filesystem::path& path) {
  return trajectory_from_json(read_json_file(path));
}

}  // namespace pmbm
