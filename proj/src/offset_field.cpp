#include "pmbm/offset_field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "pmbm/error.hpp"
#include "pmbm/parallel.hpp"

namespace pmbm {

OffsetField::OffsetField(int width, int height, int timesteps)
    : width_(width), height_(height), timesteps_(timesteps) {
  if (width <= 0 || height <= 0 || timesteps <= 0) {
    throw InvalidArgument("offset field dimensions must be positive");
  }
  dx_.assign(frame_size() * timesteps, 0.0);
  dy_.assign(frame_size() * timesteps, 0.0);
}

OffsetField::OffsetField(int width, int height, int timesteps,
                         std::vector<double> dx, std::vector<double> dy)
    : OffsetField(width, height, timesteps) {
  if (dx.size() != dx_.size() || dy.size() != dy_.size()) {
    throw InvalidArgument("offset arrays do not match W*H*T");
  }
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!std::isfinite(dx[i]) || !std::isfinite(dy[i])) {
      throw InvalidArgument("offset field has non-finite entries");
    }
  }
  dx_ = std::move(dx);
  dy_ = std::move(dy);
}

OffsetField offsets_from_maps(std::span<const Homography> maps, int width,
                              int height) {
  OffsetField field(width, height, static_cast<int>(maps.size()));
  for (int t = 0; t < field.timesteps(); ++t) {
    const Homography& h = maps[t];
    double* dx = field.dx(t);
    double* dy = field.dy(t);
    parallel_for_rows(height, [&](int y) {
      for (int x = 0; x < width; ++x) {
        const Point2 p = h.apply(x, y);
        const std::size_t k = static_cast<std::size_t>(y) * width + x;
        dx[k] = p.x - x;
        dy[k] = p.y - y;
      }
    });
  }
  return field;
}

OffsetField offsets_from_trajectory(const Trajectory& traj,
                                    const CameraIntrinsics& k, int width,
                                    int height) {
  std::vector<Homography> inverse_maps;
  inverse_maps.reserve(traj.size());
  for (const auto& pose : traj) {
    inverse_maps.push_back(homography_from_pose(pose, k).inverse());
  }
  return offsets_from_maps(inverse_maps, width, height);
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "offset dump assumes a little-endian host");

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void save_offsets(const OffsetField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write("PMBM", 4);
  write_u32(out, static_cast<std::uint32_t>(field.width()));
  write_u32(out, static_cast<std::uint32_t>(field.height()));
  write_u32(out, static_cast<std::uint32_t>(field.timesteps()));
  for (auto values : {field.dx_all(), field.dy_all()}) {
    std::vector<float> f(values.begin(), values.end());
    out.write(reinterpret_cast<const char*>(f.data()),
              static_cast<std::streamsize>(f.size() * sizeof(float)));
  }
  if (!out) throw IoError("failed to write " + path.string());
}

OffsetField load_offsets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PMBM", 4) != 0) {
    throw DecodeError(path.string() + " is not an offset dump");
  }
  const std::uint32_t w = read_u32(in), h = read_u32(in), t = read_u32(in);
  if (!in || w == 0 || h == 0 || t == 0) {
    throw DecodeError(path.string() + ": bad offset dump header");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h * t;
  std::vector<float> buf(n);
  std::vector<double> dx, dy;
  for (auto* dst : {&dx, &dy}) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    if (!in) throw DecodeError(path.string() + ": truncated offset dump");
    dst->assign(buf.begin(), buf.end());
  }
  return OffsetField(static_cast<int>(w), static_cast<int>(h),
                     static_cast<int>(t), std::move(dx), std::move(dy));
}

}  // namespace pmbm
