#pragma once

#include "mmsim/dsp.hpp"
#include "mmsim/if_synth.hpp"
#include "mmsim/raytrace.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace mmsim::test {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "mmsim") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / (tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

inline RadarConfig noiseless(RadarConfig cfg = defaultConfig()) {
  cfg.snr_db = std::numeric_limits<double>::infinity();
  return cfg;
}

/// Point on the horizontal plane at range r and azimuth az (positive toward +x).
inline Vec3 polar(double r, double az) { return {r * std::sin(az), r * std::cos(az), 0.0}; }

/// A small facet facing the radar, moving radially at v (positive = receding),
/// traced through the real scattering code.
inline std::vector<ScatterPath> facetPaths(const RadarConfig& cfg, const Vec3& position, double radial_v,
                                           double area = 1e-3) {
  SurfaceSample s;
  s.position = position;
  s.normal = -position.normalized();
  s.area = area;
  s.velocity = position.normalized() * radial_v;
  const SurfaceSample samples[] = {s};
  return traceSamples(samples, nullptr, AntennaArray::fromConfig(cfg));
}

/// Strongest point of a processed frame.
inline RadarPoint strongest(const FrameCloud& cloud) {
  RadarPoint best = cloud.points.front();
  for (const auto& p : cloud.points) {
    if (p.intensity_db > best.intensity_db) best = p;
  }
  return best;
}

}  // namespace mmsim::test
