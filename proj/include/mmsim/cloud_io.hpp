#pragma once

// "RPC1" point-cloud sequence files and CSV/PLY exporters.
//
// Layout (little-endian): magic "RPC1", u32 frame count, then per frame
// u32 index, f32 timestamp, 128 x 6 f32 (x, y, z, r, v, intensity_db).

#include "mmsim/dsp.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace mmsim {

inline constexpr std::size_t kFeaturesPerPoint = 6;
inline constexpr std::size_t kCloudFrameBytes = 4 + 4 + kPointsPerFrame * kFeaturesPerPoint * 4;

/// Frame as stored on disk (float32 features).
struct StoredFrame {
  std::uint32_t index = 0;
  float timestamp = 0.0f;
  std::vector<std::array<float, kFeaturesPerPoint>> points;
};

StoredFrame toStored(const FrameCloud& cloud);

void writeClouds(const std::filesystem::path& path, const std::vector<FrameCloud>& frames);
void writeStoredClouds(const std::filesystem::path& path, const std::vector<StoredFrame>& frames);
std::vector<StoredFrame> readClouds(const std::filesystem::path& path);

struct CloudHeader {
  std::uint32_t frame_count = 0;
  std::uintmax_t file_size = 0;
};
/// Reads only the magic and frame count; throws "bad header" on wrong magic.
CloudHeader readCloudHeader(const std::filesystem::path& path);

void exportCsv(const std::filesystem::path& path, const StoredFrame& frame);
void exportPly(const std::filesystem::path& path, const StoredFrame& frame);

}  // namespace mmsim
