#include "mmsim/cloud_io.hpp"

#include "mmsim/error.hpp"
#include "mmsim/ply.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>

namespace mmsim {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("dsp", kind, msg); }

constexpr char kMagic[4] = {'R', 'P', 'C', '1'};
const char* const kColumns[kFeaturesPerPoint] = {"x", "y", "z", "r", "v", "intensity_db"};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

StoredFrame toStored(const FrameCloud& cloud) {
  StoredFrame f;
  f.index = cloud.frame_index;
  f.timestamp = static_cast<float>(cloud.timestamp_s);
  for (const RadarPoint& p : cloud.points) f.points.push_back(p.features());
  return f;
}

void writeClouds(const std::filesystem::path& path, const std::vector<FrameCloud>& frames) {
  std::vector<StoredFrame> stored;
  stored.reserve(frames.size());
  for (const auto& f : frames) stored.push_back(toStored(f));
  writeStoredClouds(path, stored);
}

void writeStoredClouds(const std::filesystem::path& path, const std::vector<StoredFrame>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(kMagic, 4);
  put(out, static_cast<std::uint32_t>(frames.size()));
  for (const auto& f : frames) {
    if (f.points.size() != kPointsPerFrame) {
      fail(ErrorKind::kValidation, "frame " + std::to_string(f.index) + " has " + std::to_string(f.points.size()) +
                                       " points, expected 128");
    }
    put(out, f.index);
    put(out, f.timestamp);
    for (const auto& p : f.points) {
      for (float v : p) put(out, v);
    }
  }
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

CloudHeader readCloudHeader(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) fail(ErrorKind::kParse, path.string() + ": bad header");
  CloudHeader h;
  h.frame_count = get<std::uint32_t>(in);
  if (!in) fail(ErrorKind::kParse, path.string() + ": bad header");
  h.file_size = std::filesystem::file_size(path);
  return h;
}

std::vector<StoredFrame> readClouds(const std::filesystem::path& path) {
  const CloudHeader header = readCloudHeader(path);
  const std::uintmax_t expected = 8 + static_cast<std::uintmax_t>(header.frame_count) * kCloudFrameBytes;
  if (header.file_size != expected) {
    fail(ErrorKind::kParse, path.string() + ": frame count mismatch (header says " +
                                std::to_string(header.frame_count) + " frames, file holds " +
                                std::to_string(header.file_size < 8 ? 0 : (header.file_size - 8) / kCloudFrameBytes) +
                                ")");
  }
  std::ifstream in(path, std::ios::binary);
  in.seekg(8);
  std::vector<StoredFrame> frames(header.frame_count);
  for (auto& f : frames) {
    f.index = get<std::uint32_t>(in);
    f.timestamp = get<float>(in);
    f.points.resize(kPointsPerFrame);
    for (auto& p : f.points) {
      for (float& v : p) v = get<float>(in);
    }
  }
  if (!in) fail(ErrorKind::kParse, path.string() + ": truncated body");
  return frames;
}

void exportCsv(const std::filesystem::path& path, const StoredFrame& frame) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "x,y,z,r,v,intensity_db\n";
  // max_digits10 makes the text round-trip to the same float32.
  out << std::setprecision(9);
  for (const auto& p : frame.points) {
    for (std::size_t c = 0; c < kFeaturesPerPoint; ++c) out << (c ? "," : "") << p[c];
    out << "\n";
  }
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

void exportPly(const std::filesystem::path& path, const StoredFrame& frame) {
  ply::PointTable table;
  table.columns.assign(std::begin(kColumns), std::end(kColumns));
  for (const auto& p : frame.points) table.values.insert(table.values.end(), p.begin(), p.end());
  ply::writePoints(path, table);
}

}  // namespace mmsim
