#include "mmsim/cloud_io.hpp"
#include "mmsim/error.hpp"
#include "mmsim/ply.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace mmsim;

namespace {

FrameCloud randomCloud(std::uint32_t index, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  FrameCloud c{index, index / 10.0, {}};
  for (std::size_t i = 0; i < kPointsPerFrame; ++i) {
    RadarPoint p{n(rng), 3 + n(rng), n(rng), 0, n(rng), 20 + n(rng)};
    p.range_m = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    c.points.push_back(p);
  }
  return c;
}

}  // namespace

TEST(CloudIo, RoundTripIsFloat32Exact) {
  test::TempDir dir;
  std::mt19937_64 rng(1);
  std::vector<FrameCloud> frames;
  for (std::uint32_t i = 0; i < 5; ++i) frames.push_back(randomCloud(i, rng));
  writeClouds(dir / "a.rpc", frames);
  EXPECT_EQ(std::filesystem::file_size(dir / "a.rpc"), 8 + 5 * kCloudFrameBytes);
  const auto back = readClouds(dir / "a.rpc");
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t f = 0; f < 5; ++f) {
    const StoredFrame want = toStored(frames[f]);
    EXPECT_EQ(back[f].index, want.index);
    EXPECT_EQ(back[f].timestamp, want.timestamp);
    EXPECT_EQ(back[f].points, want.points);
  }
  EXPECT_EQ(readCloudHeader(dir / "a.rpc").frame_count, 5u);
}

TEST(CloudIo, RejectsWrongPointCount) {
  test::TempDir dir;
  std::mt19937_64 rng(2);
  FrameCloud c = randomCloud(0, rng);
  c.points.pop_back();
  EXPECT_THROW(writeClouds(dir / "a.rpc", {c}), Error);
}

TEST(CloudIo, DetectsTruncationAndBadMagic) {
  test::TempDir dir;
  std::mt19937_64 rng(3);
  writeClouds(dir / "a.rpc", {randomCloud(0, rng), randomCloud(1, rng)});
  std::filesystem::resize_file(dir / "a.rpc", 8 + kCloudFrameBytes + 100);
  try {
    readClouds(dir / "a.rpc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("frame count mismatch"), std::string::npos);
  }
  {
    std::fstream f(dir / "a.rpc", std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  try {
    readCloudHeader(dir / "a.rpc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad header"), std::string::npos);
  }
}

TEST(CloudIo, CsvExportIsLossless) {
  test::TempDir dir;
  std::mt19937_64 rng(4);
  const StoredFrame f = toStored(randomCloud(0, rng));
  exportCsv(dir / "f.csv", f);
  std::ifstream in(dir / "f.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,z,r,v,intensity_db");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c < 6; ++c) {
      std::getline(ss, cell, ',');
      EXPECT_EQ(std::stof(cell), f.points[rows][c]);
    }
    ++rows;
  }
  EXPECT_EQ(rows, 128u);
}

TEST(CloudIo, PlyExportReimports) {
  test::TempDir dir;
  std::mt19937_64 rng(5);
  const StoredFrame f = toStored(randomCloud(0, rng));
  exportPly(dir / "f.ply", f);
  const auto t = ply::readPoints(dir / "f.ply");
  ASSERT_EQ(t.rows(), 128u);
  ASSERT_GE(t.columns.size(), 3u);
  EXPECT_EQ(t.columns[0], "x");
  for (std::size_t i = 0; i < 128; ++i) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(t.values[i * t.columns.size() + c], f.points[i][c]);
  }
}
