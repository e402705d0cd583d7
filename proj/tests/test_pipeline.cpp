#include "mmsim/error.hpp"
#include "mmsim/pipeline.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace mmsim;

namespace {

SynthOptions quick() {
  SynthOptions o;
  o.seed = 21;
  o.trace.density = 150;
  return o;
}

MotionSequence walk(std::size_t frames) {
  GaitOptions g;
  g.frames = frames;
  return proceduralMotion(g);
}

bool sameFrames(const SynthResult& a, const SynthResult& b) {
  if (a.frames.size() != b.frames.size()) return false;
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    for (std::size_t i = 0; i < a.frames[f].points.size(); ++i) {
      if (a.frames[f].points[i].features() != b.frames[f].points[i].features()) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Pipeline, ThreadCountDoesNotChangeOutput) {
  SynthOptions o = quick();
  const SynthResult one = synthesizeSequence(walk(6), o);
  o.threads = 4;
  const SynthResult four = synthesizeSequence(walk(6), o);
  EXPECT_TRUE(sameFrames(one, four));
  ASSERT_EQ(one.frames.size(), 6u);
  for (std::size_t f = 0; f < 6; ++f) {
    EXPECT_EQ(one.frames[f].frame_index, f);
    EXPECT_EQ(one.frames[f].points.size(), kPointsPerFrame);
  }
}

TEST(Pipeline, SeedChangesOutput) {
  SynthOptions o = quick();
  const SynthResult a = synthesizeSequence(walk(3), o);
  o.seed = 22;
  EXPECT_FALSE(sameFrames(a, synthesizeSequence(walk(3), o)));
}

TEST(Pipeline, ResamplesToFrameRate) {
  GaitOptions g;
  g.frames = 21;
  g.fps = 20;
  const SynthResult r = synthesizeSequence(proceduralMotion(g), quick());
  EXPECT_EQ(r.frames.size(), 11u);
}

TEST(Pipeline, ProgressReportedPerFrame) {
  SynthOptions o = quick();
  o.threads = 2;
  std::vector<std::size_t> seen;
  o.progress = [&](std::size_t f, double secs) {
    EXPECT_GE(secs, 0.0);
    seen.push_back(f);
  };
  synthesizeSequence(walk(4), o);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Pipeline, WalkerAppearsAtItsRange) {
  const SynthResult r = synthesizeSequence(walk(3), quick());
  // Subject starts 3 m out and walks away at 0.6 m/s.
  const RadarPoint top = test::strongest(r.frames[1]);
  EXPECT_GT(top.range_m, 2.5);
  EXPECT_LT(top.range_m, 3.8);
}

TEST(Pipeline, MeshSequenceInput) {
  const MotionSequence seq = walk(3);
  MeshSequence meshes;
  meshes.native_fps = 10;
  for (std::size_t i = 0; i < 3; ++i) {
    meshes.frames.push_back(skinCapsules(seq, i, defaultBodyTemplate(seq.jointNames()), Tessellation{}));
    meshes.timestamps.push_back(seq.frame(i).timestamp);
  }
  const SynthResult a = synthesizeSequence(meshes, quick());
  const SynthResult b = synthesizeSequence(seq, quick());
  ASSERT_EQ(a.frames.size(), 3u);
  EXPECT_TRUE(sameFrames(a, b));
}

TEST(Pipeline, SimulateCubeCalibratedNoise) {
  const MotionSequence seq = walk(3);
  const TriMesh mesh = skinCapsules(seq, 1, defaultBodyTemplate(seq.jointNames()), Tessellation{});
  SynthOptions o = quick();
  o.config.snr_db = std::numeric_limits<double>::infinity();
  const IfCube clean = simulateCube(mesh, 1, o);
  o.config.snr_db = 10;
  const IfCube noisy = simulateCube(mesh, 1, o);
  double noise = 0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) noise += std::norm(noisy.samples.data()[i] - clean.samples.data()[i]);
  noise /= clean.samples.size();
  EXPECT_NEAR(10 * std::log10(clean.meanPower() / noise), 10.0, 0.5);
}
