#include "mmsim/error.hpp"
#include "mmsim/motion.hpp"
#include "mmsim/ply.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>

using namespace mmsim;

namespace {

MotionSequence linear(std::size_t frames, double fps, Vec3 velocity, std::size_t joints = 2) {
  std::vector<JointFrame> out;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < joints; ++j) names.push_back("j" + std::to_string(j));
  for (std::size_t i = 0; i < frames; ++i) {
    JointFrame f;
    f.timestamp = i / fps;
    for (std::size_t j = 0; j < joints; ++j) f.joints.push_back(Vec3(0.1 * j, 3.0, 0.3 * j) + velocity * f.timestamp);
    out.push_back(f);
  }
  return MotionSequence(out, fps, names);
}

BodyTemplate oneSegment(double radius = 0.05) {
  BodyTemplate b;
  b.segments = {{0, 1, radius}};
  b.bounding_box = Vec3(1, 1, 2);
  return b;
}

}  // namespace

TEST(Motion, ParsesMinimalSkeleton) {
  const auto seq = parseSkeletonJson(R"({"fps": 10, "joints": ["a", "b"],
    "frames": [[[0,0,0],[1,0,0]], [[0,0,1],[1,0,1]]]})");
  EXPECT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq.jointCount(), 2u);
  EXPECT_DOUBLE_EQ(seq.frame(1).timestamp, 0.1);
  EXPECT_EQ(seq.frame(1).joints[1], Vec3(1, 0, 1));
}

TEST(Motion, NanCoordinateNamesFrame) {
  try {
    parseSkeletonJson(R"({"fps": 10, "joints": ["a"], "frames": [[[0,0,0]], [[0,"nan",0]], [[0,0,0]]]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("frame 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parseSkeletonJson(R"({"fps": 10, "joints": ["a"], "frames": [[[0,0,0]], [[0,null,0]]]})"), Error);
}

TEST(Motion, ParseErrorsCarryLocation) {
  try {
    parseSkeletonJson("{\"fps\": 10,\n\"frames\": [\n[1,2,]\n]}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    parseSkeletonJson(R"({"fps": 10, "frames": [[[0,0,0]], [["x",0,0]]]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("frames[1]"), std::string::npos) << e.what();
  }
}

TEST(Motion, InconsistentJointCountIsValidationError) {
  try {
    parseSkeletonJson(R"({"fps": 10, "frames": [[[0,0,0],[1,1,1]], [[0,0,0]]]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST(Motion, SequenceInvariants) {
  EXPECT_THROW(linear(1, 10, Vec3::Zero()), Error);
  std::vector<JointFrame> f = {{0.0, {Vec3::Zero()}}, {0.0, {Vec3::Zero()}}};
  EXPECT_THROW(MotionSequence(f, 10, {"a"}), Error);
  f[1].timestamp = 0.1;
  EXPECT_THROW(MotionSequence(f, 0, {"a"}), Error);
  EXPECT_NO_THROW(MotionSequence(f, 10, {"a"}));
}

TEST(Motion, RoundTrip120Frames) {
  test::TempDir dir;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  std::vector<JointFrame> frames;
  for (int i = 0; i < 120; ++i) {
    JointFrame f{i / 20.0, {}};
    for (int j = 0; j < 16; ++j) f.joints.emplace_back(n(rng), n(rng), n(rng));
    frames.push_back(f);
  }
  const MotionSequence seq(frames, 20.0, standardJointNames());
  std::ofstream(dir / "m.json") << toSkeletonJson(seq);
  const auto back = std::get<MotionSequence>(loadMotion(dir / "m.json", MotionFormat::kSkeletonJson));
  EXPECT_EQ(back.nativeFps(), 20.0);
  EXPECT_EQ(back.jointNames(), seq.jointNames());
  ASSERT_EQ(back.size(), 120u);
  for (std::size_t i = 0; i < 120; ++i) {
    EXPECT_EQ(back.frame(i).timestamp, seq.frame(i).timestamp);
    EXPECT_EQ(back.frame(i).joints, seq.frame(i).joints);
  }
}

TEST(Motion, SmallestTessellation) {
  const JointFrame f{0.0, {Vec3(0, 3, 0), Vec3(0, 3, 1)}};
  const Tessellation tess{2, 3};
  const TriMesh mesh = skinCapsules(f, oneSegment(), tess);
  EXPECT_EQ(mesh.vertices.size(), tess.verticesPerCapsule());
  EXPECT_EQ(mesh.triangles.size(), tess.trianglesPerCapsule());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) EXPECT_GT(mesh.triangleArea(t), 0.0);
  EXPECT_NO_THROW(mesh.validate());
}

TEST(Motion, CapsuleIsClosedWithOutwardNormals) {
  const JointFrame f{0.0, {Vec3(0, 3, 0), Vec3(0.2, 3.1, 0.8)}};
  const TriMesh mesh = skinCapsules(f, oneSegment(0.1), Tessellation{});
  // Every edge shared by exactly two triangles with opposite orientation.
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) ++edges[{t[k], t[(k + 1) % 3]}];
  }
  for (const auto& [e, n] : edges) {
    EXPECT_EQ(n, 1);
    EXPECT_EQ(edges.count({e.second, e.first}), 1u);
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 c = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
    // Outward: normal points away from the capsule axis.
    const Vec3 a(0, 3, 0), b(0.2, 3.1, 0.8);
    const double s = std::clamp((c - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
    EXPECT_GT(mesh.triangleNormal(t).dot(c - (a + s * (b - a))), 0.0) << t;
  }
}

TEST(Motion, VertexCountFormula) {
  const auto& names = standardJointNames();
  const BodyTemplate body = defaultBodyTemplate(names);
  GaitOptions g;
  g.frames = 3;
  const MotionSequence seq = proceduralMotion(g);
  for (Tessellation t : {Tessellation{2, 3}, Tessellation{4, 12}, Tessellation{6, 20}}) {
    const TriMesh a = skinCapsules(seq, 1, body, t);
    EXPECT_EQ(a.vertices.size(), body.segments.size() * t.verticesPerCapsule());
    const TriMesh b = skinCapsules(seq, 1, body, t);
    EXPECT_EQ(a.vertices, b.vertices);
  }
}

TEST(Motion, DegenerateSegmentIdentified) {
  const JointFrame f{0.0, {Vec3(0, 3, 0), Vec3(0, 3, 0)}};
  try {
    skinCapsules(f, oneSegment(), Tessellation{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("segment 0"), std::string::npos);
  }
  EXPECT_THROW(skinCapsules(JointFrame{0.0, {Vec3(0, 3, 0), Vec3(0, 3, 1)}}, oneSegment(), Tessellation{1, 3}), Error);
}

TEST(Motion, StaticBodyHasZeroVelocity) {
  const MotionSequence seq = linear(3, 10, Vec3::Zero());
  const TriMesh mesh = skinCapsules(seq, 1, oneSegment(), Tessellation{});
  for (const auto& v : mesh.velocities) EXPECT_EQ(v, Vec3::Zero());
}

TEST(Motion, TranslationVelocityExact) {
  // 0.1 m per 0.1 s along x.
  const MotionSequence seq = linear(3, 10, Vec3(1, 0, 0));
  for (std::size_t i = 0; i < 3; ++i) {
    const TriMesh mesh = skinCapsules(seq, i, oneSegment(), Tessellation{});
    for (const auto& v : mesh.velocities) EXPECT_NEAR(v.norm(), 1.0, 1e-9);
  }
}

TEST(Motion, RigidTranslationProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 vel(u(rng), u(rng), u(rng));
    const MotionSequence seq = linear(4, 10 + trial, vel);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const TriMesh mesh = skinCapsules(seq, i, oneSegment(), Tessellation{3, 7});
      for (const auto& v : mesh.velocities) EXPECT_LT((v - vel).norm(), 1e-9);
    }
  }
}

TEST(Motion, ResampleIdentity) {
  const MotionSequence seq = linear(30, 10, Vec3(0.5, 0.2, 0));
  const MotionSequence out = resample(seq, 10);
  ASSERT_EQ(out.size(), seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(out.frame(i).timestamp, seq.frame(i).timestamp);
    EXPECT_EQ(out.frame(i).joints, seq.frame(i).joints);
  }
}

TEST(Motion, ResampleDecimates) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<JointFrame> frames;
  for (int i = 0; i < 41; ++i) {
    JointFrame f{i / 20.0, {}};
    for (int j = 0; j < 3; ++j) f.joints.emplace_back(n(rng), n(rng), n(rng));
    frames.push_back(f);
  }
  const MotionSequence seq(frames, 20, {"a", "b", "c"});
  const MotionSequence out = resample(seq, 10);
  ASSERT_EQ(out.size(), 21u);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out.frame(i).joints, seq.frame(2 * i).joints);
}

TEST(Motion, ResampleMidpoint) {
  const MotionSequence seq({{0.0, {Vec3(0, 0, 0)}}, {1.0, {Vec3(1, 0, 0)}}}, 1.0, {"a"});
  const MotionSequence out = resample(seq, 10);
  ASSERT_EQ(out.size(), 11u);
  EXPECT_DOUBLE_EQ(out.frame(5).timestamp, 0.5);
  EXPECT_NEAR(out.frame(5).joints[0].x(), 0.5, 1e-15);
  EXPECT_LE(std::abs(out.duration() - seq.duration()), 0.1);
}

TEST(Motion, ResampleIdempotent) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 0.2);
  std::vector<JointFrame> frames;
  double t = 0.3;
  for (int i = 0; i < 50; ++i) {
    frames.push_back({t, {Vec3(std::sin(t), std::cos(3 * t), t)}});
    t += u(rng);
  }
  const MotionSequence seq(frames, 13, {"a"});
  for (double fps : {7.0, 10.0, 29.97}) {
    const MotionSequence once = resample(seq, fps);
    const MotionSequence twice = resample(once, fps);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      EXPECT_EQ(once.frame(i).timestamp, twice.frame(i).timestamp);
      EXPECT_EQ(once.frame(i).joints, twice.frame(i).joints);
    }
  }
}

TEST(Motion, ResampleTooShort) {
  const MotionSequence seq({{0.0, {Vec3::Zero()}}, {0.05, {Vec3::Zero()}}}, 20, {"a"});
  EXPECT_THROW(resample(seq, 10), Error);
  EXPECT_THROW(resample(seq, 0), Error);
}

TEST(Motion, BodyTemplateValidation) {
  BodyTemplate b = oneSegment();
  EXPECT_NO_THROW(b.validate(2));
  EXPECT_THROW(b.validate(1), Error);
  b.segments[0].radius = 0;
  EXPECT_THROW(b.validate(2), Error);
  b = oneSegment();
  b.bounding_box.z() = 0;
  EXPECT_THROW(b.validate(2), Error);
  EXPECT_THROW(defaultBodyTemplate({"a", "b"}), Error);
}

TEST(Motion, MeshSequenceFromPly) {
  test::TempDir dir;
  const MotionSequence seq = linear(3, 10, Vec3(0, 1, 0));
  for (std::size_t i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "body_%06zu.ply", i);
    ply::writeMesh(dir / name, skinCapsules(seq.frame(i), oneSegment(), Tessellation{}));
  }
  const MeshSequence m = loadMeshSequence(dir.path(), 10);
  ASSERT_EQ(m.frames.size(), 3u);
  for (const auto& v : m.frames[1].velocities) EXPECT_NEAR(v.y(), 1.0, 1e-5);  // float32 storage
  const MeshSequence r = resample(m, 5);
  EXPECT_EQ(r.frames.size(), 2u);
  EXPECT_THROW(loadMeshSequence(dir / "missing", 10), Error);
}

TEST(Motion, ProceduralGaitsAreValid) {
  for (GaitKind k : {GaitKind::kWalk, GaitKind::kLegSwing, GaitKind::kStatic}) {
    GaitOptions g;
    g.kind = k;
    const MotionSequence seq = proceduralMotion(g);
    EXPECT_EQ(seq.size(), g.frames);
    EXPECT_EQ(seq.jointCount(), 16u);
    EXPECT_NO_THROW(skinCapsules(seq, 10, defaultBodyTemplate(seq.jointNames()), Tessellation{}).validate());
  }
}
