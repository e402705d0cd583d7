#pragma once

// Human motion input: skeleton keyframes, capsule skinning and frame-rate
// resampling. World frame: radar at the origin facing +y, z up.

#include "mmsim/geometry.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mmsim {

struct JointFrame {
  double timestamp = 0.0;  // seconds
  std::vector<Vec3> joints;
};

/// Timestamped skeleton keyframes. Construction validates: >= 2 frames,
/// strictly increasing timestamps, constant joint count, finite coordinates.
class MotionSequence {
 public:
  MotionSequence(std::vector<JointFrame> frames, double native_fps, std::vector<std::string> joint_names);

  const std::vector<JointFrame>& frames() const noexcept { return frames_; }
  const JointFrame& frame(std::size_t i) const { return frames_.at(i); }
  std::size_t size() const noexcept { return frames_.size(); }
  std::size_t jointCount() const noexcept { return joint_names_.size(); }
  double nativeFps() const noexcept { return native_fps_; }
  const std::vector<std::string>& jointNames() const noexcept { return joint_names_; }
  double duration() const { return frames_.back().timestamp - frames_.front().timestamp; }

 private:
  std::vector<JointFrame> frames_;
  double native_fps_;
  std::vector<std::string> joint_names_;
};

struct CapsuleSegment {
  std::size_t joint_a = 0;
  std::size_t joint_b = 0;
  double radius = 0.0;  // m
};

struct BodyTemplate {
  std::vector<CapsuleSegment> segments;
  Vec3 bounding_box = Vec3::Zero();  // extents, m

  /// Throws if any index is out of range for `joint_count`, any radius is
  /// non-positive, or the bounding box is not positive on every axis.
  void validate(std::size_t joint_count) const;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<Vec3> velocities;  // per vertex, m/s

  static constexpr double kMinTriangleArea = 1e-12;

  void validate() const;
  double triangleArea(std::size_t t) const;
  /// Unit normal from counter-clockwise winding.
  Vec3 triangleNormal(std::size_t t) const;
  double totalArea() const;
  Aabb bounds() const;
};

/// Externally produced meshes, one per frame, all sharing one topology
/// when velocities are to be differentiated.
struct MeshSequence {
  std::vector<TriMesh> frames;
  std::vector<double> timestamps;
  double native_fps = 0.0;
};

enum class MotionFormat { kSkeletonJson, kMeshSequence };

MotionSequence parseSkeletonJson(std::string_view text);
MotionSequence loadSkeletonJson(const std::filesystem::path& path);
std::string toSkeletonJson(const MotionSequence& seq);

/// Reads `<dir>/*NNNNNN.ply` (6-digit zero-padded frame index) in index
/// order. Vertex velocities are filled by finite differences when all
/// frames share a vertex count.
MeshSequence loadMeshSequence(const std::filesystem::path& dir, double fps);

std::variant<MotionSequence, MeshSequence> loadMotion(const std::filesystem::path& path, MotionFormat format,
                                                      double mesh_fps = 30.0);

struct Tessellation {
  int rings = 4;    // latitude rings per hemisphere, >= 2
  int sectors = 12; // vertices per ring, >= 3

  std::size_t verticesPerCapsule() const { return 2 * static_cast<std::size_t>(rings) * sectors + 2; }
  std::size_t trianglesPerCapsule() const { return 4 * static_cast<std::size_t>(rings) * sectors; }
};

/// Skins one frame to capsules; all vertex velocities zero.
TriMesh skinCapsules(const JointFrame& frame, const BodyTemplate& body, const Tessellation& tess);

/// Skins frame `index` of `seq`, with per-vertex velocity by central finite
/// differences against the neighbouring frames (one-sided at the ends).
TriMesh skinCapsules(const MotionSequence& seq, std::size_t index, const BodyTemplate& body,
                     const Tessellation& tess);

/// Linear interpolation onto t0 + k / target_fps. Grid points that coincide
/// with input timestamps are copied exactly, so resampling is idempotent.
MotionSequence resample(const MotionSequence& seq, double target_fps);
MeshSequence resample(const MeshSequence& seq, double target_fps);

// Built-in 16-joint skeleton used by the procedural generators and the
// default body template.
const std::vector<std::string>& standardJointNames();
BodyTemplate defaultBodyTemplate(const std::vector<std::string>& joint_names);

enum class GaitKind { kWalk, kLegSwing, kStatic };

struct GaitOptions {
  GaitKind kind = GaitKind::kWalk;
  std::size_t frames = 90;
  double fps = 10.0;
  Vec3 start{0.0, 3.0, 0.0};  // ground point under the pelvis
  double speed_mps = 0.6;     // along +y for kWalk
  double cadence_hz = 0.9;    // full gait cycles per second
  double hip_amplitude_rad = 0.45;
};

MotionSequence proceduralMotion(const GaitOptions& options);

}  // namespace mmsim
