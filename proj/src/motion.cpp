#include "mmsim/motion.hpp"

#include "mmsim/error.hpp"
#include "mmsim/ply.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

namespace mmsim {
namespace {

using nlohmann::json;

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("motion_scene", kind, msg); }

std::size_t lineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

// JSON has no NaN/Inf literal; accept null and "nan"/"inf" strings so the
// finiteness check can name the offending frame.
double coordinate(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
  }
  fail(ErrorKind::kParse, "field " + field + ": expected a number");
}

Vec3 lerp(const Vec3& a, const Vec3& b, double w) { return a + w * (b - a); }

// Orthonormal (u, v) perpendicular to w with u x v = w.
void basis(const Vec3& w, Vec3& u, Vec3& v) {
  const Vec3 helper = std::abs(w.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  u = helper.cross(w).normalized();
  v = w.cross(u);
}

void appendCapsule(TriMesh& mesh, const Vec3& a, const Vec3& b, double radius, const Tessellation& tess) {
  const Vec3 axis = b - a;
  const Vec3 w = axis.normalized();
  Vec3 u, v;
  basis(w, u, v);
  const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
  const int rings = tess.rings;
  const int sectors = tess.sectors;

  mesh.vertices.push_back(a - radius * w);
  auto ring = [&](const Vec3& c, double rho) {
    for (int s = 0; s < sectors; ++s) {
      const double phi = 2.0 * std::numbers::pi * s / sectors;
      mesh.vertices.push_back(c + rho * (std::cos(phi) * u + std::sin(phi) * v));
    }
  };
  for (int k = 1; k <= rings; ++k) {
    const double alpha = 0.5 * std::numbers::pi * k / rings;
    ring(a - radius * std::cos(alpha) * w, radius * std::sin(alpha));
  }
  for (int k = rings; k >= 1; --k) {
    const double alpha = 0.5 * std::numbers::pi * k / rings;
    ring(b + radius * std::cos(alpha) * w, radius * std::sin(alpha));
  }
  mesh.vertices.push_back(b + radius * w);

  const std::uint32_t pole_a = base;
  const std::uint32_t pole_b = base + 1 + 2 * rings * sectors;
  auto at = [&](int j, int s) { return base + 1 + static_cast<std::uint32_t>(j * sectors + (s % sectors)); };
  // Winding gives outward normals: (ring j, s) -> (j, s+1) -> (j+1, s+1).
  for (int s = 0; s < sectors; ++s) mesh.triangles.push_back({pole_a, at(0, s + 1), at(0, s)});
  for (int j = 0; j + 1 < 2 * rings; ++j) {
    for (int s = 0; s < sectors; ++s) {
      mesh.triangles.push_back({at(j, s), at(j, s + 1), at(j + 1, s + 1)});
      mesh.triangles.push_back({at(j, s), at(j + 1, s + 1), at(j + 1, s)});
    }
  }
  for (int s = 0; s < sectors; ++s) mesh.triangles.push_back({at(2 * rings - 1, s), at(2 * rings - 1, s + 1), pole_b});
}

struct Interval {
  std::size_t lo;
  double w;
};

// Locate t in increasing `times`: returns lo with times[lo] <= t and weight w
// toward lo + 1 (w == 0 means an exact copy of lo).
Interval locate(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times.begin());
  if (hi == 0) return {0, 0.0};
  std::size_t lo = hi - 1;
  if (times[lo] == t || hi == times.size()) return {lo, 0.0};
  return {lo, (t - times[lo]) / (times[hi] - times[lo])};
}

std::vector<double> outputGrid(double t0, double t_end, double target_fps) {
  if (!(target_fps > 0.0) || !std::isfinite(target_fps)) {
    fail(ErrorKind::kInvalidArgument, "target fps must be positive");
  }
  const double duration = t_end - t0;
  if (duration * target_fps < 1.0) {
    fail(ErrorKind::kInvalidArgument, "sequence shorter than one output frame period");
  }
  const auto last = static_cast<std::size_t>(std::floor(duration * target_fps + 1e-9));
  std::vector<double> grid(last + 1);
  for (std::size_t k = 0; k <= last; ++k) grid[k] = t0 + static_cast<double>(k) / target_fps;
  return grid;
}

}  // namespace

MotionSequence::MotionSequence(std::vector<JointFrame> frames, double native_fps, std::vector<std::string> joint_names)
    : frames_(std::move(frames)), native_fps_(native_fps), joint_names_(std::move(joint_names)) {
  if (!(native_fps_ > 0.0) || !std::isfinite(native_fps_)) fail(ErrorKind::kValidation, "native fps must be > 0");
  if (frames_.size() < 2) fail(ErrorKind::kValidation, "motion needs at least 2 frames");
  if (joint_names_.empty()) joint_names_.resize(frames_.front().joints.size());
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const auto& f = frames_[i];
    if (f.joints.size() != joint_names_.size()) {
      fail(ErrorKind::kValidation, "frame " + std::to_string(i) + " has " + std::to_string(f.joints.size()) +
                                       " joints, expected " + std::to_string(joint_names_.size()));
    }
    if (!std::isfinite(f.timestamp)) fail(ErrorKind::kValidation, "frame " + std::to_string(i) + ": bad timestamp");
    if (i > 0 && !(f.timestamp > frames_[i - 1].timestamp)) {
      fail(ErrorKind::kValidation, "frame " + std::to_string(i) + ": timestamps not strictly increasing");
    }
    for (std::size_t j = 0; j < f.joints.size(); ++j) {
      if (!isFinite(f.joints[j])) {
        fail(ErrorKind::kValidation,
             "frame " + std::to_string(i) + ", joint " + std::to_string(j) + ": non-finite coordinate");
      }
    }
  }
}

void BodyTemplate::validate(std::size_t joint_count) const {
  if (segments.empty()) fail(ErrorKind::kValidation, "body template has no segments");
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    if (seg.joint_a >= joint_count || seg.joint_b >= joint_count) {
      fail(ErrorKind::kValidation, "segment " + std::to_string(s) + ": joint index out of range");
    }
    if (!(seg.radius > 0.0)) fail(ErrorKind::kValidation, "segment " + std::to_string(s) + ": radius must be > 0");
  }
  if (!(bounding_box.array() > 0.0).all()) fail(ErrorKind::kValidation, "bounding box must be positive");
}

double TriMesh::triangleArea(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec3& a = vertices[tri[0]];
  return 0.5 * (vertices[tri[1]] - a).cross(vertices[tri[2]] - a).norm();
}

Vec3 TriMesh::triangleNormal(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec3& a = vertices[tri[0]];
  return (vertices[tri[1]] - a).cross(vertices[tri[2]] - a).normalized();
}

double TriMesh::totalArea() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) sum += triangleArea(t);
  return sum;
}

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const Vec3& v : vertices) box.extend(v);
  return box;
}

void TriMesh::validate() const {
  if (velocities.size() != vertices.size()) fail(ErrorKind::kValidation, "velocity count != vertex count");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!isFinite(vertices[i]) || !isFinite(velocities[i])) {
      fail(ErrorKind::kValidation, "vertex " + std::to_string(i) + ": non-finite position or velocity");
    }
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (std::uint32_t idx : triangles[t]) {
      if (idx >= vertices.size()) fail(ErrorKind::kValidation, "triangle " + std::to_string(t) + ": index out of range");
    }
    if (!(triangleArea(t) >= kMinTriangleArea)) {
      fail(ErrorKind::kValidation, "triangle " + std::to_string(t) + ": degenerate (area < 1e-12 m^2)");
    }
  }
}

MotionSequence parseSkeletonJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, "line " + std::to_string(lineOf(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::kParse, "top level must be an object");
  if (!doc.contains("fps") || !doc["fps"].is_number()) fail(ErrorKind::kParse, "field fps: missing or not a number");
  if (!doc.contains("frames") || !doc["frames"].is_array()) fail(ErrorKind::kParse, "field frames: missing or not an array");
  const double fps = doc["fps"].get<double>();

  std::vector<std::string> names;
  if (doc.contains("joints")) {
    if (!doc["joints"].is_array()) fail(ErrorKind::kParse, "field joints: expected an array of names");
    for (std::size_t j = 0; j < doc["joints"].size(); ++j) {
      const auto& n = doc["joints"][j];
      if (!n.is_string()) fail(ErrorKind::kParse, "field joints[" + std::to_string(j) + "]: expected a string");
      names.push_back(n.get<std::string>());
    }
  }

  std::vector<JointFrame> frames;
  const auto& jf = doc["frames"];
  for (std::size_t i = 0; i < jf.size(); ++i) {
    const std::string field = "frames[" + std::to_string(i) + "]";
    const auto& f = jf[i];
    if (!f.is_array()) fail(ErrorKind::kParse, "field " + field + ": expected an array");
    JointFrame frame;
    frame.timestamp = static_cast<double>(i) / fps;
    if (!f.empty() && f[0].is_array()) {
      for (std::size_t j = 0; j < f.size(); ++j) {
        const std::string jfield = field + "[" + std::to_string(j) + "]";
        if (!f[j].is_array() || f[j].size() != 3) fail(ErrorKind::kParse, "field " + jfield + ": expected [x,y,z]");
        frame.joints.emplace_back(coordinate(f[j][0], jfield + "[0]"), coordinate(f[j][1], jfield + "[1]"),
                                  coordinate(f[j][2], jfield + "[2]"));
      }
    } else {
      if (f.size() % 3 != 0) fail(ErrorKind::kParse, "field " + field + ": flat coordinate list not a multiple of 3");
      for (std::size_t k = 0; k < f.size(); k += 3) {
        frame.joints.emplace_back(coordinate(f[k], field), coordinate(f[k + 1], field), coordinate(f[k + 2], field));
      }
    }
    frames.push_back(std::move(frame));
  }
  if (names.empty() && !frames.empty()) names.resize(frames.front().joints.size());
  return MotionSequence(std::move(frames), fps, std::move(names));
}

MotionSequence loadSkeletonJson(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open motion file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parseSkeletonJson(ss.str());
}

std::string toSkeletonJson(const MotionSequence& seq) {
  nlohmann::ordered_json doc;
  doc["fps"] = seq.nativeFps();
  doc["joints"] = seq.jointNames();
  auto frames = nlohmann::ordered_json::array();
  for (const auto& f : seq.frames()) {
    auto jf = nlohmann::ordered_json::array();
    for (const Vec3& p : f.joints) jf.push_back({p.x(), p.y(), p.z()});
    frames.push_back(std::move(jf));
  }
  doc["frames"] = std::move(frames);
  return doc.dump();
}

MeshSequence loadMeshSequence(const std::filesystem::path& dir, double fps) {
  if (!std::filesystem::is_directory(dir)) fail(ErrorKind::kNotFound, "mesh directory not found: " + dir.string());
  if (!(fps > 0.0)) fail(ErrorKind::kInvalidArgument, "mesh fps must be > 0");
  static const std::regex kIndex(R"((\d{6})\.ply$)", std::regex::icase);
  std::map<long, std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (entry.is_regular_file() && std::regex_search(name, m, kIndex)) {
      const long idx = std::stol(m[1].str());
      if (!files.emplace(idx, entry.path()).second) {
        fail(ErrorKind::kValidation, "duplicate frame index " + std::to_string(idx) + " in " + dir.string());
      }
    }
  }
  if (files.size() < 2) fail(ErrorKind::kValidation, "mesh sequence needs at least 2 frames");
  MeshSequence seq;
  seq.native_fps = fps;
  for (const auto& [idx, path] : files) {
    seq.frames.push_back(ply::readMesh(path));
    seq.timestamps.push_back(static_cast<double>(idx) / fps);
  }
  const std::size_t nv = seq.frames.front().vertices.size();
  const bool shared = std::all_of(seq.frames.begin(), seq.frames.end(),
                                  [&](const TriMesh& m) { return m.vertices.size() == nv; });
  if (shared) {
    const std::size_t n = seq.frames.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? i : i + 1;
      const double dt = seq.timestamps[hi] - seq.timestamps[lo];
      for (std::size_t v = 0; v < nv; ++v) {
        seq.frames[i].velocities[v] = (seq.frames[hi].vertices[v] - seq.frames[lo].vertices[v]) / dt;
      }
    }
  }
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    try {
      seq.frames[i].validate();
    } catch (const Error& e) {
      fail(ErrorKind::kValidation, "mesh frame " + std::to_string(i) + ": " + e.what());
    }
  }
  return seq;
}

std::variant<MotionSequence, MeshSequence> loadMotion(const std::filesystem::path& path, MotionFormat format,
                                                      double mesh_fps) {
  if (format == MotionFormat::kSkeletonJson) return loadSkeletonJson(path);
  return loadMeshSequence(path, mesh_fps);
}

TriMesh skinCapsules(const JointFrame& frame, const BodyTemplate& body, const Tessellation& tess) {
  if (tess.rings < 2 || tess.sectors < 3) fail(ErrorKind::kInvalidArgument, "tessellation needs rings >= 2 and sectors >= 3");
  body.validate(frame.joints.size());
  TriMesh mesh;
  mesh.vertices.reserve(body.segments.size() * tess.verticesPerCapsule());
  mesh.triangles.reserve(body.segments.size() * tess.trianglesPerCapsule());
  for (std::size_t s = 0; s < body.segments.size(); ++s) {
    const auto& seg = body.segments[s];
    const Vec3& a = frame.joints[seg.joint_a];
    const Vec3& b = frame.joints[seg.joint_b];
    if ((b - a).norm() < 1e-9) {
      fail(ErrorKind::kValidation, "segment " + std::to_string(s) + " is degenerate (joint " +
                                       std::to_string(seg.joint_a) + " coincides with joint " +
                                       std::to_string(seg.joint_b) + ")");
    }
    appendCapsule(mesh, a, b, seg.radius, tess);
  }
  mesh.velocities.assign(mesh.vertices.size(), Vec3::Zero());
  return mesh;
}

TriMesh skinCapsules(const MotionSequence& seq, std::size_t index, const BodyTemplate& body,
                     const Tessellation& tess) {
  if (index >= seq.size()) fail(ErrorKind::kOutOfRange, "frame index out of range");
  TriMesh mesh = skinCapsules(seq.frame(index), body, tess);
  const std::size_t lo = index == 0 ? 0 : index - 1;
  const std::size_t hi = index + 1 == seq.size() ? index : index + 1;
  const TriMesh before = lo == index ? mesh : skinCapsules(seq.frame(lo), body, tess);
  const TriMesh after = hi == index ? mesh : skinCapsules(seq.frame(hi), body, tess);
  const double dt = seq.frame(hi).timestamp - seq.frame(lo).timestamp;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    mesh.velocities[v] = (after.vertices[v] - before.vertices[v]) / dt;
  }
  return mesh;
}

MotionSequence resample(const MotionSequence& seq, double target_fps) {
  const auto grid = outputGrid(seq.frames().front().timestamp, seq.frames().back().timestamp, target_fps);
  std::vector<double> times;
  times.reserve(seq.size());
  for (const auto& f : seq.frames()) times.push_back(f.timestamp);
  std::vector<JointFrame> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const Interval iv = locate(times, t);
    JointFrame f;
    f.timestamp = t;
    if (iv.w == 0.0) {
      f.joints = seq.frame(iv.lo).joints;
    } else {
      const auto& a = seq.frame(iv.lo).joints;
      const auto& b = seq.frame(iv.lo + 1).joints;
      f.joints.resize(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) f.joints[j] = lerp(a[j], b[j], iv.w);
    }
    out.push_back(std::move(f));
  }
  return MotionSequence(std::move(out), target_fps, seq.jointNames());
}

MeshSequence resample(const MeshSequence& seq, double target_fps) {
  if (seq.frames.size() < 2 || seq.frames.size() != seq.timestamps.size()) {
    fail(ErrorKind::kValidation, "mesh sequence needs >= 2 timestamped frames");
  }
  const auto grid = outputGrid(seq.timestamps.front(), seq.timestamps.back(), target_fps);
  MeshSequence out;
  out.native_fps = target_fps;
  for (double t : grid) {
    const Interval iv = locate(seq.timestamps, t);
    if (iv.w == 0.0) {
      out.frames.push_back(seq.frames[iv.lo]);
    } else {
      const TriMesh& a = seq.frames[iv.lo];
      const TriMesh& b = seq.frames[iv.lo + 1];
      if (a.vertices.size() != b.vertices.size() || a.triangles != b.triangles) {
        fail(ErrorKind::kValidation, "cannot interpolate meshes with different topology");
      }
      TriMesh m = a;
      for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        m.vertices[v] = lerp(a.vertices[v], b.vertices[v], iv.w);
        m.velocities[v] = lerp(a.velocities[v], b.velocities[v], iv.w);
      }
      out.frames.push_back(std::move(m));
    }
    out.timestamps.push_back(t);
  }
  return out;
}

const std::vector<std::string>& standardJointNames() {
  static const std::vector<std::string> kNames = {
      "pelvis",     "chest",   "neck",    "head",       "l_shoulder", "l_elbow", "l_wrist", "r_shoulder",
      "r_elbow",    "r_wrist", "l_hip",   "l_knee",     "l_ankle",    "r_hip",   "r_knee",  "r_ankle",
  };
  return kNames;
}

BodyTemplate defaultBodyTemplate(const std::vector<std::string>& joint_names) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < joint_names.size(); ++i) index[joint_names[i]] = i;
  auto id = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) fail(ErrorKind::kValidation, "default body template needs joint '" + name + "'");
    return it->second;
  };
  struct Spec {
    const char* a;
    const char* b;
    double radius;
  };
  static const Spec kSegments[] = {
      {"pelvis", "chest", 0.14},       {"chest", "neck", 0.12},          {"neck", "head", 0.10},
      {"chest", "l_shoulder", 0.06},   {"l_shoulder", "l_elbow", 0.05},  {"l_elbow", "l_wrist", 0.04},
      {"chest", "r_shoulder", 0.06},   {"r_shoulder", "r_elbow", 0.05},  {"r_elbow", "r_wrist", 0.04},
      {"pelvis", "l_hip", 0.08},       {"l_hip", "l_knee", 0.07},        {"l_knee", "l_ankle", 0.05},
      {"pelvis", "r_hip", 0.08},       {"r_hip", "r_knee", 0.07},        {"r_knee", "r_ankle", 0.05},
  };
  BodyTemplate body;
  for (const auto& s : kSegments) body.segments.push_back({id(s.a), id(s.b), s.radius});
  body.bounding_box = Vec3(1.0, 1.0, 2.0);
  return body;
}

MotionSequence proceduralMotion(const GaitOptions& options) {
  if (options.frames < 2 || !(options.fps > 0.0)) fail(ErrorKind::kInvalidArgument, "procedural motion needs >= 2 frames and fps > 0");
  // Segment lengths (m) for a ~1.75 m adult.
  constexpr double kThigh = 0.45, kShin = 0.43, kUpperArm = 0.30, kForearm = 0.27;
  constexpr double kPelvisHeight = 0.95, kHipHalfWidth = 0.10, kShoulderHalfWidth = 0.19;

  const bool moving = options.kind != GaitKind::kStatic;
  const double forward_speed = options.kind == GaitKind::kWalk ? options.speed_mps : 0.0;
  std::vector<JointFrame> frames;
  frames.reserve(options.frames);
  for (std::size_t i = 0; i < options.frames; ++i) {
    const double t = static_cast<double>(i) / options.fps;
    const double phase = 2.0 * std::numbers::pi * options.cadence_hz * t;
    const double swing = moving ? options.hip_amplitude_rad * std::sin(phase) : 0.0;
    const Vec3 ground = options.start + Vec3(0.0, forward_speed * t, 0.0);
    const double bob = moving ? 0.02 * std::cos(2.0 * phase) : 0.0;

    // Limb direction in the sagittal (y-z) plane; angle measured from -z toward +y.
    auto limb = [](double angle) { return Vec3(0.0, std::sin(angle), -std::cos(angle)); };

    std::vector<Vec3> j(16);
    j[0] = ground + Vec3(0.0, 0.0, kPelvisHeight + bob);   // pelvis
    j[1] = j[0] + Vec3(0.0, 0.0, 0.30);                    // chest
    j[2] = j[1] + Vec3(0.0, 0.0, 0.18);                    // neck
    j[3] = j[2] + Vec3(0.0, 0.0, 0.20);                    // head
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? -1.0 : 1.0;  // left = -x
      const double leg = side == 0 ? swing : -swing;
      const double arm = -0.8 * leg;
      const double knee = moving ? 0.5 * std::max(0.0, std::sin(phase + (side == 0 ? 0.0 : std::numbers::pi) - 0.6)) : 0.0;
      const std::size_t sh = side == 0 ? 4 : 7;
      const std::size_t hip = side == 0 ? 10 : 13;
      j[sh] = j[1] + Vec3(sign * kShoulderHalfWidth, 0.0, 0.12);
      j[sh + 1] = j[sh] + kUpperArm * limb(arm);
      j[sh + 2] = j[sh + 1] + kForearm * limb(arm + (moving ? 0.3 : 0.05));
      j[hip] = j[0] + Vec3(sign * kHipHalfWidth, 0.0, -0.05);
      j[hip + 1] = j[hip] + kThigh * limb(leg);
      j[hip + 2] = j[hip + 1] + kShin * limb(leg - knee);
    }
    frames.push_back({t, std::move(j)});
  }
  return MotionSequence(std::move(frames), options.fps, standardJointNames());
}

}  // namespace mmsim
