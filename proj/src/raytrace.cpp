#include "mmsim/raytrace.hpp"

#include "mmsim/error.hpp"
#include "mmsim/rng.hpp"

#include <cmath>
#include <limits>

namespace mmsim {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("raytrace", kind, msg); }

// Relative slack so the segment to a sample does not re-hit the sample's own surface.
constexpr double kSegmentSlack = 1e-7;

bool blocked(const TriangleBvh& bvh, const Vec3& from, const Vec3& to, std::uint32_t own) {
  const Vec3 dir = to - from;
  Ray ray{from, dir, kSegmentSlack, 1.0 - kSegmentSlack};
  return bvh.anyHit(ray, own);
}

double antennaGain(const Vec3& direction, double exponent) {
  if (exponent == 0.0) return 1.0;
  const double c = std::max(0.0, direction.normalized().y());
  return std::pow(c, exponent);
}

}  // namespace

AntennaArray AntennaArray::fromConfig(const RadarConfig& config) {
  AntennaArray array;
  const double half = 0.5 * (static_cast<double>(config.rx_count) - 1.0);
  for (std::uint32_t i = 0; i < config.rx_count; ++i) {
    array.rx_positions.emplace_back((static_cast<double>(i) - half) * config.rx_spacing_m, 0.0, 0.0);
  }
  for (std::uint32_t k = 0; k < config.tx_count; ++k) {
    array.tx_positions.emplace_back(static_cast<double>(k) * config.rx_count * config.rx_spacing_m, 0.0, 0.0);
  }
  return array;
}

void AntennaArray::validate(const RadarConfig& config) const {
  if (tx_positions.size() != config.tx_count || rx_positions.size() != config.rx_count) {
    fail(ErrorKind::kValidation, "antenna counts do not match the radar config");
  }
  for (const auto& p : tx_positions) {
    if (!isFinite(p)) fail(ErrorKind::kValidation, "non-finite tx position");
  }
  for (const auto& p : rx_positions) {
    if (!isFinite(p)) fail(ErrorKind::kValidation, "non-finite rx position");
  }
}

std::vector<SurfaceSample> sampleSurface(const TriMesh& mesh, double density, const Aabb& focus, std::uint64_t seed) {
  if (!(density > 0.0) || !std::isfinite(density)) fail(ErrorKind::kInvalidArgument, "sample density must be > 0");
  if (mesh.triangles.empty() || !(mesh.totalArea() > 0.0)) fail(ErrorKind::kInvalidArgument, "mesh has zero area");
  std::vector<SurfaceSample> out;
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    const double area = mesh.triangleArea(t);
    if (!(area > 0.0)) continue;
    rng::Stream stream(rng::hashKey({seed, t}));
    const double expected = area * density;
    auto count = static_cast<std::size_t>(std::floor(expected));
    if (stream.uniform() < expected - std::floor(expected)) ++count;
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const Vec3 normal = mesh.triangleNormal(t);
    for (std::size_t k = 0; k < count; ++k) {
      const double r1 = std::sqrt(stream.uniform());
      const double r2 = stream.uniform();
      const double wa = 1.0 - r1, wb = r1 * (1.0 - r2), wc = r1 * r2;
      const Vec3 p = wa * a + wb * b + wc * c;
      if (!focus.contains(p)) continue;
      SurfaceSample s;
      s.position = p;
      s.normal = normal;
      s.area = 1.0 / density;
      s.velocity = wa * mesh.velocities[tri[0]] + wb * mesh.velocities[tri[1]] + wc * mesh.velocities[tri[2]];
      s.triangle = t;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<ScatterPath> traceSamples(std::span<const SurfaceSample> samples, const TriangleBvh* occluders,
                                      const AntennaArray& array, double gain_exponent) {
  if (array.tx_positions.empty() || array.rx_positions.empty()) fail(ErrorKind::kInvalidArgument, "antenna array is empty");
  const Vec3& tx = array.tx_positions.front();
  std::vector<ScatterPath> paths;
  paths.reserve(samples.size() * array.rx_positions.size());
  for (const SurfaceSample& s : samples) {
    const Vec3 to_tx = tx - s.position;
    const double d_tx = to_tx.norm();
    if (!(d_tx > 0.0)) continue;
    const double cos_inc = s.normal.dot(to_tx) / d_tx;
    if (!(cos_inc > 0.0)) continue;
    if (occluders && blocked(*occluders, tx, s.position, s.triangle)) continue;
    const Vec3 u_tx = -to_tx / d_tx;  // unit tx -> sample
    const double g_tx = antennaGain(-to_tx, gain_exponent);
    for (std::uint32_t r = 0; r < array.rx_positions.size(); ++r) {
      const Vec3& rx = array.rx_positions[r];
      const Vec3 to_rx = rx - s.position;
      const double d_rx = to_rx.norm();
      if (!(d_rx > 0.0) || !(s.normal.dot(to_rx) > 0.0)) continue;
      if (occluders && rx != tx && blocked(*occluders, s.position, rx, s.triangle)) continue;
      const Vec3 u_rx = -to_rx / d_rx;  // unit rx -> sample
      ScatterPath p;
      p.rx_index = r;
      p.path_length_m = d_tx + d_rx;
      p.path_rate_mps = s.velocity.dot(u_tx + u_rx);
      const double gain = g_tx * antennaGain(-to_rx, gain_exponent);
      p.amplitude = gain * s.area * cos_inc / (p.path_length_m * p.path_length_m);
      paths.push_back(p);
    }
  }
  return paths;
}

std::vector<ScatterPath> traceFrame(const TriMesh& mesh, const AntennaArray& array, const RadarConfig& config,
                                    std::uint64_t seed, const TraceOptions& options) {
  array.validate(config);
  const TriangleBvh bvh(mesh);
  // Samples lie on the mesh by construction; an exact-bounds box would drop some to roundoff.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Aabb focus = options.focus.value_or(Aabb{Vec3::Constant(-kInf), Vec3::Constant(kInf)});
  const auto samples = sampleSurface(mesh, options.density, focus, seed);
  return traceSamples(samples, &bvh, array, options.gain_exponent);
}

}  // namespace mmsim
