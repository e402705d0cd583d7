#pragma once

// Single-bounce scattering from sampled body surface to the receive array.

#include "mmsim/bvh.hpp"
#include "mmsim/geometry.hpp"
#include "mmsim/motion.hpp"
#include "mmsim/radar_config.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mmsim {

/// Only tx_positions.front() is traced (single effective transmitter); the
/// remaining transmitters are kept for geometry bookkeeping.
struct AntennaArray {
  std::vector<Vec3> tx_positions;
  std::vector<Vec3> rx_positions;

  /// TX at the origin, RX as a uniform line along +x centred on the origin.
  /// Extra transmitters sit at the usual virtual-array offsets
  /// (k * rx_count * rx_spacing).
  static AntennaArray fromConfig(const RadarConfig& config);
  void validate(const RadarConfig& config) const;
};

struct SurfaceSample {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double area = 0.0;  // m^2 represented by this sample
  Vec3 velocity = Vec3::Zero();
  std::uint32_t triangle = 0;
};

struct ScatterPath {
  std::uint32_t rx_index = 0;
  double path_length_m = 0.0;  // tx -> surface -> rx
  double path_rate_mps = 0.0;  // d/dt of path_length_m
  double amplitude = 0.0;
};

/// Area-weighted stratified sampling: each triangle receives floor(area *
/// density) samples plus one more with probability equal to the remainder.
/// Samples outside `focus` are discarded. Every draw is keyed by (seed,
/// triangle), so the result is independent of evaluation order.
std::vector<SurfaceSample> sampleSurface(const TriMesh& mesh, double density, const Aabb& focus, std::uint64_t seed);

struct TraceOptions {
  double density = 400.0;    // samples per m^2
  std::optional<Aabb> focus; // defaults to the mesh bounds
  /// Antenna pattern cos^n(off-boresight angle) applied at tx and rx; 0 = isotropic.
  double gain_exponent = 0.0;
};

/// One path per (visible sample, rx). A sample is visible when it faces both
/// antennas and neither the tx->sample nor the sample->rx segment is blocked
/// by another triangle. `occluders` may be null to skip the occlusion test.
std::vector<ScatterPath> traceSamples(std::span<const SurfaceSample> samples, const TriangleBvh* occluders,
                                      const AntennaArray& array, double gain_exponent = 0.0);

std::vector<ScatterPath> traceFrame(const TriMesh& mesh, const AntennaArray& array, const RadarConfig& config,
                                    std::uint64_t seed, const TraceOptions& options = {});

}  // namespace mmsim
