#pragma once

// Beat-signal synthesis from scatter paths and calibrated complex noise.

#include "mmsim/cube.hpp"
#include "mmsim/radar_config.hpp"
#include "mmsim/raytrace.hpp"

#include <cstdint>
#include <filesystem>
#include <span>

namespace mmsim {

/// Complex IF samples indexed [rx][chirp][fast-time sample].
struct IfCube {
  RadarConfig config;
  std::size_t frame_index = 0;
  ComplexCube samples;

  IfCube() = default;
  IfCube(const RadarConfig& cfg, std::size_t frame)
      : config(cfg), frame_index(frame), samples(cfg.rx_count, cfg.chirps_per_frame, cfg.samples_per_chirp) {}

  /// Mean |x|^2 over the whole cube.
  double meanPower() const;
};

/// Sums A * exp(j 2pi/c * d_m * (B_valid * n/N + f_c)) over paths, where
/// d_m = d + ddot * (m - M/2) * chirp_interval. The traced geometry is taken
/// as the frame-centre snapshot; the chirp-to-chirp phase advance is
/// (2pi/lambda) * ddot * chirp_interval.
IfCube synthesizeIf(std::span<const ScatterPath> paths, const RadarConfig& config, std::size_t frame_index = 0);

/// Adds sigma * eps with sigma^2 = P_signal / 10^(snr/10) and eps complex
/// normal of unit total variance (1/2 per component). Draws are keyed by
/// (seed, frame, rx, chirp, sample). snr_db = +inf returns an exact copy.
IfCube addNoise(const IfCube& cube, double snr_db, std::uint64_t seed);

/// Unit-variance complex noise alone, same keying as addNoise.
IfCube noiseCube(const RadarConfig& config, std::size_t frame_index, double sigma, std::uint64_t seed);

// "IFC1" raw dump: magic, u32 rx, u32 chirps, u32 samples, complex64 row-major, little-endian.
void writeIfCube(const std::filesystem::path& path, const IfCube& cube);
ComplexCube readIfCube(const std::filesystem::path& path);

}  // namespace mmsim
