#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mmsim {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Complete FMCW parameterization. The swept bandwidth is the full ramp; the
/// sampled bandwidth is the part covered while the ADC is running and is the
/// one that sets range resolution.
struct RadarConfig {
  double carrier_hz = 77e9;
  double swept_bandwidth_hz = 3.9e9;
  double sampled_bandwidth_hz = 3.488e9;
  double chirp_interval_s = 214.3e-6;
  std::uint32_t samples_per_chirp = 256;
  std::uint32_t chirps_per_frame = 128;
  double frame_rate_hz = 10.0;
  std::uint32_t tx_count = 3;
  std::uint32_t rx_count = 4;
  double rx_spacing_m = kSpeedOfLight / 77e9 / 2.0;  // half wavelength at the carrier
  double snr_db = 20.0;                              // +inf disables noise
  std::uint64_t rng_seed = 0;

  /// Throws mmsim::Error (module "fmcw_config") naming the first violated invariant.
  void validate() const;

  bool operator==(const RadarConfig&) const = default;
};

struct DerivedParams {
  double wavelength_m = 0.0;
  double range_resolution_m = 0.0;
  double max_range_m = 0.0;
  double velocity_resolution_mps = 0.0;
  double max_velocity_mps = 0.0;
};

RadarConfig defaultConfig();
DerivedParams derive(const RadarConfig& config);

// Key/value file I/O. The document is a JSON object holding exactly the
// RadarConfig field names; unknown or missing keys are rejected.
RadarConfig parseConfig(std::string_view text);
RadarConfig loadConfig(const std::filesystem::path& path);
std::string toJson(const RadarConfig& config);
/// Applies one `key=value` override; throws on unknown keys or bad values.
void applyOverride(RadarConfig& config, std::string_view assignment);

/// 64-bit FNV-1a digest of the canonical serialization.
std::uint64_t configHash(const RadarConfig& config);

}  // namespace mmsim
