#pragma once

// Range/Doppler processing, static clutter removal, fixed-count peak
// selection and decoding to 6-channel radar points.

#include "mmsim/cube.hpp"
#include "mmsim/if_synth.hpp"
#include "mmsim/radar_config.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mmsim {

inline constexpr std::size_t kPointsPerFrame = 128;

enum class Window { kRectangular, kHann };

/// Range spectra indexed [rx][chirp][range bin].
struct RangeSpectra {
  RadarConfig config;
  ComplexCube values;
};

/// Indexed [rx][doppler bin][range bin]; doppler bin chirps/2 is zero velocity.
struct RangeDopplerMap {
  RadarConfig config;
  ComplexCube values;

  std::size_t rxCount() const { return values.outer(); }
  std::size_t dopplerBins() const { return values.middle(); }
  std::size_t rangeBins() const { return values.inner(); }
  /// Mean over rx of |D_i(doppler, range)|: the peak ranking key.
  double meanMagnitude(std::size_t doppler, std::size_t range) const;
};

struct Peak {
  std::uint32_t range_bin = 0;
  std::uint32_t doppler_bin = 0;
  std::vector<Complex> per_rx;  // D_m, one entry per receiver
  double magnitude = 0.0;       // mean over rx of |D_m|
};

/// Sorted by descending magnitude; exact ties go to the lower range bin, then
/// the lower doppler bin.
struct PeakSet {
  std::vector<Peak> peaks;
};

struct RadarPoint {
  double x = 0.0, y = 0.0, z = 0.0;  // m, y = boresight, z = up
  double range_m = 0.0;
  double velocity_mps = 0.0;         // radial, positive = receding
  double intensity_db = 0.0;

  std::array<float, 6> features() const {
    return {static_cast<float>(x), static_cast<float>(y), static_cast<float>(z),
            static_cast<float>(range_m), static_cast<float>(velocity_mps), static_cast<float>(intensity_db)};
  }
};

struct FrameCloud {
  std::uint32_t frame_index = 0;
  double timestamp_s = 0.0;
  std::vector<RadarPoint> points;  // exactly kPointsPerFrame
};

enum class AngleMode {
  kPhaseArray,    // azimuth from the inter-element phase progression
  kPaperLiteral,  // theta from the doppler bin, phi from antenna geometry (z along boresight)
};

struct DecodeOptions {
  AngleMode angle_mode = AngleMode::kPhaseArray;
  double mount_height_m = 0.0;  // added to z
};

RangeSpectra rangeFft(const IfCube& cube, Window window = Window::kRectangular);
RangeDopplerMap dopplerFft(const RangeSpectra& spectra, Window window = Window::kRectangular);
/// D_i - (1/N_rx) sum_j D_j, elementwise. Requires rx_count >= 2.
RangeDopplerMap removeClutter(const RangeDopplerMap& map);
PeakSet selectTopK(const RangeDopplerMap& map, std::size_t k = kPointsPerFrame);

/// Throws Error(kInvalidArgument) when every per-rx value is zero (intensity
/// undefined).
RadarPoint decodePoint(const Peak& peak, const RadarConfig& config, const DecodeOptions& options = {});

/// Azimuth (rad) from per-rx phases of a uniform line array along +x.
double estimateAzimuth(const std::vector<Complex>& per_rx, const RadarConfig& config);

struct ProcessOptions {
  Window range_window = Window::kRectangular;
  Window doppler_window = Window::kRectangular;
  DecodeOptions decode;
  std::size_t points = kPointsPerFrame;
};

/// Full chain. Peaks that fail to decode are replaced by the next-ranked
/// cell, so the output always holds `options.points` points; throws only if
/// the map has fewer decodable cells than that.
FrameCloud processFrame(const IfCube& cube, const ProcessOptions& options = {});

}  // namespace mmsim
