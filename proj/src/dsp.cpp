#include "mmsim/dsp.hpp"

#include "mmsim/error.hpp"
#include "mmsim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mmsim {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("dsp", kind, msg); }

std::vector<double> windowCoefficients(Window window, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (window == Window::kHann && n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
  }
  return w;
}

struct CellKey {
  double magnitude;
  std::uint32_t range_bin;
  std::uint32_t doppler_bin;
};

bool ranksBefore(const CellKey& a, const CellKey& b) {
  if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
  if (a.range_bin != b.range_bin) return a.range_bin < b.range_bin;
  return a.doppler_bin < b.doppler_bin;
}

// Best `count` cells in ranking order.
std::vector<CellKey> rankCells(const RangeDopplerMap& map, std::size_t count) {
  std::vector<CellKey> keys;
  keys.reserve(map.dopplerBins() * map.rangeBins());
  for (std::uint32_t v = 0; v < map.dopplerBins(); ++v) {
    for (std::uint32_t r = 0; r < map.rangeBins(); ++r) keys.push_back({map.meanMagnitude(v, r), r, v});
  }
  count = std::min(count, keys.size());
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count), keys.end(), ranksBefore);
  keys.resize(count);
  return keys;
}

Peak makePeak(const RangeDopplerMap& map, const CellKey& key) {
  Peak p;
  p.range_bin = key.range_bin;
  p.doppler_bin = key.doppler_bin;
  p.magnitude = key.magnitude;
  p.per_rx.reserve(map.rxCount());
  for (std::size_t i = 0; i < map.rxCount(); ++i) p.per_rx.push_back(map.values(i, key.doppler_bin, key.range_bin));
  return p;
}

}  // namespace

double RangeDopplerMap::meanMagnitude(std::size_t doppler, std::size_t range) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < rxCount(); ++i) sum += std::abs(values(i, doppler, range));
  return sum / static_cast<double>(rxCount());
}

RangeSpectra rangeFft(const IfCube& cube, Window window) {
  RangeSpectra out{cube.config, cube.samples};
  const auto w = windowCoefficients(window, out.values.inner());
  for (std::size_t rx = 0; rx < out.values.outer(); ++rx) {
    for (std::size_t m = 0; m < out.values.middle(); ++m) {
      auto row = out.values.row(rx, m);
      if (window != Window::kRectangular) {
        for (std::size_t n = 0; n < row.size(); ++n) row[n] *= w[n];
      }
      fft::forward(row);
    }
  }
  return out;
}

RangeDopplerMap dopplerFft(const RangeSpectra& spectra, Window window) {
  const ComplexCube& in = spectra.values;
  const std::size_t chirps = in.middle();
  RangeDopplerMap map{spectra.config, ComplexCube(in.outer(), chirps, in.inner())};
  const auto w = windowCoefficients(window, chirps);
  std::vector<Complex> column(chirps);
  for (std::size_t rx = 0; rx < in.outer(); ++rx) {
    for (std::size_t r = 0; r < in.inner(); ++r) {
      for (std::size_t m = 0; m < chirps; ++m) column[m] = in(rx, m, r) * w[m];
      fft::forward(column);
      // fftshift: frequency k lands in bin (k + M/2) mod M.
      for (std::size_t k = 0; k < chirps; ++k) map.values(rx, (k + chirps / 2) % chirps, r) = column[k];
    }
  }
  return map;
}

RangeDopplerMap removeClutter(const RangeDopplerMap& map) {
  const std::size_t n_rx = map.rxCount();
  if (n_rx < 2) fail(ErrorKind::kInvalidArgument, "clutter removal requires multiple rx");
  RangeDopplerMap out = map;
  for (std::size_t v = 0; v < map.dopplerBins(); ++v) {
    for (std::size_t r = 0; r < map.rangeBins(); ++r) {
      Complex mean = 0.0;
      for (std::size_t i = 0; i < n_rx; ++i) mean += map.values(i, v, r);
      mean /= static_cast<double>(n_rx);
      for (std::size_t i = 0; i < n_rx; ++i) out.values(i, v, r) = map.values(i, v, r) - mean;
    }
  }
  return out;
}

PeakSet selectTopK(const RangeDopplerMap& map, std::size_t k) {
  const std::size_t cells = map.dopplerBins() * map.rangeBins();
  if (cells < k) {
    fail(ErrorKind::kInvalidArgument, "map has " + std::to_string(cells) + " cells, fewer than k = " + std::to_string(k));
  }
  PeakSet set;
  set.peaks.reserve(k);
  for (const CellKey& key : rankCells(map, k)) set.peaks.push_back(makePeak(map, key));
  return set;
}

double estimateAzimuth(const std::vector<Complex>& per_rx, const RadarConfig& config) {
  if (per_rx.size() < 2) return 0.0;
  // Average phase step between neighbouring elements; element i+1 sits at
  // larger x, so a target at positive azimuth (toward +x) arrives earlier
  // there and its phase is smaller.
  Complex acc = 0.0;
  for (std::size_t i = 0; i + 1 < per_rx.size(); ++i) acc += per_rx[i] * std::conj(per_rx[i + 1]);
  if (acc == Complex(0.0)) return 0.0;
  const double wavelength = kSpeedOfLight / config.carrier_hz;
  const double s = wavelength * std::arg(acc) / (2.0 * std::numbers::pi * config.rx_spacing_m);
  return std::asin(std::clamp(s, -1.0, 1.0));
}

RadarPoint decodePoint(const Peak& peak, const RadarConfig& config, const DecodeOptions& options) {
  if (peak.range_bin >= config.samples_per_chirp || peak.doppler_bin >= config.chirps_per_frame) {
    fail(ErrorKind::kOutOfRange, "peak bins outside the range-doppler map");
  }
  double magnitude = 0.0;
  for (const Complex& c : peak.per_rx) magnitude += std::abs(c);
  if (!peak.per_rx.empty()) magnitude /= static_cast<double>(peak.per_rx.size());
  if (!(magnitude > 0.0)) fail(ErrorKind::kInvalidArgument, "zero-valued peak has undefined intensity");

  const DerivedParams derived = derive(config);
  RadarPoint p;
  p.range_m = peak.range_bin * derived.range_resolution_m;
  const auto signed_bin = static_cast<double>(peak.doppler_bin) - static_cast<double>(config.chirps_per_frame / 2);
  p.velocity_mps = signed_bin * derived.velocity_resolution_mps;
  p.intensity_db = 10.0 * std::log10(magnitude);

  if (options.angle_mode == AngleMode::kPhaseArray) {
    // Elevation is unobservable with a line array and fixed at 0:
    // x lateral (sin theta), y boresight (cos theta).
    const double theta = estimateAzimuth(peak.per_rx, config);
    p.x = p.range_m * std::sin(theta);
    p.y = p.range_m * std::cos(theta);
    p.z = options.mount_height_m;
  } else {
    // Printed form: theta = asin(lambda * v_m / (2 d_max)), phi = atan(y_ant / x_ant),
    // x = r sin(theta) cos(phi), y = r sin(theta) sin(phi), z = r cos(theta).
    // d_max is taken as the array aperture; the antenna vector spans first to last rx.
    const double aperture = config.rx_count > 1 ? (config.rx_count - 1) * config.rx_spacing_m : config.rx_spacing_m;
    const double theta = std::asin(std::clamp(derived.wavelength_m * signed_bin / (2.0 * aperture), -1.0, 1.0));
    const double phi = std::atan2(0.0, aperture);
    p.x = p.range_m * std::sin(theta) * std::cos(phi);
    p.y = p.range_m * std::sin(theta) * std::sin(phi);
    p.z = p.range_m * std::cos(theta) + options.mount_height_m;
  }
  return p;
}

FrameCloud processFrame(const IfCube& cube, const ProcessOptions& options) {
  const RangeDopplerMap map = removeClutter(dopplerFft(rangeFft(cube, options.range_window), options.doppler_window));
  const std::size_t cells = map.dopplerBins() * map.rangeBins();
  if (cells < options.points) fail(ErrorKind::kInvalidArgument, "range-doppler map smaller than the point budget");

  FrameCloud cloud;
  cloud.frame_index = static_cast<std::uint32_t>(cube.frame_index);
  cloud.timestamp_s = static_cast<double>(cube.frame_index) / cube.config.frame_rate_hz;
  cloud.points.reserve(options.points);

  std::size_t budget = std::min(cells, options.points + options.points / 2);
  std::vector<CellKey> ranked = rankCells(map, budget);
  std::size_t next = 0;
  while (cloud.points.size() < options.points) {
    if (next == ranked.size()) {
      if (ranked.size() == cells) {
        fail(ErrorKind::kInvalidArgument, "only " + std::to_string(cloud.points.size()) +
                                              " decodable cells; cannot emit " + std::to_string(options.points));
      }
      ranked = rankCells(map, cells);
    }
    const Peak peak = makePeak(map, ranked[next++]);
    try {
      cloud.points.push_back(decodePoint(peak, cube.config, options.decode));
    } catch (const Error&) {
      // Zero-valued cell: skip, the next-ranked cell takes its place.
    }
  }
  return cloud;
}

}  // namespace mmsim
