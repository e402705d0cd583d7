#include "mmsim/if_synth.hpp"

#include "mmsim/error.hpp"
#include "mmsim/rng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

namespace mmsim {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("if_synth", kind, msg); }

constexpr char kCubeMagic[4] = {'I', 'F', 'C', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

double IfCube::meanPower() const {
  if (samples.size() == 0) return 0.0;
  double sum = 0.0;
  for (const Complex& c : samples.data()) sum += std::norm(c);
  return sum / static_cast<double>(samples.size());
}

IfCube synthesizeIf(std::span<const ScatterPath> paths, const RadarConfig& config, std::size_t frame_index) {
  config.validate();
  IfCube cube(config, frame_index);
  const std::size_t chirps = config.chirps_per_frame;
  const std::size_t n_samples = config.samples_per_chirp;
  const double k_carrier = 2.0 * std::numbers::pi * config.carrier_hz / kSpeedOfLight;
  const double k_beat = 2.0 * std::numbers::pi * config.sampled_bandwidth_hz / (kSpeedOfLight * n_samples);
  const double centre = 0.5 * static_cast<double>(chirps);

  for (const ScatterPath& p : paths) {
    if (p.rx_index >= config.rx_count) {
      fail(ErrorKind::kValidation, "path rx_index " + std::to_string(p.rx_index) + " >= rx_count " +
                                       std::to_string(config.rx_count));
    }
    if (!std::isfinite(p.path_length_m) || !std::isfinite(p.path_rate_mps) || !std::isfinite(p.amplitude)) {
      fail(ErrorKind::kValidation, "non-finite scatter path");
    }
    for (std::size_t m = 0; m < chirps; ++m) {
      const double d_m = p.path_length_m + p.path_rate_mps * (static_cast<double>(m) - centre) * config.chirp_interval_s;
      // Phasor recurrence over fast time; plain doubles avoid the NaN-checking
      // complex multiply.
      double wr = p.amplitude * std::cos(k_carrier * d_m);
      double wi = p.amplitude * std::sin(k_carrier * d_m);
      const double sr = std::cos(k_beat * d_m);
      const double si = std::sin(k_beat * d_m);
      auto* out = reinterpret_cast<double*>(cube.samples.row(p.rx_index, m).data());
      for (std::size_t n = 0; n < n_samples; ++n) {
        out[2 * n] += wr;
        out[2 * n + 1] += wi;
        const double nr = wr * sr - wi * si;
        wi = wr * si + wi * sr;
        wr = nr;
      }
    }
  }
  return cube;
}

IfCube noiseCube(const RadarConfig& config, std::size_t frame_index, double sigma, std::uint64_t seed) {
  IfCube cube(config, frame_index);
  const double scale = sigma * std::numbers::sqrt2 / 2.0;
  std::size_t flat = 0;
  for (Complex& c : cube.samples.data()) {
    const auto pair = rng::normalPair(rng::hashKey({seed, frame_index, flat++}));
    c = Complex(scale * pair.a, scale * pair.b);
  }
  return cube;
}

IfCube addNoise(const IfCube& cube, double snr_db, std::uint64_t seed) {
  if (snr_db == std::numeric_limits<double>::infinity()) return cube;
  if (!std::isfinite(snr_db)) fail(ErrorKind::kInvalidArgument, "snr_db must be finite or +inf");
  const double power = cube.meanPower();
  if (!(power > 0.0)) fail(ErrorKind::kInvalidArgument, "SNR undefined for zero signal");
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  // The flat index enumerates (rx, chirp, sample) in row-major order, so the
  // key is equivalent to (seed, frame, rx, chirp, sample).
  IfCube noise = noiseCube(cube.config, cube.frame_index, sigma, seed);
  IfCube out = cube;
  auto dst = out.samples.data();
  auto src = noise.samples.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

void writeIfCube(const std::filesystem::path& path, const IfCube& cube) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(kCubeMagic, 4);
  put(out, static_cast<std::uint32_t>(cube.samples.outer()));
  put(out, static_cast<std::uint32_t>(cube.samples.middle()));
  put(out, static_cast<std::uint32_t>(cube.samples.inner()));
  for (const Complex& c : cube.samples.data()) {
    put(out, static_cast<float>(c.real()));
    put(out, static_cast<float>(c.imag()));
  }
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

ComplexCube readIfCube(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCubeMagic, 4) != 0) fail(ErrorKind::kParse, path.string() + ": bad header");
  const auto rx = get<std::uint32_t>(in);
  const auto chirps = get<std::uint32_t>(in);
  const auto samples = get<std::uint32_t>(in);
  if (!in) fail(ErrorKind::kParse, path.string() + ": truncated header");
  ComplexCube cube(rx, chirps, samples);
  for (Complex& c : cube.data()) {
    const float re = get<float>(in);
    const float im = get<float>(in);
    c = Complex(re, im);
  }
  if (!in) fail(ErrorKind::kParse, path.string() + ": truncated body");
  return cube;
}

}  // namespace mmsim
