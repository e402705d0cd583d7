#include "mmsim/radar_config.hpp"

#include "mmsim/error.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mmsim {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("fmcw_config", kind, msg); }

bool isPowerOfTwo(std::uint32_t n) { return n != 0 && std::has_single_bit(n); }

double parseDouble(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::kParse, "key " + key + ": cannot parse '" + text + "' as a number");
  }
}

template <typename Int>
Int parseInt(const std::string& key, const std::string& text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(ErrorKind::kParse, "key " + key + ": cannot parse '" + text + "' as an unsigned integer");
  }
  return v;
}

std::string scalarText(const std::string& key, const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v.get<double>();
    return ss.str();
  }
  fail(ErrorKind::kParse, "key " + key + ": expected a number");
}

// Every field, in canonical order. `set` parses text into the field.
struct Field {
  const char* name;
  void (*set)(RadarConfig&, const std::string&);
  ordered_json (*get)(const RadarConfig&);
};

ordered_json doubleJson(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

#define MMSIM_DOUBLE_FIELD(name)                                                              \
  Field {                                                                                     \
    #name, [](RadarConfig& c, const std::string& s) { c.name = parseDouble(#name, s); },      \
        [](const RadarConfig& c) { return doubleJson(c.name); }                               \
  }
#define MMSIM_INT_FIELD(name)                                                                            \
  Field {                                                                                                \
    #name, [](RadarConfig& c, const std::string& s) { c.name = parseInt<decltype(c.name)>(#name, s); }, \
        [](const RadarConfig& c) { return ordered_json(c.name); }                                        \
  }

const Field kFields[] = {
    MMSIM_DOUBLE_FIELD(carrier_hz),      MMSIM_DOUBLE_FIELD(swept_bandwidth_hz), MMSIM_DOUBLE_FIELD(sampled_bandwidth_hz),
    MMSIM_DOUBLE_FIELD(chirp_interval_s), MMSIM_INT_FIELD(samples_per_chirp),    MMSIM_INT_FIELD(chirps_per_frame),
    MMSIM_DOUBLE_FIELD(frame_rate_hz),   MMSIM_INT_FIELD(tx_count),              MMSIM_INT_FIELD(rx_count),
    MMSIM_DOUBLE_FIELD(rx_spacing_m),    MMSIM_DOUBLE_FIELD(snr_db),             MMSIM_INT_FIELD(rng_seed),
};

#undef MMSIM_DOUBLE_FIELD
#undef MMSIM_INT_FIELD

const Field* findField(std::string_view key) {
  for (const Field& f : kFields) {
    if (key == f.name) return &f;
  }
  return nullptr;
}

}  // namespace

void RadarConfig::validate() const {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!finite_pos(carrier_hz)) fail(ErrorKind::kValidation, "carrier_hz must be > 0");
  if (!finite_pos(sampled_bandwidth_hz) || !(sampled_bandwidth_hz <= swept_bandwidth_hz) ||
      !std::isfinite(swept_bandwidth_hz)) {
    fail(ErrorKind::kValidation, "need 0 < sampled_bandwidth_hz <= swept_bandwidth_hz");
  }
  if (!finite_pos(chirp_interval_s)) fail(ErrorKind::kValidation, "chirp_interval_s must be > 0");
  if (samples_per_chirp < 2 || !isPowerOfTwo(samples_per_chirp)) {
    fail(ErrorKind::kValidation, "samples_per_chirp must be a power of two >= 2");
  }
  if (chirps_per_frame < 2 || !isPowerOfTwo(chirps_per_frame)) {
    fail(ErrorKind::kValidation, "chirps_per_frame must be a power of two >= 2");
  }
  if (!finite_pos(frame_rate_hz)) fail(ErrorKind::kValidation, "frame_rate_hz must be > 0");
  if (chirp_interval_s * chirps_per_frame > 1.0 / frame_rate_hz) {
    fail(ErrorKind::kValidation, "chirps do not fit in one frame period");
  }
  if (tx_count < 1) fail(ErrorKind::kValidation, "tx_count must be >= 1");
  if (rx_count < 1) fail(ErrorKind::kValidation, "rx_count must be >= 1");
  if (!finite_pos(rx_spacing_m)) fail(ErrorKind::kValidation, "rx_spacing_m must be > 0");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    fail(ErrorKind::kValidation, "snr_db must be a number or +inf");
  }
}

RadarConfig defaultConfig() { return RadarConfig{}; }

DerivedParams derive(const RadarConfig& config) {
  DerivedParams d;
  d.wavelength_m = kSpeedOfLight / config.carrier_hz;
  d.range_resolution_m = kSpeedOfLight / (2.0 * config.sampled_bandwidth_hz);
  d.max_range_m = config.samples_per_chirp * d.range_resolution_m;
  d.velocity_resolution_mps = d.wavelength_m / (2.0 * config.chirps_per_frame * config.chirp_interval_s);
  d.max_velocity_mps = (config.chirps_per_frame / 2) * d.velocity_resolution_mps;
  return d;
}

RadarConfig parseConfig(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::kParse, "config must be a key/value object");
  RadarConfig config;
  std::size_t seen = 0;
  for (const auto& [key, value] : doc.items()) {
    const Field* f = findField(key);
    if (!f) fail(ErrorKind::kParse, "unknown config key '" + key + "'");
    f->set(config, scalarText(key, value));
    ++seen;
  }
  if (seen != std::size(kFields)) {
    for (const Field& f : kFields) {
      if (!doc.contains(f.name)) fail(ErrorKind::kParse, std::string("missing config key '") + f.name + "'");
    }
  }
  config.validate();
  return config;
}

RadarConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "config not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

std::string toJson(const RadarConfig& config) {
  ordered_json doc = ordered_json::object();
  for (const Field& f : kFields) doc[f.name] = f.get(config);
  return doc.dump(2);
}

void applyOverride(RadarConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) fail(ErrorKind::kParse, "override must be key=value: " + std::string(assignment));
  const std::string key(assignment.substr(0, eq));
  const Field* f = findField(key);
  if (!f) fail(ErrorKind::kParse, "unknown config key '" + key + "'");
  f->set(config, std::string(assignment.substr(eq + 1)));
}

std::uint64_t configHash(const RadarConfig& config) {
  // Hash the compact canonical form so whitespace in stored files is irrelevant.
  ordered_json doc = ordered_json::object();
  for (const Field& f : kFields) doc[f.name] = f.get(config);
  const std::string canonical = doc.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace mmsim
