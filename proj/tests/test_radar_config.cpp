#include "mmsim/error.hpp"
#include "mmsim/radar_config.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

using namespace mmsim;

TEST(RadarConfig, DefaultsMatchHardware) {
  const RadarConfig c = defaultConfig();
  EXPECT_EQ(c.carrier_hz, 77e9);
  EXPECT_EQ(c.swept_bandwidth_hz, 3.9e9);
  EXPECT_EQ(c.samples_per_chirp, 256u);
  EXPECT_EQ(c.chirps_per_frame, 128u);
  EXPECT_EQ(c.frame_rate_hz, 10.0);
  EXPECT_EQ(c.tx_count, 3u);
  EXPECT_EQ(c.rx_count, 4u);
  EXPECT_NO_THROW(c.validate());
}

TEST(RadarConfig, DerivedAgainstHandFormulas) {
  const RadarConfig c = defaultConfig();
  const DerivedParams d = derive(c);
  const double lambda = 299792458.0 / 77e9;
  EXPECT_NEAR(d.wavelength_m * 1e3, 3.894, 1e-3);
  EXPECT_NEAR(d.range_resolution_m, 299792458.0 / (2 * 3.488e9), 1e-15);
  EXPECT_NEAR(d.range_resolution_m, 0.042975, 5e-6);
  EXPECT_NEAR(d.velocity_resolution_mps, lambda / (2 * 128 * 214.3e-6), 1e-15);
  EXPECT_NEAR(d.velocity_resolution_mps, 0.0710, 5e-5);
  EXPECT_NEAR(d.max_velocity_mps, lambda / (4 * 214.3e-6), 1e-12);
  EXPECT_NEAR(d.max_velocity_mps, 4.54, 5e-3);
  EXPECT_NEAR(d.max_range_m, 11.0, 0.01);
}

TEST(RadarConfig, InternalConsistencyExact) {
  for (std::uint32_t n : {16u, 64u, 512u}) {
    for (std::uint32_t m : {2u, 32u, 256u}) {
      RadarConfig c = defaultConfig();
      c.samples_per_chirp = n;
      c.chirps_per_frame = m;
      c.chirp_interval_s = 1.0 / (c.frame_rate_hz * m);
      const DerivedParams d = derive(c);
      EXPECT_EQ(d.max_range_m, n * d.range_resolution_m);
      EXPECT_EQ(d.max_velocity_mps, (m / 2) * d.velocity_resolution_mps);
    }
  }
}

TEST(RadarConfig, DeriveIsPure) {
  const DerivedParams a = derive(defaultConfig());
  const DerivedParams b = derive(defaultConfig());
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(RadarConfig, ValidationRejectsEachInvariant) {
  auto bad = [](auto mutate) {
    RadarConfig c = defaultConfig();
    mutate(c);
    EXPECT_THROW(c.validate(), Error);
  };
  bad([](RadarConfig& c) { c.carrier_hz = 0; });
  bad([](RadarConfig& c) { c.sampled_bandwidth_hz = 4e9; });
  bad([](RadarConfig& c) { c.sampled_bandwidth_hz = 0; });
  bad([](RadarConfig& c) { c.samples_per_chirp = 100; });
  bad([](RadarConfig& c) { c.samples_per_chirp = 1; });
  bad([](RadarConfig& c) { c.chirps_per_frame = 96; });
  bad([](RadarConfig& c) { c.chirp_interval_s = 1e-3; });
  bad([](RadarConfig& c) { c.rx_spacing_m = -1; });
  bad([](RadarConfig& c) { c.snr_db = std::nan(""); });
}

TEST(RadarConfig, JsonRoundTripAndHash) {
  RadarConfig c = defaultConfig();
  c.snr_db = std::numeric_limits<double>::infinity();
  c.rng_seed = 0xfeedfacecafebeefull;
  const RadarConfig back = parseConfig(toJson(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(configHash(back), configHash(c));
  RadarConfig other = c;
  other.snr_db = 10;
  EXPECT_NE(configHash(other), configHash(c));
}

TEST(RadarConfig, RejectsUnknownAndMissingKeys) {
  std::string text = toJson(defaultConfig());
  const auto pos = text.find('{');
  std::string unknown = text;
  unknown.insert(pos + 1, "\"bogus\": 1,");
  EXPECT_THROW(parseConfig(unknown), Error);
  EXPECT_THROW(parseConfig(R"({"carrier_hz": 77e9})"), Error);
  EXPECT_THROW(parseConfig("not json"), Error);
}

TEST(RadarConfig, Overrides) {
  RadarConfig c = defaultConfig();
  applyOverride(c, "snr_db=5");
  applyOverride(c, "rx_count=8");
  applyOverride(c, "snr_db=inf");
  EXPECT_TRUE(std::isinf(c.snr_db));
  EXPECT_EQ(c.rx_count, 8u);
  EXPECT_THROW(applyOverride(c, "nope=1"), Error);
  EXPECT_THROW(applyOverride(c, "rx_count=-3"), Error);
  EXPECT_THROW(applyOverride(c, "rx_count"), Error);
}

TEST(RadarConfig, MissingFileIsNotFound) {
  try {
    loadConfig("/nonexistent/cfg.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotFound);
    EXPECT_NE(std::string(e.what()).find("config not found"), std::string::npos);
  }
}

TEST(RadarConfig, LoadFromFile) {
  test::TempDir dir;
  RadarConfig c = defaultConfig();
  c.frame_rate_hz = 20;
  c.chirps_per_frame = 64;
  std::ofstream(dir / "c.json") << toJson(c);
  EXPECT_EQ(loadConfig(dir / "c.json"), c);
}
