#include "mmsim/error.hpp"
#include "mmsim/if_synth.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mmsim;

namespace {

ScatterPath path(double d, double rate = 0.0, std::uint32_t rx = 0, double amp = 1.0) {
  return ScatterPath{rx, d, rate, amp};
}

// Independent evaluation of the beat-signal model at one sample.
Complex modelSample(const std::vector<ScatterPath>& paths, const RadarConfig& c, std::size_t rx, std::size_t m,
                    std::size_t n) {
  Complex acc{0, 0};
  for (const auto& p : paths) {
    if (p.rx_index != rx) continue;
    const double dm = p.path_length_m + p.path_rate_mps * (double(m) - c.chirps_per_frame / 2.0) * c.chirp_interval_s;
    const double phase = 2 * std::numbers::pi / kSpeedOfLight * dm *
                         (c.sampled_bandwidth_hz * double(n) / c.samples_per_chirp + c.carrier_hz);
    acc += p.amplitude * std::polar(1.0, phase);
  }
  return acc;
}

std::size_t dominantBin(std::span<const Complex> row) {
  // Naive DFT oracle.
  const std::size_t n = row.size();
  std::size_t best = 0;
  double best_mag = -1;
  for (std::size_t k = 0; k < n; ++k) {
    Complex s{0, 0};
    for (std::size_t i = 0; i < n; ++i) s += row[i] * std::polar(1.0, -2 * std::numbers::pi * double(k * i % n) / n);
    if (std::abs(s) > best_mag) {
      best_mag = std::abs(s);
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST(IfSynth, EmptyPathsGiveZeroCube) {
  const IfCube c = synthesizeIf({}, defaultConfig());
  EXPECT_EQ(c.samples.outer(), 4u);
  EXPECT_EQ(c.samples.middle(), 128u);
  EXPECT_EQ(c.samples.inner(), 256u);
  for (const auto& v : c.samples.data()) EXPECT_EQ(v, Complex(0, 0));
}

TEST(IfSynth, MatchesModelPointwise) {
  const RadarConfig cfg = defaultConfig();
  const std::vector<ScatterPath> paths = {path(6.0, 0.7, 0, 0.5), path(4.1, -1.9, 0, 0.25), path(7.3, 0.1, 2, 1.0)};
  const IfCube c = synthesizeIf(paths, cfg);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const std::size_t rx = rng() % 4, m = rng() % 128, n = rng() % 256;
    const Complex want = modelSample(paths, cfg, rx, m, n);
    EXPECT_NEAR(std::abs(c.samples(rx, m, n) - want), 0.0, 1e-9) << rx << " " << m << " " << n;
  }
}

TEST(IfSynth, StaticPathAtSixMetresLandsInBin70) {
  const RadarConfig cfg = defaultConfig();
  const IfCube c = synthesizeIf(std::vector{path(6.0)}, cfg);
  EXPECT_EQ(dominantBin(c.samples.row(0, 0)), 70u);
  EXPECT_EQ(dominantBin(c.samples.row(0, 77)), 70u);
}

TEST(IfSynth, DoublingPathDoublesBeatBin) {
  const RadarConfig cfg = defaultConfig();
  const double res = derive(cfg).range_resolution_m;
  for (int bin : {10, 25, 40, 63}) {
    const double d = 2 * bin * res;
    const IfCube a = synthesizeIf(std::vector{path(d)}, cfg);
    const IfCube b = synthesizeIf(std::vector{path(2 * d)}, cfg);
    EXPECT_EQ(dominantBin(a.samples.row(0, 0)), std::size_t(bin));
    EXPECT_EQ(dominantBin(b.samples.row(0, 0)), std::size_t(2 * bin));
  }
}

TEST(IfSynth, ChirpToChirpPhaseAdvance) {
  const RadarConfig cfg = defaultConfig();
  const IfCube c = synthesizeIf(std::vector{path(6.0, 2.0)}, cfg);
  const double lambda = kSpeedOfLight / cfg.carrier_hz;
  const double want = std::remainder(2 * std::numbers::pi / lambda * 2.0 * cfg.chirp_interval_s, 2 * std::numbers::pi);
  for (std::size_t m = 0; m + 1 < 128; m += 9) {
    const double got = std::arg(c.samples(0, m + 1, 0) * std::conj(c.samples(0, m, 0)));
    EXPECT_NEAR(got, want, 1e-9);
  }
}

TEST(IfSynth, Linearity) {
  const RadarConfig cfg = defaultConfig();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<ScatterPath> a, b;
  for (int i = 0; i < 20; ++i) a.push_back(path(1 + 15 * u(rng), 8 * u(rng) - 4, rng() % 4, u(rng)));
  for (int i = 0; i < 20; ++i) b.push_back(path(1 + 15 * u(rng), 8 * u(rng) - 4, rng() % 4, u(rng)));
  std::vector<ScatterPath> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const IfCube ca = synthesizeIf(a, cfg), cb = synthesizeIf(b, cfg), cab = synthesizeIf(ab, cfg);
  double scale = 0;
  for (const auto& v : cab.samples.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < cab.samples.size(); ++i) {
    EXPECT_LE(std::abs(cab.samples.data()[i] - ca.samples.data()[i] - cb.samples.data()[i]), 1e-9 * scale);
  }
}

TEST(IfSynth, RejectsBadRx) {
  EXPECT_THROW(synthesizeIf(std::vector{path(3.0, 0, 4)}, defaultConfig()), Error);
}

TEST(IfSynth, InfiniteSnrIsExactCopy) {
  const IfCube c = synthesizeIf(std::vector{path(6.0)}, defaultConfig());
  const IfCube n = addNoise(c, std::numeric_limits<double>::infinity(), 1);
  EXPECT_TRUE(n.samples == c.samples);
}

TEST(IfSynth, ZeroSignalSnrUndefined) {
  const IfCube c = synthesizeIf({}, defaultConfig());
  try {
    addNoise(c, 20, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("SNR undefined for zero signal"), std::string::npos);
  }
}

TEST(IfSynth, UnitToneNoisePower) {
  // Unit-power tone over 10^6 samples: noise power 0.01 within 5%.
  RadarConfig cfg = defaultConfig();
  cfg.rx_count = 4;
  cfg.chirps_per_frame = 1024;
  cfg.chirp_interval_s = 1.0 / (cfg.frame_rate_hz * 1024);
  std::vector<ScatterPath> paths;
  for (std::uint32_t rx = 0; rx < 4; ++rx) paths.push_back(path(6.0, 0.3, rx));
  const IfCube c = synthesizeIf(paths, cfg);
  ASSERT_GE(c.samples.size(), 1'000'000u);
  EXPECT_NEAR(c.meanPower(), 1.0, 1e-12);
  const IfCube n = addNoise(c, 20, 8);
  double noise = 0, re = 0, im = 0;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const Complex e = n.samples.data()[i] - c.samples.data()[i];
    noise += std::norm(e);
    re += e.real() * e.real();
    im += e.imag() * e.imag();
  }
  noise /= c.samples.size();
  EXPECT_NEAR(noise, 0.01, 0.01 * 0.05);
  EXPECT_NEAR(re / im, 1.0, 0.02);
}

TEST(IfSynth, NoiseDeterministicAndKeyed) {
  const IfCube c = synthesizeIf(std::vector{path(6.0)}, defaultConfig(), 3);
  EXPECT_TRUE(addNoise(c, 10, 5).samples == addNoise(c, 10, 5).samples);
  EXPECT_FALSE(addNoise(c, 10, 5).samples == addNoise(c, 10, 6).samples);
  const IfCube other = synthesizeIf(std::vector{path(6.0)}, defaultConfig(), 4);
  // Different frames draw different noise.
  const IfCube a = addNoise(c, 10, 5), b = addNoise(other, 10, 5);
  EXPECT_NE(a.samples(0, 0, 0), b.samples(0, 0, 0));
}

TEST(IfSynth, CubeFileRoundTrip) {
  test::TempDir dir;
  const IfCube c = addNoise(synthesizeIf(std::vector{path(6.0, 1.0, 1)}, defaultConfig()), 10, 1);
  writeIfCube(dir / "c.ifc", c);
  const ComplexCube back = readIfCube(dir / "c.ifc");
  ASSERT_EQ(back.size(), c.samples.size());
  EXPECT_EQ(std::filesystem::file_size(dir / "c.ifc"), 16 + 8 * c.samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    ASSERT_EQ(back.data()[i].real(), static_cast<float>(c.samples.data()[i].real())) << i;
    ASSERT_EQ(back.data()[i].imag(), static_cast<float>(c.samples.data()[i].imag())) << i;
  }
}
