#pragma once

// Deterministic front half of the radar tokenizer: anchor-grid grouping,
// trajectory masking, nearest-codebook quantization and the VQ metrics.

#include "mmsim/cloud_io.hpp"
#include "mmsim/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mmsim {

/// Row-major real matrix; rows are per-step feature vectors or points.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  bool operator==(const FeatureMatrix&) const = default;
};

struct AnchorGrid {
  std::size_t nx = 1, ny = 1, nz = 1;
  Aabb bbox;
  std::vector<Vec3> anchors;  // x fastest, then y, then z

  std::size_t size() const { return anchors.size(); }
};

/// Cell-centred lattice: anchor (i, j, k) sits at min + (i + 1/2) * extent / n.
AnchorGrid buildGrid(const Aabb& bbox, std::size_t nx, std::size_t ny, std::size_t nz);

/// Handcrafted neighbourhood statistics per (token step, anchor):
///   0 point count / (rate * 128)     5 velocity std
///   1-3 centroid - anchor (x, y, z)  6 mean intensity_db
///   4 mean velocity                  7 intensity std
///   8 mean range - |anchor|          9 occupancy (1 if any point)
inline constexpr std::size_t kGroupChannels = 10;

/// Values indexed [step][anchor][channel].
struct GroupedFeatures {
  std::size_t steps = 0;
  std::size_t anchors = 0;
  std::size_t channels = kGroupChannels;
  std::size_t downsample_rate = 4;
  std::size_t source_frames = 0;
  std::vector<double> values;

  double& at(std::size_t l, std::size_t g, std::size_t c) { return values[(l * anchors + g) * channels + c]; }
  double at(std::size_t l, std::size_t g, std::size_t c) const { return values[(l * anchors + g) * channels + c]; }
  /// One row per step, anchors * channels columns.
  FeatureMatrix flatten() const;
};

/// Temporal stride 2 x token unit 2.
inline constexpr std::size_t kDefaultDownsampleRate = 4;

/// Each token step consumes `rate` consecutive frames. When the frame count is
/// not a multiple of `rate`, the first frame is repeated at the front.
/// Neighbourhood points are sorted before accumulation, so features do not
/// depend on point order within a frame.
GroupedFeatures group(std::span<const StoredFrame> frames, const AnchorGrid& grid, double radius,
                      std::size_t rate = kDefaultDownsampleRate);

struct MaskPlan {
  std::vector<std::size_t> masked_anchors;  // ascending
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

struct MaskedFeatures {
  GroupedFeatures visible;  // anchors = N_g - |masked|
  std::vector<std::size_t> visible_anchors;
  MaskPlan plan;
};

/// Masks round(ratio * N_g) whole anchor trajectories (ties to even), chosen
/// uniformly at random from `seed`; the same anchors are hidden at every step.
MaskedFeatures maskTrajectories(const GroupedFeatures& features, double ratio, std::uint64_t seed);

/// K entries of dimension D. Construction rejects non-finite entries and
/// pairs closer than 1e-12 in every coordinate.
class Codebook {
 public:
  Codebook(std::size_t entries, std::size_t dim, std::vector<double> values);

  std::size_t size() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> entry(std::size_t k) const { return {values_.data() + k * dim_, dim_}; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Index of the L2-nearest entry; the lowest index wins exact ties.
  std::size_t nearest(std::span<const double> feature) const;

 private:
  std::size_t entries_;
  std::size_t dim_;
  std::vector<double> values_;
};

inline constexpr std::size_t kDefaultCodebookSize = 512;
inline constexpr std::size_t kDefaultCodebookDim = 512;

/// Standard-normal entries keyed by seed (for tests and codebook-less runs).
Codebook randomCodebook(std::size_t entries, std::size_t dim, std::uint64_t seed);

struct TokenSequence {
  std::vector<std::uint32_t> ids;
  bool operator==(const TokenSequence&) const = default;
};

TokenSequence quantize(const FeatureMatrix& features, const Codebook& codebook);

enum class ChamferMode { kSingleSided, kSymmetric };

/// Mean over A of the squared distance to the nearest point of B; the
/// symmetric form averages both directions.
double chamfer(const FeatureMatrix& a, const FeatureMatrix& b, ChamferMode mode = ChamferMode::kSingleSided);

/// Mean squared elementwise difference.
double embeddingMse(const FeatureMatrix& f_all, const FeatureMatrix& f_mot);

/// Both commitment terms evaluated forward: with z the nearest entry of each
/// row, returns 2 * sum ||f - z||^2 (the stop-gradient only matters in training).
double commitmentMetric(const FeatureMatrix& f_all, const Codebook& codebook);

// "CBK1": magic, u32 K, u32 D, K*D float32. "FEA1": magic, u32 L, u32 D, L*D float32.
void writeCodebook(const std::filesystem::path& path, const Codebook& codebook);
Codebook readCodebook(const std::filesystem::path& path);
void writeFeatures(const std::filesystem::path& path, const FeatureMatrix& features);
FeatureMatrix readFeatures(const std::filesystem::path& path);

/// Newline-delimited integers.
void writeTokens(const std::filesystem::path& path, const TokenSequence& tokens);
TokenSequence readTokens(const std::filesystem::path& path);

}  // namespace mmsim
