#include "mmsim/tokenizer.hpp"

#include "mmsim/error.hpp"
#include "mmsim/rng.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

namespace mmsim {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("tokenizer_front", kind, msg); }

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

void writeMatrix(const std::filesystem::path& path, const char (&magic)[5], std::size_t rows, std::size_t cols,
                 const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(magic, 4);
  put(out, static_cast<std::uint32_t>(rows));
  put(out, static_cast<std::uint32_t>(cols));
  for (double v : values) put(out, static_cast<float>(v));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

FeatureMatrix readMatrix(const std::filesystem::path& path, const char (&magic)[5]) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string());
  char m[4] = {};
  in.read(m, 4);
  if (!in || std::memcmp(m, magic, 4) != 0) fail(ErrorKind::kParse, path.string() + ": bad header");
  const auto rows = get<std::uint32_t>(in);
  const auto cols = get<std::uint32_t>(in);
  if (!in) fail(ErrorKind::kParse, path.string() + ": truncated header");
  const auto expected = 12 + static_cast<std::uintmax_t>(rows) * cols * 4;
  if (std::filesystem::file_size(path) != expected) fail(ErrorKind::kParse, path.string() + ": size does not match header");
  FeatureMatrix mat(rows, cols);
  for (double& v : mat.values) v = get<float>(in);
  return mat;
}

double squaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

}  // namespace

AnchorGrid buildGrid(const Aabb& bbox, std::size_t nx, std::size_t ny, std::size_t nz) {
  if (nx < 1 || ny < 1 || nz < 1) fail(ErrorKind::kInvalidArgument, "grid counts must be >= 1");
  if (!(bbox.extents().array() > 0.0).all()) fail(ErrorKind::kInvalidArgument, "grid bounding box must be positive");
  AnchorGrid grid{nx, ny, nz, bbox, {}};
  grid.anchors.reserve(nx * ny * nz);
  const Vec3 ext = bbox.extents();
  const std::size_t n[3] = {nx, ny, nz};
  auto coord = [&](int axis, std::size_t i) {
    return bbox.min[axis] + (static_cast<double>(i) + 0.5) * ext[axis] / static_cast<double>(n[axis]);
  };
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) grid.anchors.emplace_back(coord(0, i), coord(1, j), coord(2, k));
    }
  }
  return grid;
}

FeatureMatrix GroupedFeatures::flatten() const {
  FeatureMatrix m(steps, anchors * channels);
  m.values = values;
  return m;
}

GroupedFeatures group(std::span<const StoredFrame> frames, const AnchorGrid& grid, double radius, std::size_t rate) {
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "grouping radius must be > 0");
  if (frames.empty()) fail(ErrorKind::kInvalidArgument, "no frames to group");
  if (rate < 1) fail(ErrorKind::kInvalidArgument, "downsample rate must be >= 1");
  if (grid.anchors.empty()) fail(ErrorKind::kInvalidArgument, "anchor grid is empty");

  const std::size_t pad = (rate - frames.size() % rate) % rate;
  const std::size_t padded = frames.size() + pad;
  auto frameAt = [&](std::size_t i) -> const StoredFrame& { return i < pad ? frames.front() : frames[i - pad]; };

  GroupedFeatures out;
  out.steps = padded / rate;
  out.anchors = grid.size();
  out.downsample_rate = rate;
  out.source_frames = frames.size();
  out.values.assign(out.steps * out.anchors * out.channels, 0.0);

  const double r2 = radius * radius;
  std::vector<std::array<float, kFeaturesPerPoint>> hood;
  std::vector<double> vel, inten;
  for (std::size_t l = 0; l < out.steps; ++l) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const Vec3& anchor = grid.anchors[g];
      hood.clear();
      std::size_t total_points = 0;
      for (std::size_t f = l * rate; f < (l + 1) * rate; ++f) {
        const StoredFrame& frame = frameAt(f);
        total_points += frame.points.size();
        for (const auto& p : frame.points) {
          const Vec3 pos(p[0], p[1], p[2]);
          if ((pos - anchor).squaredNorm() <= r2) hood.push_back(p);
        }
      }
      if (hood.empty()) continue;
      std::sort(hood.begin(), hood.end());
      Vec3 centroid = Vec3::Zero();
      double range_sum = 0.0;
      vel.clear();
      inten.clear();
      for (const auto& p : hood) {
        centroid += Vec3(p[0], p[1], p[2]);
        range_sum += p[3];
        vel.push_back(p[4]);
        inten.push_back(p[5]);
      }
      const double n = static_cast<double>(hood.size());
      centroid /= n;
      const Moments v = moments(vel);
      const Moments in = moments(inten);
      out.at(l, g, 0) = n / static_cast<double>(std::max<std::size_t>(total_points, 1));
      out.at(l, g, 1) = centroid.x() - anchor.x();
      out.at(l, g, 2) = centroid.y() - anchor.y();
      out.at(l, g, 3) = centroid.z() - anchor.z();
      out.at(l, g, 4) = v.mean;
      out.at(l, g, 5) = v.stddev;
      out.at(l, g, 6) = in.mean;
      out.at(l, g, 7) = in.stddev;
      out.at(l, g, 8) = range_sum / n - anchor.norm();
      out.at(l, g, 9) = 1.0;
    }
  }
  return out;
}

MaskedFeatures maskTrajectories(const GroupedFeatures& features, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio < 1.0)) fail(ErrorKind::kInvalidArgument, "mask ratio must be in [0, 1)");
  const std::size_t n = features.anchors;
  // nearbyint under the default rounding mode rounds half to even.
  const auto masked_count = static_cast<std::size_t>(std::nearbyint(ratio * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng::Stream stream(rng::hashKey({seed, 0x6d61736bull}));
  for (std::size_t i = 0; i < masked_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.below(n - i));
    std::swap(order[i], order[j]);
  }
  MaskedFeatures out;
  out.plan.ratio = ratio;
  out.plan.seed = seed;
  out.plan.masked_anchors.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(masked_count));
  std::sort(out.plan.masked_anchors.begin(), out.plan.masked_anchors.end());

  std::vector<bool> hidden(n, false);
  for (std::size_t g : out.plan.masked_anchors) hidden[g] = true;
  for (std::size_t g = 0; g < n; ++g) {
    if (!hidden[g]) out.visible_anchors.push_back(g);
  }

  GroupedFeatures& vis = out.visible;
  vis = features;
  vis.anchors = out.visible_anchors.size();
  vis.values.assign(vis.steps * vis.anchors * vis.channels, 0.0);
  for (std::size_t l = 0; l < vis.steps; ++l) {
    for (std::size_t a = 0; a < vis.anchors; ++a) {
      for (std::size_t c = 0; c < vis.channels; ++c) vis.at(l, a, c) = features.at(l, out.visible_anchors[a], c);
    }
  }
  return out;
}

Codebook::Codebook(std::size_t entries, std::size_t dim, std::vector<double> values)
    : entries_(entries), dim_(dim), values_(std::move(values)) {
  if (entries_ < 1 || dim_ < 1) fail(ErrorKind::kValidation, "codebook needs K >= 1 and D >= 1");
  if (values_.size() != entries_ * dim_) fail(ErrorKind::kValidation, "codebook value count != K * D");
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorKind::kValidation, "codebook has a non-finite entry");
  }
  for (std::size_t a = 0; a < entries_; ++a) {
    for (std::size_t b = a + 1; b < entries_; ++b) {
      const auto ea = entry(a), eb = entry(b);
      bool same = true;
      for (std::size_t i = 0; i < dim_ && same; ++i) same = std::abs(ea[i] - eb[i]) <= 1e-12;
      if (same) {
        fail(ErrorKind::kValidation, "codebook entries " + std::to_string(a) + " and " + std::to_string(b) + " are duplicates");
      }
    }
  }
}

std::size_t Codebook::nearest(std::span<const double> feature) const {
  if (feature.size() != dim_) {
    fail(ErrorKind::kDimensionMismatch, "feature dim " + std::to_string(feature.size()) + " != codebook dim " +
                                            std::to_string(dim_));
  }
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < entries_; ++k) {
    const double d = squaredDistance(feature, entry(k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

Codebook randomCodebook(std::size_t entries, std::size_t dim, std::uint64_t seed) {
  std::vector<double> values(entries * dim);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = rng::normalPair(rng::hashKey({seed, 0x63626bull, i})).a;
  return Codebook(entries, dim, std::move(values));
}

TokenSequence quantize(const FeatureMatrix& features, const Codebook& codebook) {
  if (features.cols != codebook.dim()) {
    fail(ErrorKind::kDimensionMismatch, "feature dim " + std::to_string(features.cols) + " != codebook dim " +
                                            std::to_string(codebook.dim()));
  }
  TokenSequence out;
  out.ids.reserve(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) out.ids.push_back(static_cast<std::uint32_t>(codebook.nearest(features.row(i))));
  return out;
}

double chamfer(const FeatureMatrix& a, const FeatureMatrix& b, ChamferMode mode) {
  if (a.rows == 0 || b.rows == 0) fail(ErrorKind::kInvalidArgument, "chamfer distance of an empty set");
  if (a.cols != b.cols) fail(ErrorKind::kDimensionMismatch, "chamfer sets differ in dimension");
  auto one_way = [](const FeatureMatrix& from, const FeatureMatrix& to) {
    std::vector<double> best(from.rows, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < from.rows; ++i) {
      for (std::size_t j = 0; j < to.rows; ++j) best[i] = std::min(best[i], squaredDistance(from.row(i), to.row(j)));
    }
    // Sorted summation: the result is bitwise independent of row order.
    std::sort(best.begin(), best.end());
    return std::accumulate(best.begin(), best.end(), 0.0) / static_cast<double>(from.rows);
  };
  if (mode == ChamferMode::kSingleSided) return one_way(a, b);
  return 0.5 * (one_way(a, b) + one_way(b, a));
}

double embeddingMse(const FeatureMatrix& f_all, const FeatureMatrix& f_mot) {
  if (f_all.rows != f_mot.rows || f_all.cols != f_mot.cols) {
    fail(ErrorKind::kDimensionMismatch, "embedding shapes differ");
  }
  if (f_all.values.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < f_all.values.size(); ++i) {
    const double d = f_all.values[i] - f_mot.values[i];
    sum += d * d;
  }
  return sum / static_cast<double>(f_all.values.size());
}

double commitmentMetric(const FeatureMatrix& f_all, const Codebook& codebook) {
  if (f_all.cols != codebook.dim()) fail(ErrorKind::kDimensionMismatch, "feature dim != codebook dim");
  double sum = 0.0;
  for (std::size_t i = 0; i < f_all.rows; ++i) {
    const auto row = f_all.row(i);
    sum += squaredDistance(row, codebook.entry(codebook.nearest(row)));
  }
  return 2.0 * sum;
}

void writeCodebook(const std::filesystem::path& path, const Codebook& codebook) {
  writeMatrix(path, "CBK1", codebook.size(), codebook.dim(), codebook.values());
}

Codebook readCodebook(const std::filesystem::path& path) {
  FeatureMatrix m = readMatrix(path, "CBK1");
  return Codebook(m.rows, m.cols, std::move(m.values));
}

void writeFeatures(const std::filesystem::path& path, const FeatureMatrix& features) {
  writeMatrix(path, "FEA1", features.rows, features.cols, features.values);
}

FeatureMatrix readFeatures(const std::filesystem::path& path) { return readMatrix(path, "FEA1"); }

void writeTokens(const std::filesystem::path& path, const TokenSequence& tokens) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  for (std::uint32_t id : tokens.ids) out << id << "\n";
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

TokenSequence readTokens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string());
  TokenSequence t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(line, &used);
      if (used != line.size() || v > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument(line);
      t.ids.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      fail(ErrorKind::kParse, path.string() + ":" + std::to_string(lineno) + ": not a token id");
    }
  }
  return t;
}

}  // namespace mmsim
