#pragma once

// Unified text + radar vocabulary, mixed sequences, span corruption.
//
// Id layout: [0, text) text | [text, text + K) radar | som | eom | span sentinels.

#include "mmsim/tokenizer.hpp"

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace mmsim {

enum class TokenClass { kText, kRadar, kStartOfMotion, kEndOfMotion, kSpanSentinel, kInvalid };

class Vocabulary {
 public:
  static constexpr std::uint32_t kDefaultTextSize = 32768;
  static constexpr std::uint32_t kDefaultSpanSentinels = 100;

  Vocabulary(std::uint32_t text_size = kDefaultTextSize, std::uint32_t radar_size = 512,
             std::uint32_t span_sentinels = kDefaultSpanSentinels);

  std::uint32_t textSize() const noexcept { return text_size_; }
  std::uint32_t radarSize() const noexcept { return radar_size_; }
  std::uint32_t spanSentinelCount() const noexcept { return span_sentinels_; }
  std::uint32_t startOfMotion() const noexcept { return text_size_ + radar_size_; }
  std::uint32_t endOfMotion() const noexcept { return startOfMotion() + 1; }
  std::uint32_t spanSentinel(std::uint32_t i) const;
  std::uint32_t total() const noexcept { return endOfMotion() + 1 + span_sentinels_; }

  std::uint32_t radarId(std::uint32_t local) const;
  std::uint32_t radarLocal(std::uint32_t global) const;
  TokenClass classify(std::uint32_t id) const noexcept;

 private:
  std::uint32_t text_size_;
  std::uint32_t radar_size_;
  std::uint32_t span_sentinels_;
};

enum class Segment : char { kText = 'T', kRadar = 'R', kSentinel = 'S' };

struct MixedSequence {
  std::vector<std::uint32_t> ids;
  std::vector<Segment> segments;  // parallel to ids; som/eom are sentinels
};

/// [som, radar ids..., eom]. Throws if a token is >= K.
MixedSequence wrapRadar(const TokenSequence& tokens, const Vocabulary& vocab);
/// Inverse of wrapRadar; expects exactly one som ... eom block.
TokenSequence unwrapRadar(const MixedSequence& mixed, const Vocabulary& vocab);

enum class SegmentOrder { kTextFirst, kRadarFirst };

MixedSequence interleave(const std::vector<std::uint32_t>& text_ids, const TokenSequence& radar,
                         const Vocabulary& vocab, SegmentOrder order = SegmentOrder::kTextFirst);

/// Byte-level fallback: one text id per UTF-8 byte. Needs text_size >= 256.
std::vector<std::uint32_t> byteTokenize(std::string_view text, const Vocabulary& vocab);

struct SpanCorruption {
  std::vector<std::uint32_t> inputs;   // radar ids with spans replaced by sentinels
  std::vector<std::uint32_t> targets;  // [sentinel_i, span tokens]... final sentinel
};

inline constexpr double kDefaultCorruptionRatio = 0.15;
inline constexpr std::size_t kDefaultMeanSpan = 3;

/// Masks round(ratio * L) tokens in round(noise / mean_span) spans. Span and
/// gap lengths come from uniform random segmentation, so span lengths have
/// mean `mean_span`. Output ids are global. Throws when the spans plus the
/// closing sentinel exceed the vocabulary's sentinel budget.
SpanCorruption spanCorrupt(const TokenSequence& tokens, double ratio, std::size_t mean_span, std::uint64_t seed,
                           const Vocabulary& vocab);

/// Rebuilds the original radar tokens from a corruption pair.
TokenSequence spliceBack(const SpanCorruption& pair, const Vocabulary& vocab);

// Newline-delimited ids; segment maps are one tag character per line.
void writeIds(const std::filesystem::path& path, const std::vector<std::uint32_t>& ids);
std::vector<std::uint32_t> readIds(const std::filesystem::path& path);
/// Writes `<base>.ids` and `<base>.seg`.
void writeMixed(const std::filesystem::path& base, const MixedSequence& mixed);
MixedSequence readMixed(const std::filesystem::path& base);
/// Writes `<base>.inputs` and `<base>.targets`.
void writeCorruption(const std::filesystem::path& base, const SpanCorruption& pair);
SpanCorruption readCorruption(const std::filesystem::path& base);

}  // namespace mmsim
