#include "mmsim/vocab.hpp"

#include "mmsim/error.hpp"
#include "mmsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace mmsim {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("vocab_stream", kind, msg); }

std::filesystem::path withSuffix(const std::filesystem::path& base, const char* suffix) {
  return std::filesystem::path(base.string() + suffix);
}

// Splits n items into k non-empty runs uniformly over all compositions.
std::vector<std::size_t> randomSegmentation(std::size_t n, std::size_t k, rng::Stream& stream) {
  std::vector<std::size_t> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.below(cuts.size() - i));
    std::swap(cuts[i], cuts[j]);
  }
  cuts.resize(k - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::size_t> lengths;
  std::size_t prev = 0;
  for (std::size_t c : cuts) {
    lengths.push_back(c - prev);
    prev = c;
  }
  lengths.push_back(n - prev);
  return lengths;
}

}  // namespace

Vocabulary::Vocabulary(std::uint32_t text_size, std::uint32_t radar_size, std::uint32_t span_sentinels)
    : text_size_(text_size), radar_size_(radar_size), span_sentinels_(span_sentinels) {
  if (text_size_ < 1 || radar_size_ < 1) fail(ErrorKind::kInvalidArgument, "text and radar vocabulary sizes must be >= 1");
  const std::uint64_t total = std::uint64_t{text_size_} + radar_size_ + 2 + span_sentinels_;
  if (total > std::numeric_limits<std::uint32_t>::max()) fail(ErrorKind::kInvalidArgument, "vocabulary too large");
}

std::uint32_t Vocabulary::spanSentinel(std::uint32_t i) const {
  if (i >= span_sentinels_) fail(ErrorKind::kOutOfRange, "span sentinel " + std::to_string(i) + " outside budget");
  return endOfMotion() + 1 + i;
}

std::uint32_t Vocabulary::radarId(std::uint32_t local) const {
  if (local >= radar_size_) fail(ErrorKind::kOutOfRange, "radar token " + std::to_string(local) + " >= K");
  return text_size_ + local;
}

std::uint32_t Vocabulary::radarLocal(std::uint32_t global) const {
  if (classify(global) != TokenClass::kRadar) fail(ErrorKind::kOutOfRange, "id " + std::to_string(global) + " is not a radar token");
  return global - text_size_;
}

TokenClass Vocabulary::classify(std::uint32_t id) const noexcept {
  if (id < text_size_) return TokenClass::kText;
  if (id < startOfMotion()) return TokenClass::kRadar;
  if (id == startOfMotion()) return TokenClass::kStartOfMotion;
  if (id == endOfMotion()) return TokenClass::kEndOfMotion;
  if (id < total()) return TokenClass::kSpanSentinel;
  return TokenClass::kInvalid;
}

MixedSequence wrapRadar(const TokenSequence& tokens, const Vocabulary& vocab) {
  MixedSequence out;
  out.ids.reserve(tokens.ids.size() + 2);
  out.ids.push_back(vocab.startOfMotion());
  out.segments.push_back(Segment::kSentinel);
  for (std::uint32_t t : tokens.ids) {
    out.ids.push_back(vocab.radarId(t));
    out.segments.push_back(Segment::kRadar);
  }
  out.ids.push_back(vocab.endOfMotion());
  out.segments.push_back(Segment::kSentinel);
  return out;
}

TokenSequence unwrapRadar(const MixedSequence& mixed, const Vocabulary& vocab) {
  const auto som = std::find(mixed.ids.begin(), mixed.ids.end(), vocab.startOfMotion());
  if (som == mixed.ids.end()) fail(ErrorKind::kParse, "no start-of-motion token");
  const auto eom = std::find(som, mixed.ids.end(), vocab.endOfMotion());
  if (eom == mixed.ids.end()) fail(ErrorKind::kParse, "no end-of-motion token");
  TokenSequence out;
  for (auto it = som + 1; it != eom; ++it) out.ids.push_back(vocab.radarLocal(*it));
  return out;
}

MixedSequence interleave(const std::vector<std::uint32_t>& text_ids, const TokenSequence& radar,
                         const Vocabulary& vocab, SegmentOrder order) {
  for (std::size_t i = 0; i < text_ids.size(); ++i) {
    if (vocab.classify(text_ids[i]) != TokenClass::kText) {
      fail(ErrorKind::kOutOfRange, "text position " + std::to_string(i) + ": id " + std::to_string(text_ids[i]) +
                                       " is not a text token");
    }
  }
  for (std::size_t i = 0; i < radar.ids.size(); ++i) {
    if (radar.ids[i] >= vocab.radarSize()) {
      fail(ErrorKind::kOutOfRange, "radar position " + std::to_string(i) + ": token " + std::to_string(radar.ids[i]) +
                                       " >= K");
    }
  }
  const MixedSequence wrapped = wrapRadar(radar, vocab);
  MixedSequence out;
  auto append_text = [&] {
    out.ids.insert(out.ids.end(), text_ids.begin(), text_ids.end());
    out.segments.insert(out.segments.end(), text_ids.size(), Segment::kText);
  };
  auto append_radar = [&] {
    out.ids.insert(out.ids.end(), wrapped.ids.begin(), wrapped.ids.end());
    out.segments.insert(out.segments.end(), wrapped.segments.begin(), wrapped.segments.end());
  };
  if (order == SegmentOrder::kTextFirst) {
    append_text();
    append_radar();
  } else {
    append_radar();
    append_text();
  }
  return out;
}

std::vector<std::uint32_t> byteTokenize(std::string_view text, const Vocabulary& vocab) {
  if (vocab.textSize() < 256) fail(ErrorKind::kInvalidArgument, "byte tokenizer needs a text range of at least 256 ids");
  std::vector<std::uint32_t> ids;
  ids.reserve(text.size());
  for (unsigned char c : text) ids.push_back(c);
  return ids;
}

SpanCorruption spanCorrupt(const TokenSequence& tokens, double ratio, std::size_t mean_span, std::uint64_t seed,
                           const Vocabulary& vocab) {
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorKind::kInvalidArgument, "corruption ratio must be in (0, 1)");
  if (mean_span < 1) fail(ErrorKind::kInvalidArgument, "mean span must be >= 1");
  const std::size_t length = tokens.ids.size();
  if (length < 1) fail(ErrorKind::kInvalidArgument, "cannot corrupt an empty sequence");

  SpanCorruption out;
  std::vector<std::uint32_t> global;
  global.reserve(length);
  for (std::uint32_t t : tokens.ids) global.push_back(vocab.radarId(t));

  auto noise = static_cast<std::size_t>(std::nearbyint(ratio * static_cast<double>(length)));
  noise = std::min(noise, length - 1);
  if (noise == 0) {
    out.inputs = std::move(global);
    return out;
  }
  std::size_t spans = static_cast<std::size_t>(std::nearbyint(static_cast<double>(noise) / static_cast<double>(mean_span)));
  spans = std::clamp<std::size_t>(spans, 1, std::min(noise, length - noise));
  if (spans + 1 > vocab.spanSentinelCount()) {
    fail(ErrorKind::kOutOfRange, "span sentinel budget exhausted: need " + std::to_string(spans + 1) + ", have " +
                                     std::to_string(vocab.spanSentinelCount()) + "; use a larger sentinel budget");
  }

  rng::Stream stream(rng::hashKey({seed, 0x7370616eull, length}));
  const auto noise_runs = randomSegmentation(noise, spans, stream);
  const auto keep_runs = randomSegmentation(length - noise, spans, stream);

  // Each keep run precedes one noise run, so the sequence never starts masked.
  std::size_t pos = 0;
  for (std::size_t s = 0; s < spans; ++s) {
    out.inputs.insert(out.inputs.end(), global.begin() + pos, global.begin() + pos + keep_runs[s]);
    pos += keep_runs[s];
    const std::uint32_t sentinel = vocab.spanSentinel(static_cast<std::uint32_t>(s));
    out.inputs.push_back(sentinel);
    out.targets.push_back(sentinel);
    out.targets.insert(out.targets.end(), global.begin() + pos, global.begin() + pos + noise_runs[s]);
    pos += noise_runs[s];
  }
  out.targets.push_back(vocab.spanSentinel(static_cast<std::uint32_t>(spans)));
  return out;
}

TokenSequence spliceBack(const SpanCorruption& pair, const Vocabulary& vocab) {
  // Index the target stream: sentinel -> [begin, end) of its span tokens.
  std::vector<std::pair<std::size_t, std::size_t>> spans(vocab.spanSentinelCount(), {0, 0});
  std::vector<bool> seen(vocab.spanSentinelCount(), false);
  for (std::size_t i = 0; i < pair.targets.size();) {
    const std::uint32_t id = pair.targets[i];
    if (vocab.classify(id) != TokenClass::kSpanSentinel) fail(ErrorKind::kParse, "target stream does not start a span with a sentinel");
    const std::uint32_t s = id - vocab.spanSentinel(0);
    std::size_t j = i + 1;
    while (j < pair.targets.size() && vocab.classify(pair.targets[j]) != TokenClass::kSpanSentinel) ++j;
    spans[s] = {i + 1, j};
    seen[s] = true;
    i = j;
  }
  TokenSequence out;
  for (std::uint32_t id : pair.inputs) {
    const TokenClass c = vocab.classify(id);
    if (c == TokenClass::kRadar) {
      out.ids.push_back(vocab.radarLocal(id));
    } else if (c == TokenClass::kSpanSentinel) {
      const std::uint32_t s = id - vocab.spanSentinel(0);
      if (!seen[s]) fail(ErrorKind::kParse, "sentinel " + std::to_string(id) + " has no target span");
      for (std::size_t k = spans[s].first; k < spans[s].second; ++k) out.ids.push_back(vocab.radarLocal(pair.targets[k]));
    } else {
      fail(ErrorKind::kParse, "unexpected id " + std::to_string(id) + " in corrupted radar stream");
    }
  }
  return out;
}

void writeIds(const std::filesystem::path& path, const std::vector<std::uint32_t>& ids) {
  writeTokens(path, TokenSequence{ids});
}

std::vector<std::uint32_t> readIds(const std::filesystem::path& path) { return readTokens(path).ids; }

void writeMixed(const std::filesystem::path& base, const MixedSequence& mixed) {
  if (mixed.ids.size() != mixed.segments.size()) fail(ErrorKind::kValidation, "segment map length != id count");
  writeIds(withSuffix(base, ".ids"), mixed.ids);
  std::ofstream seg(withSuffix(base, ".seg"));
  if (!seg) fail(ErrorKind::kIo, "cannot write segment map for " + base.string());
  for (Segment s : mixed.segments) seg << static_cast<char>(s) << "\n";
}

MixedSequence readMixed(const std::filesystem::path& base) {
  MixedSequence out;
  out.ids = readIds(withSuffix(base, ".ids"));
  std::ifstream seg(withSuffix(base, ".seg"));
  if (!seg) fail(ErrorKind::kNotFound, "cannot open segment map for " + base.string());
  std::string line;
  while (std::getline(seg, line)) {
    if (line == "T") out.segments.push_back(Segment::kText);
    else if (line == "R") out.segments.push_back(Segment::kRadar);
    else if (line == "S") out.segments.push_back(Segment::kSentinel);
    else if (!line.empty()) fail(ErrorKind::kParse, "bad segment tag '" + line + "'");
  }
  if (out.segments.size() != out.ids.size()) fail(ErrorKind::kParse, "segment map length != id count");
  return out;
}

void writeCorruption(const std::filesystem::path& base, const SpanCorruption& pair) {
  writeIds(withSuffix(base, ".inputs"), pair.inputs);
  writeIds(withSuffix(base, ".targets"), pair.targets);
}

SpanCorruption readCorruption(const std::filesystem::path& base) {
  return {readIds(withSuffix(base, ".inputs")), readIds(withSuffix(base, ".targets"))};
}

}  // namespace mmsim
