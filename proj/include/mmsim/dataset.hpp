#pragma once

// Radar-text corpus layout:
//   <root>/manifest.jsonl         one record per line
//   <root>/clouds/<id>.rpc        RPC1 point-cloud sequences
//   <root>/tokens/<id>.tok        optional token streams
//   <root>/configs/<hash>.json    radar configs, named by their 16-hex-digit hash

#include "mmsim/radar_config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mmsim {

struct SequenceRecord {
  std::string id;
  std::string cloud_path;  // relative to the corpus root
  std::uint32_t frame_count = 0;
  std::vector<std::string> text;
  std::optional<std::string> text_path;  // sidecar, one description per line
  std::optional<std::string> token_path;
  std::optional<std::string> source_motion;
  std::uint64_t config_hash = 0;

  bool operator==(const SequenceRecord&) const = default;
};

inline constexpr const char* kManifestName = "manifest.jsonl";

std::string toJsonLine(const SequenceRecord& record);
SequenceRecord parseRecord(const std::string& line);

/// Throws listing every record id whose referenced files are missing.
void writeManifest(const std::vector<SequenceRecord>& records, const std::filesystem::path& root);
std::vector<SequenceRecord> readManifest(const std::filesystem::path& root);
/// Replaces the record with the same id, or appends.
void upsertRecord(const std::filesystem::path& root, const SequenceRecord& record);

/// Writes configs/<hash>.json and returns the hash.
std::uint64_t storeConfig(const std::filesystem::path& root, const RadarConfig& config);
std::string hashHex(std::uint64_t hash);

/// Inline descriptions followed by sidecar lines.
std::vector<std::string> recordTexts(const std::filesystem::path& root, const SequenceRecord& record);

struct RecordCheck {
  std::string id;
  bool ok = true;
  std::vector<std::string> problems;
};

struct ValidationReport {
  std::vector<RecordCheck> records;
  std::vector<std::string> corpus_problems;  // failures not tied to one record

  bool allPassed() const;
  std::string summary() const;
};

/// Read-only check of every record; I/O failures are reported, never thrown.
ValidationReport validateCorpus(const std::filesystem::path& root);

}  // namespace mmsim
