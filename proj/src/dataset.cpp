#include "mmsim/dataset.hpp"

#include "mmsim/cloud_io.hpp"
#include "mmsim/error.hpp"
#include "mmsim/tokenizer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mmsim {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error("dataset_io", kind, msg); }

ordered_json optionalString(const std::optional<std::string>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); }

std::optional<std::string> readOptional(const ordered_json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  return doc[key].get<std::string>();
}

}  // namespace

std::string hashHex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string toJsonLine(const SequenceRecord& r) {
  ordered_json doc;
  doc["id"] = r.id;
  doc["cloud_path"] = r.cloud_path;
  doc["frame_count"] = r.frame_count;
  doc["text"] = r.text;
  doc["text_path"] = optionalString(r.text_path);
  doc["token_path"] = optionalString(r.token_path);
  doc["source_motion"] = optionalString(r.source_motion);
  doc["config_hash"] = hashHex(r.config_hash);
  return doc.dump();
}

SequenceRecord parseRecord(const std::string& line) {
  try {
    const ordered_json doc = ordered_json::parse(line);
    SequenceRecord r;
    r.id = doc.at("id").get<std::string>();
    r.cloud_path = doc.at("cloud_path").get<std::string>();
    r.frame_count = doc.at("frame_count").get<std::uint32_t>();
    r.text = doc.at("text").get<std::vector<std::string>>();
    r.text_path = readOptional(doc, "text_path");
    r.token_path = readOptional(doc, "token_path");
    r.source_motion = readOptional(doc, "source_motion");
    const std::string hex = doc.at("config_hash").get<std::string>();
    std::size_t used = 0;
    r.config_hash = std::stoull(hex, &used, 16);
    if (used != hex.size() || hex.size() != 16) throw std::invalid_argument("config_hash");
    return r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::kParse, std::string("bad manifest record: ") + e.what());
  }
}

void writeManifest(const std::vector<SequenceRecord>& records, const fs::path& root) {
  std::vector<std::string> dangling;
  for (const auto& r : records) {
    bool ok = fs::is_regular_file(root / r.cloud_path);
    if (r.token_path) ok = ok && fs::is_regular_file(root / *r.token_path);
    if (r.text_path) ok = ok && fs::is_regular_file(root / *r.text_path);
    if (!ok) dangling.push_back(r.id);
  }
  if (!dangling.empty()) {
    std::string list;
    for (const auto& id : dangling) list += (list.empty() ? "" : ", ") + id;
    fail(ErrorKind::kNotFound, "dangling paths in records: " + list);
  }
  fs::create_directories(root);
  const fs::path tmp = root / (std::string(kManifestName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(ErrorKind::kIo, "cannot write " + tmp.string());
    for (const auto& r : records) out << toJsonLine(r) << "\n";
    if (!out) fail(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  fs::rename(tmp, root / kManifestName);
}

std::vector<SequenceRecord> readManifest(const fs::path& root) {
  std::ifstream in(root / kManifestName, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "no manifest at " + (root / kManifestName).string());
  std::vector<SequenceRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(parseRecord(line));
    } catch (const Error& e) {
      fail(ErrorKind::kParse, "manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void upsertRecord(const fs::path& root, const SequenceRecord& record) {
  std::vector<SequenceRecord> records;
  if (fs::exists(root / kManifestName)) records = readManifest(root);
  bool replaced = false;
  for (auto& r : records) {
    if (r.id == record.id) {
      r = record;
      replaced = true;
    }
  }
  if (!replaced) records.push_back(record);
  writeManifest(records, root);
}

std::uint64_t storeConfig(const fs::path& root, const RadarConfig& config) {
  const std::uint64_t hash = configHash(config);
  fs::create_directories(root / "configs");
  std::ofstream out(root / "configs" / (hashHex(hash) + ".json"));
  if (!out) fail(ErrorKind::kIo, "cannot write config into " + root.string());
  out << toJson(config) << "\n";
  return hash;
}

std::vector<std::string> recordTexts(const fs::path& root, const SequenceRecord& record) {
  std::vector<std::string> texts = record.text;
  if (record.text_path) {
    std::ifstream in(root / *record.text_path);
    if (!in) fail(ErrorKind::kNotFound, "cannot open text sidecar " + *record.text_path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) texts.push_back(line);
    }
  }
  return texts;
}

bool ValidationReport::allPassed() const {
  if (!corpus_problems.empty()) return false;
  for (const auto& r : records) {
    if (!r.ok) return false;
  }
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream ss;
  for (const auto& p : corpus_problems) ss << "corpus: FAIL " << p << "\n";
  std::size_t passed = 0;
  for (const auto& r : records) {
    if (r.ok) {
      ++passed;
      ss << r.id << ": PASS\n";
    } else {
      ss << r.id << ": FAIL";
      for (const auto& p : r.problems) ss << " [" << p << "]";
      ss << "\n";
    }
  }
  ss << passed << "/" << records.size() << " records passed\n";
  return ss.str();
}

ValidationReport validateCorpus(const fs::path& root) {
  ValidationReport report;
  std::vector<SequenceRecord> records;
  try {
    records = readManifest(root);
  } catch (const std::exception& e) {
    report.corpus_problems.push_back(e.what());
    return report;
  }
  for (const auto& r : records) {
    RecordCheck check{r.id, true, {}};
    auto problem = [&](std::string msg) {
      check.ok = false;
      check.problems.push_back(std::move(msg));
    };
    try {
      if (recordTexts(root, r).empty()) problem("no text annotation");
    } catch (const std::exception& e) {
      problem(e.what());
    }

    const fs::path cloud = root / r.cloud_path;
    std::error_code ec;
    if (!fs::is_regular_file(cloud, ec)) {
      problem("missing cloud file " + r.cloud_path);
    } else {
      try {
        const CloudHeader h = readCloudHeader(cloud);
        const std::uintmax_t expected = 8 + static_cast<std::uintmax_t>(h.frame_count) * kCloudFrameBytes;
        if (h.frame_count != r.frame_count || h.file_size != expected) {
          problem("frame count mismatch (record " + std::to_string(r.frame_count) + ", header " +
                  std::to_string(h.frame_count) + ", bytes " + std::to_string(h.file_size) + ")");
        } else {
          // Size matches the 128-point layout; also check the stored values.
          for (const auto& f : readClouds(cloud)) {
            const bool finite = std::all_of(f.points.begin(), f.points.end(), [](const auto& p) {
              return std::all_of(p.begin(), p.end(), [](float v) { return std::isfinite(v); });
            });
            if (!finite) {
              problem("non-finite value in frame " + std::to_string(f.index));
              break;
            }
          }
        }
      } catch (const std::exception& e) {
        const std::string what = e.what();
        problem(what.find("bad header") != std::string::npos ? "bad header" : what);
      }
    }

    if (r.token_path) {
      try {
        readTokens(root / *r.token_path);
      } catch (const std::exception& e) {
        problem(std::string("token file: ") + e.what());
      }
    }

    const fs::path config_file = root / "configs" / (hashHex(r.config_hash) + ".json");
    try {
      if (configHash(loadConfig(config_file)) != r.config_hash) problem("config hash mismatch");
    } catch (const std::exception& e) {
      problem("config hash unverifiable: " + std::string(e.what()));
    }
    report.records.push_back(std::move(check));
  }
  return report;
}

}  // namespace mmsim
