#include "mmsim/cloud_io.hpp"
#include "mmsim/dataset.hpp"
#include "mmsim/error.hpp"
#include "mmsim/tokenizer.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace mmsim;
namespace fs = std::filesystem;

namespace {

StoredFrame flatFrame(std::uint32_t index) {
  StoredFrame f{index, index / 10.0f, {}};
  for (std::size_t i = 0; i < kPointsPerFrame; ++i) f.points.push_back({0.f, 3.f, 0.f, 3.f, 0.f, 1.f});
  return f;
}

SequenceRecord makeRecord(const fs::path& root, const std::string& id, std::uint32_t frames) {
  fs::create_directories(root / "clouds");
  std::vector<StoredFrame> fs_;
  for (std::uint32_t i = 0; i < frames; ++i) fs_.push_back(flatFrame(i));
  writeStoredClouds(root / "clouds" / (id + ".rpc"), fs_);
  SequenceRecord r;
  r.id = id;
  r.cloud_path = "clouds/" + id + ".rpc";
  r.frame_count = frames;
  r.text = {"a person walks forward"};
  r.config_hash = storeConfig(root, defaultConfig());
  return r;
}

std::size_t lineCount(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST(Dataset, RecordJsonRoundTrip) {
  SequenceRecord r{"seq-1", "clouds/seq-1.rpc", 90, {"walks", "strolls \"slowly\""}, "texts/seq-1.txt",
                   std::nullopt, "motions/w.json", 0x0123456789abcdefull};
  const std::string line = toJsonLine(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_LT(line.find("\"id\""), line.find("\"cloud_path\""));
  EXPECT_NE(line.find("\"0123456789abcdef\""), std::string::npos);
  EXPECT_EQ(parseRecord(line), r);
  EXPECT_THROW(parseRecord("{\"id\": 3}"), Error);
}

TEST(Dataset, OneRecordManifest) {
  test::TempDir dir;
  const SequenceRecord r = makeRecord(dir.path(), "a", 3);
  writeManifest({r}, dir.path());
  EXPECT_EQ(lineCount(dir / kManifestName), 1u);
  EXPECT_EQ(readManifest(dir.path()), std::vector<SequenceRecord>{r});
}

TEST(Dataset, DanglingPathNamesId) {
  test::TempDir dir;
  SequenceRecord ok = makeRecord(dir.path(), "good", 2);
  SequenceRecord bad = ok;
  bad.id = "orphan";
  bad.cloud_path = "clouds/missing.rpc";
  try {
    writeManifest({ok, bad}, dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("orphan"), std::string::npos);
    EXPECT_EQ(std::string(e.what()).find("good"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(dir / kManifestName));
}

TEST(Dataset, ThreeHundredSeventyFiveRecords) {
  test::TempDir dir;
  std::vector<SequenceRecord> records;
  for (int i = 0; i < 375; ++i) records.push_back(makeRecord(dir.path(), "s" + std::to_string(i), 1 + i % 3));
  writeManifest(records, dir.path());
  EXPECT_EQ(lineCount(dir / kManifestName), 375u);
  EXPECT_EQ(readManifest(dir.path()), records);
  EXPECT_TRUE(validateCorpus(dir.path()).allPassed());
}

TEST(Dataset, UpsertReplaces) {
  test::TempDir dir;
  SequenceRecord r = makeRecord(dir.path(), "a", 2);
  upsertRecord(dir.path(), r);
  upsertRecord(dir.path(), makeRecord(dir.path(), "b", 2));
  r.text.push_back("second caption");
  upsertRecord(dir.path(), r);
  const auto all = readManifest(dir.path());
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].text.size(), 2u);
}

TEST(Dataset, TextSidecar) {
  test::TempDir dir;
  SequenceRecord r = makeRecord(dir.path(), "a", 2);
  r.text.clear();
  r.text_path = "texts/a.txt";
  fs::create_directories(dir / "texts");
  std::ofstream(dir / "texts/a.txt") << "first\n\nsecond\n";
  writeManifest({r}, dir.path());
  EXPECT_EQ(recordTexts(dir.path(), r), (std::vector<std::string>{"first", "second"}));
  EXPECT_TRUE(validateCorpus(dir.path()).allPassed());
}

TEST(Dataset, ValidateDetectsFailures) {
  test::TempDir dir;
  std::vector<SequenceRecord> rs;
  for (const char* id : {"fine", "trunc", "magic", "hash", "notext", "tokens"}) rs.push_back(makeRecord(dir.path(), id, 3));
  rs[4].text.clear();
  fs::create_directories(dir / "tokens");
  std::ofstream(dir / "tokens/tokens.tok") << "1\nbanana\n";
  rs[5].token_path = "tokens/tokens.tok";
  writeManifest(rs, dir.path());

  fs::resize_file(dir / "clouds/trunc.rpc", 8 + 2 * kCloudFrameBytes);
  {
    std::fstream f(dir / "clouds/magic.rpc", std::ios::in | std::ios::out | std::ios::binary);
    f.write("RPC2", 4);
  }
  // Config file contents no longer hash to the recorded value.
  {
    SequenceRecord& h = rs[3];
    h.config_hash ^= 1;
    writeManifest(rs, dir.path());
  }

  const auto before = fs::last_write_time(dir / kManifestName);
  const ValidationReport report = validateCorpus(dir.path());
  EXPECT_EQ(fs::last_write_time(dir / kManifestName), before);
  ASSERT_EQ(report.records.size(), 6u);
  EXPECT_FALSE(report.allPassed());
  auto problems = [&](std::size_t i) {
    std::string all;
    for (const auto& p : report.records[i].problems) all += p + ";";
    return all;
  };
  EXPECT_TRUE(report.records[0].ok) << problems(0);
  EXPECT_NE(problems(1).find("frame count mismatch"), std::string::npos) << problems(1);
  EXPECT_NE(problems(2).find("bad header"), std::string::npos) << problems(2);
  EXPECT_NE(problems(3).find("config hash"), std::string::npos) << problems(3);
  EXPECT_NE(problems(4).find("no text"), std::string::npos) << problems(4);
  EXPECT_NE(problems(5).find("token file"), std::string::npos) << problems(5);
  EXPECT_NE(report.summary().find("1/6 records passed"), std::string::npos);
}

TEST(Dataset, ValidateWithoutManifestReports) {
  test::TempDir dir;
  const ValidationReport r = validateCorpus(dir.path());
  EXPECT_FALSE(r.allPassed());
  EXPECT_EQ(r.corpus_problems.size(), 1u);
}

TEST(Dataset, ConfigHashReproducible) {
  test::TempDir dir;
  RadarConfig c = defaultConfig();
  c.snr_db = 12.5;
  const std::uint64_t h = storeConfig(dir.path(), c);
  EXPECT_EQ(h, configHash(c));
  EXPECT_EQ(configHash(loadConfig(dir / ("configs/" + hashHex(h) + ".json"))), h);
}
