// mmsim: command-line front end for the radar simulation and tokenization
// pipeline.
//
// Exit codes: 0 success, 1 other error, 2 input not found, 3 dimension
// mismatch, 4 frame range out of bounds, 64 usage error.

#include "mmsim/cloud_io.hpp"
#include "mmsim/dataset.hpp"
#include "mmsim/error.hpp"
#include "mmsim/pipeline.hpp"
#include "mmsim/ply.hpp"
#include "mmsim/tokenizer.hpp"
#include "mmsim/vocab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace mmsim;

namespace {

constexpr int kExitError = 1;
constexpr int kExitNotFound = 2;
constexpr int kExitDimension = 3;
constexpr int kExitRange = 4;
constexpr int kExitUsage = 64;
constexpr const char* kCorpusEnv = "MMSIM_CORPUS_ROOT";

int exitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kNotFound: return kExitNotFound;
    case ErrorKind::kDimensionMismatch: return kExitDimension;
    case ErrorKind::kOutOfRange: return kExitRange;
    default: return kExitError;
  }
}

std::optional<fs::path> corpusRoot(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv(kCorpusEnv); env && *env) return fs::path(env);
  return std::nullopt;
}

RadarConfig resolveConfig(const std::string& path, const std::vector<std::string>& overrides) {
  RadarConfig config = defaultConfig();
  if (!path.empty()) {
    if (!fs::exists(path)) throw Error("cli", ErrorKind::kNotFound, "config not found: " + path);
    config = loadConfig(path);
  }
  for (const auto& o : overrides) applyOverride(config, o);
  config.validate();
  return config;
}

Vec3 parseTriple(const std::string& text, const char* what) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error("cli", ErrorKind::kInvalidArgument, std::string(what) + ": expected x,y,z");
    }
  }
  if (v.size() != 3) throw Error("cli", ErrorKind::kInvalidArgument, std::string(what) + ": expected x,y,z");
  return {v[0], v[1], v[2]};
}

void printDerived(std::ostream& out, const DerivedParams& d) {
  out << "wavelength_m " << d.wavelength_m << "\n"
      << "range_resolution_m " << d.range_resolution_m << "\n"
      << "max_range_m " << d.max_range_m << "\n"
      << "velocity_resolution_mps " << d.velocity_resolution_mps << "\n"
      << "max_velocity_mps " << d.max_velocity_mps << "\n";
}

nlohmann::ordered_json derivedJson(const DerivedParams& d) {
  nlohmann::ordered_json j;
  j["wavelength_m"] = d.wavelength_m;
  j["range_resolution_m"] = d.range_resolution_m;
  j["max_range_m"] = d.max_range_m;
  j["velocity_resolution_mps"] = d.velocity_resolution_mps;
  j["max_velocity_mps"] = d.max_velocity_mps;
  return j;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string motion;
  std::string format = "auto";
  std::string procedural;
  std::size_t procedural_frames = 90;
  double mesh_fps = 30.0;
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::string corpus;
  std::string id;
  std::vector<std::string> text;
  std::uint64_t seed = 0;
  std::optional<double> snr;
  unsigned threads = 1;
  double density = 400.0;
  int rings = 4;
  int sectors = 12;
  bool hann = false;
  std::string angle_mode = "phase_array";
  double mount_height = 0.0;
  bool json = false;
  bool quiet = false;
};

int runSynth(const SynthArgs& a) {
  SynthOptions opt;
  opt.config = resolveConfig(a.config, a.overrides);
  if (a.snr) opt.config.snr_db = *a.snr;
  opt.config.rng_seed = a.seed;
  opt.config.validate();
  opt.seed = a.seed;
  opt.threads = a.threads;
  opt.trace.density = a.density;
  opt.tessellation = {a.rings, a.sectors};
  if (a.hann) opt.process.range_window = opt.process.doppler_window = Window::kHann;
  opt.process.decode.angle_mode = a.angle_mode == "paper_literal" ? AngleMode::kPaperLiteral : AngleMode::kPhaseArray;
  opt.process.decode.mount_height_m = a.mount_height;
  if (!a.quiet) {
    opt.progress = [](std::size_t frame, double secs) {
      std::cerr << "frame " << frame << " " << secs * 1e3 << " ms\n";
    };
  }

  fs::path out_path = a.out;
  const auto root = corpusRoot(a.corpus);
  const bool corpus_mode = root && !a.id.empty();
  if (corpus_mode) {
    if (a.text.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "corpus records need at least one --text");
    out_path = *root / "clouds" / (a.id + ".rpc");
  }
  if (out_path.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "need --out, or --corpus/" + std::string(kCorpusEnv) + " with --id");

  SynthResult result;
  std::string source;
  if (!a.procedural.empty()) {
    GaitOptions gait;
    gait.kind = a.procedural == "walk" ? GaitKind::kWalk : a.procedural == "swing" ? GaitKind::kLegSwing : GaitKind::kStatic;
    gait.frames = a.procedural_frames;
    gait.fps = opt.config.frame_rate_hz;
    result = synthesizeSequence(proceduralMotion(gait), opt);
    source = "procedural:" + a.procedural;
  } else {
    if (a.motion.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "need --motion or --procedural");
    if (!fs::exists(a.motion)) throw Error("cli", ErrorKind::kNotFound, "motion not found: " + a.motion);
    const bool mesh = a.format == "mesh_sequence" || (a.format == "auto" && fs::is_directory(a.motion));
    auto motion = loadMotion(a.motion, mesh ? MotionFormat::kMeshSequence : MotionFormat::kSkeletonJson, a.mesh_fps);
    result = std::visit([&](const auto& m) { return synthesizeSequence(m, opt); }, motion);
    source = a.motion;
  }

  if (!out_path.parent_path().empty()) fs::create_directories(out_path.parent_path());
  writeClouds(out_path, result.frames);

  if (corpus_mode) {
    SequenceRecord rec;
    rec.id = a.id;
    rec.cloud_path = fs::relative(out_path, *root).generic_string();
    rec.frame_count = static_cast<std::uint32_t>(result.frames.size());
    rec.text = a.text;
    rec.source_motion = source;
    rec.config_hash = storeConfig(*root, opt.config);
    upsertRecord(*root, rec);
  }

  double total = 0.0;
  for (double s : result.frame_seconds) total += s;
  const DerivedParams d = derive(opt.config);
  if (a.json) {
    nlohmann::ordered_json j;
    j["output"] = out_path.string();
    j["frames"] = result.frames.size();
    j["points_per_frame"] = kPointsPerFrame;
    j["mean_frame_ms"] = result.frames.empty() ? 0.0 : 1e3 * total / result.frames.size();
    j["config_hash"] = hashHex(configHash(opt.config));
    j["derived"] = derivedJson(d);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "wrote " << out_path.string() << "\n"
              << "frames " << result.frames.size() << "\n"
              << "points_per_frame " << kPointsPerFrame << "\n"
              << "mean_frame_ms " << (result.frames.empty() ? 0.0 : 1e3 * total / result.frames.size()) << "\n";
    printDerived(std::cout, d);
  }
  return 0;
}

// ---------------------------------------------------------------- tokenize

struct TokenizeArgs {
  std::string cloud;
  std::string features;
  std::string codebook;
  std::optional<std::uint64_t> codebook_seed;
  std::size_t codebook_size = kDefaultCodebookSize;
  std::string out;
  std::string grid = "4,4,4";
  std::string grid_center;
  std::string grid_extent = "1,1,2";
  double radius = 0.25;
  std::size_t rate = kDefaultDownsampleRate;
  std::uint64_t seed = 0;
  std::string mixed;
  std::vector<std::string> text;
  std::string corrupt;
  double corrupt_ratio = kDefaultCorruptionRatio;
  std::size_t mean_span = kDefaultMeanSpan;
  std::string corpus;
  std::string id;
};

Vec3 medianCenter(const std::vector<StoredFrame>& frames) {
  std::vector<double> axis[3];
  for (const auto& f : frames) {
    for (const auto& p : f.points) {
      for (int k = 0; k < 3; ++k) axis[k].push_back(p[k]);
    }
  }
  Vec3 c;
  for (int k = 0; k < 3; ++k) {
    auto& v = axis[k];
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    c[k] = v[v.size() / 2];
  }
  return c;
}

int runTokenize(const TokenizeArgs& a) {
  const auto root = corpusRoot(a.corpus);
  std::string cloud = a.cloud;
  std::vector<SequenceRecord> records;
  std::optional<std::size_t> record;  // index into records in corpus mode
  if (root && !a.id.empty()) {
    records = readManifest(*root);
    const auto it = std::find_if(records.begin(), records.end(), [&](const SequenceRecord& r) { return r.id == a.id; });
    if (it == records.end()) throw Error("cli", ErrorKind::kNotFound, "no record '" + a.id + "' in corpus manifest");
    record = static_cast<std::size_t>(it - records.begin());
    if (cloud.empty() && a.features.empty()) cloud = (*root / it->cloud_path).string();
  }

  FeatureMatrix features;
  if (!a.features.empty()) {
    features = readFeatures(a.features);
  } else {
    if (cloud.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "need --cloud, --features or a corpus --id");
    const auto frames = readClouds(cloud);
    if (frames.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "cloud file has no frames");
    const Vec3 counts = parseTriple(a.grid, "--grid");
    const Vec3 extent = parseTriple(a.grid_extent, "--grid-extent");
    const Vec3 center = a.grid_center.empty() ? medianCenter(frames) : parseTriple(a.grid_center, "--grid-center");
    const AnchorGrid grid = buildGrid(Aabb::fromCenterExtents(center, extent), static_cast<std::size_t>(counts.x()),
                                      static_cast<std::size_t>(counts.y()), static_cast<std::size_t>(counts.z()));
    features = group(frames, grid, a.radius, a.rate).flatten();
  }

  std::optional<Codebook> codebook;
  if (!a.codebook.empty()) {
    codebook = readCodebook(a.codebook);
  } else {
    codebook = randomCodebook(a.codebook_size, features.cols, a.codebook_seed.value_or(a.seed));
  }
  const TokenSequence tokens = quantize(features, *codebook);

  fs::path out_path = a.out;
  if (record) out_path = *root / "tokens" / (a.id + ".tok");
  if (out_path.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "need --out, or --corpus with --id");
  if (!out_path.parent_path().empty()) fs::create_directories(out_path.parent_path());
  writeTokens(out_path, tokens);

  if (record) {
    records[*record].token_path = fs::relative(out_path, *root).generic_string();
    writeManifest(records, *root);
  }

  const Vocabulary vocab(Vocabulary::kDefaultTextSize, static_cast<std::uint32_t>(codebook->size()));
  if (!a.mixed.empty()) {
    std::vector<std::uint32_t> text_ids;
    for (const auto& t : a.text) {
      auto ids = byteTokenize(t, vocab);
      text_ids.insert(text_ids.end(), ids.begin(), ids.end());
    }
    writeMixed(a.mixed, interleave(text_ids, tokens, vocab));
  }
  if (!a.corrupt.empty()) writeCorruption(a.corrupt, spanCorrupt(tokens, a.corrupt_ratio, a.mean_span, a.seed, vocab));

  std::map<std::uint32_t, std::size_t> histogram;
  for (std::uint32_t id : tokens.ids) ++histogram[id];
  std::vector<std::pair<std::uint32_t, std::size_t>> top(histogram.begin(), histogram.end());
  std::stable_sort(top.begin(), top.end(), [](const auto& l, const auto& r) { return l.second > r.second; });
  std::size_t sum = 0;
  for (const auto& [id, n] : histogram) sum += n;
  std::cout << "wrote " << out_path.string() << "\n"
            << "tokens " << tokens.ids.size() << "\n"
            << "codebook " << codebook->size() << "x" << codebook->dim() << "\n"
            << "distinct " << histogram.size() << "\n"
            << "histogram_total " << sum << "\n"
            << "top";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, top.size()); ++i) std::cout << " " << top[i].first << ":" << top[i].second;
  std::cout << "\n";
  return 0;
}

// ---------------------------------------------------------------- export

struct ExportArgs {
  std::string cloud;
  std::string format = "csv";
  std::optional<long> from;
  std::optional<long> to;
  std::string out_dir = ".";
};

int runExport(const ExportArgs& a) {
  const auto frames = readClouds(a.cloud);
  const long last = static_cast<long>(frames.size()) - 1;
  const long from = a.from.value_or(0);
  const long to = a.to.value_or(last);
  if (frames.empty() || from < 0 || to > last || from > to) {
    throw Error("cli", ErrorKind::kOutOfRange, "frame range [" + std::to_string(from) + ", " + std::to_string(to) +
                                                   "] invalid for " + std::to_string(frames.size()) + " frames");
  }
  fs::create_directories(a.out_dir);
  for (long i = from; i <= to; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06ld.%s", i, a.format.c_str());
    const fs::path p = fs::path(a.out_dir) / name;
    if (a.format == "csv") exportCsv(p, frames[static_cast<std::size_t>(i)]);
    else exportPly(p, frames[static_cast<std::size_t>(i)]);
  }
  std::cout << "exported " << (to - from + 1) << " frames to " << a.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------- inspect

struct InspectArgs {
  std::string cloud;
  std::string motion;
  std::string procedural;
  std::size_t frame = 0;
  std::string config;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  double density = 400.0;
  std::string paths_csv;
  std::string cube;
};

int runInspect(const InspectArgs& a) {
  if (!a.cloud.empty()) {
    const auto frames = readClouds(a.cloud);
    std::cout << "frames " << frames.size() << "\n";
    for (const auto& f : frames) {
      float vmin = 0, vmax = 0, imax = -1e30f;
      for (const auto& p : f.points) {
        vmin = std::min(vmin, p[4]);
        vmax = std::max(vmax, p[4]);
        imax = std::max(imax, p[5]);
      }
      std::cout << "frame " << f.index << " t=" << f.timestamp << " points=" << f.points.size() << " v=[" << vmin
                << "," << vmax << "] peak_db=" << imax << "\n";
    }
    return 0;
  }
  SynthOptions opt;
  opt.config = resolveConfig(a.config, a.overrides);
  opt.seed = a.seed;
  opt.trace.density = a.density;
  MotionSequence motion = [&] {
    if (!a.procedural.empty()) {
      GaitOptions gait;
      gait.kind = a.procedural == "walk" ? GaitKind::kWalk : a.procedural == "swing" ? GaitKind::kLegSwing : GaitKind::kStatic;
      gait.fps = opt.config.frame_rate_hz;
      gait.frames = std::max<std::size_t>(a.frame + 2, 2);
      return proceduralMotion(gait);
    }
    if (a.motion.empty()) throw Error("cli", ErrorKind::kInvalidArgument, "need --cloud, --motion or --procedural");
    return resample(loadSkeletonJson(a.motion), opt.config.frame_rate_hz);
  }();
  if (a.frame >= motion.size()) throw Error("cli", ErrorKind::kOutOfRange, "frame index out of range");
  const TriMesh mesh = skinCapsules(motion, a.frame, defaultBodyTemplate(motion.jointNames()), opt.tessellation);
  const AntennaArray array = AntennaArray::fromConfig(opt.config);
  const auto paths = traceFrame(mesh, array, opt.config, samplingSeed(opt.seed, a.frame), opt.trace);
  std::cout << "triangles " << mesh.triangles.size() << "\npaths " << paths.size() << "\n";
  if (!a.paths_csv.empty()) {
    std::ofstream out(a.paths_csv);
    out.precision(12);
    out << "rx,d,ddot,amplitude\n";
    for (const auto& p : paths) out << p.rx_index << "," << p.path_length_m << "," << p.path_rate_mps << "," << p.amplitude << "\n";
  }
  if (!a.cube.empty()) {
    const IfCube cube = addNoise(synthesizeIf(paths, opt.config, a.frame), opt.config.snr_db, noiseSeed(opt.seed));
    writeIfCube(a.cube, cube);
    std::cout << "cube " << a.cube << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave radar simulation and radar-token pipeline"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* cs = app.add_subcommand("synth", "Simulate a point-cloud sequence from motion");
  cs->add_option("--motion", synth.motion, "Skeleton JSON file or mesh-sequence directory");
  cs->add_option("--format", synth.format, "auto | skeleton_json | mesh_sequence")
      ->check(CLI::IsMember({"auto", "skeleton_json", "mesh_sequence"}));
  cs->add_option("--procedural", synth.procedural, "Built-in motion instead of --motion")
      ->check(CLI::IsMember({"walk", "swing", "static"}));
  cs->add_option("--frames", synth.procedural_frames, "Frame count for --procedural");
  cs->add_option("--mesh-fps", synth.mesh_fps, "Frame rate of a mesh sequence");
  cs->add_option("--config", synth.config, "Radar config file");
  cs->add_option("--set", synth.overrides, "Config override key=value (repeatable)");
  cs->add_option("--out", synth.out, "Output RPC1 cloud file");
  cs->add_option("--corpus", synth.corpus, std::string("Corpus root (default $") + kCorpusEnv + ")");
  cs->add_option("--id", synth.id, "Record id in the corpus");
  cs->add_option("--text", synth.text, "Description for the corpus record (repeatable)");
  cs->add_option("--seed", synth.seed, "Random seed")->required();
  cs->add_option("--snr", synth.snr, "SNR override in dB (inf disables noise)");
  cs->add_option("--threads", synth.threads, "Worker threads")->check(CLI::PositiveNumber);
  cs->add_option("--density", synth.density, "Surface samples per m^2");
  cs->add_option("--rings", synth.rings, "Capsule rings per hemisphere");
  cs->add_option("--sectors", synth.sectors, "Capsule sectors");
  cs->add_flag("--hann", synth.hann, "Hann windows on both FFTs");
  cs->add_option("--angle-mode", synth.angle_mode, "phase_array | paper_literal")
      ->check(CLI::IsMember({"phase_array", "paper_literal"}));
  cs->add_option("--mount-height", synth.mount_height, "Radar height added to z (m)");
  cs->add_flag("--json", synth.json, "Machine-readable summary on stdout");
  cs->add_flag("--quiet", synth.quiet, "No per-frame progress on stderr");

  TokenizeArgs tok;
  auto* ct = app.add_subcommand("tokenize", "Quantize a cloud sequence into radar tokens");
  ct->add_option("--cloud", tok.cloud, "RPC1 cloud file");
  ct->add_option("--features", tok.features, "FEA1 feature file (instead of --cloud)");
  ct->add_option("--codebook", tok.codebook, "CBK1 codebook file");
  ct->add_option("--codebook-seed", tok.codebook_seed, "Seeded random codebook when no file is given");
  ct->add_option("--codebook-size", tok.codebook_size, "Entries of the seeded random codebook");
  ct->add_option("--out", tok.out, "Token output file");
  ct->add_option("--grid", tok.grid, "Anchor counts nx,ny,nz");
  ct->add_option("--grid-center", tok.grid_center, "Grid centre x,y,z (default: median of points)");
  ct->add_option("--grid-extent", tok.grid_extent, "Grid box extents x,y,z");
  ct->add_option("--radius", tok.radius, "Neighbourhood radius (m)");
  ct->add_option("--rate", tok.rate, "Frames per token");
  ct->add_option("--seed", tok.seed, "Random seed")->required();
  ct->add_option("--mixed", tok.mixed, "Write <base>.ids/.seg with the text and wrapped tokens");
  ct->add_option("--text", tok.text, "Text for --mixed (byte-level ids)");
  ct->add_option("--corrupt", tok.corrupt, "Write <base>.inputs/.targets span-corruption pair");
  ct->add_option("--corrupt-ratio", tok.corrupt_ratio, "Fraction of tokens masked");
  ct->add_option("--mean-span", tok.mean_span, "Mean corrupted span length");
  ct->add_option("--corpus", tok.corpus, std::string("Corpus root (default $") + kCorpusEnv + ")");
  ct->add_option("--id", tok.id, "Record id to attach the tokens to");

  ExportArgs ex;
  auto* ce = app.add_subcommand("export", "Export frames as CSV or PLY");
  ce->add_option("--cloud", ex.cloud, "RPC1 cloud file")->required();
  ce->add_option("--format", ex.format, "csv | ply")->check(CLI::IsMember({"csv", "ply"}));
  ce->add_option("--from", ex.from, "First frame (inclusive)");
  ce->add_option("--to", ex.to, "Last frame (inclusive)");
  ce->add_option("--out-dir", ex.out_dir, "Output directory");

  InspectArgs in;
  auto* ci = app.add_subcommand("inspect", "Summarize a cloud file or dump one frame's paths / IF cube");
  ci->add_option("--cloud", in.cloud, "RPC1 cloud file to summarize");
  ci->add_option("--motion", in.motion, "Skeleton JSON file");
  ci->add_option("--procedural", in.procedural, "Built-in motion")->check(CLI::IsMember({"walk", "swing", "static"}));
  ci->add_option("--frame", in.frame, "Frame index (after resampling)");
  ci->add_option("--config", in.config, "Radar config file");
  ci->add_option("--set", in.overrides, "Config override key=value (repeatable)");
  ci->add_option("--seed", in.seed, "Random seed");
  ci->add_option("--density", in.density, "Surface samples per m^2");
  ci->add_option("--paths", in.paths_csv, "Write scatter paths as CSV (rx,d,ddot,amplitude)");
  ci->add_option("--cube", in.cube, "Write the IF cube (IFC1)");

  std::string validate_root;
  auto* cv = app.add_subcommand("validate", "Check a corpus against its manifest");
  cv->add_option("root", validate_root, std::string("Corpus root (default $") + kCorpusEnv + ")");

  std::string dp_config;
  std::vector<std::string> dp_overrides;
  bool dp_json = false;
  auto* cd = app.add_subcommand("derive-params", "Print derived radar parameters");
  cd->add_option("--config", dp_config, "Radar config file");
  cd->add_option("--set", dp_overrides, "Config override key=value (repeatable)");
  cd->add_flag("--json", dp_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cs) return runSynth(synth);
    if (*ct) return runTokenize(tok);
    if (*ce) return runExport(ex);
    if (*ci) return runInspect(in);
    if (*cv) {
      const auto root = corpusRoot(validate_root);
      if (!root) throw Error("cli", ErrorKind::kInvalidArgument, std::string("need a corpus root or $") + kCorpusEnv);
      const ValidationReport report = validateCorpus(*root);
      std::cout << report.summary();
      return report.allPassed() ? 0 : kExitError;
    }
    if (*cd) {
      const RadarConfig config = resolveConfig(dp_config, dp_overrides);
      const DerivedParams d = derive(config);
      if (dp_json) std::cout << derivedJson(d).dump(2) << "\n";
      else printDerived(std::cout, d);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
