#pragma once

// Motion -> mesh -> scatter paths -> IF cube -> point cloud, per frame.

#include "mmsim/dsp.hpp"
#include "mmsim/if_synth.hpp"
#include "mmsim/motion.hpp"
#include "mmsim/raytrace.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mmsim {

struct SynthOptions {
  RadarConfig config = defaultConfig();
  std::uint64_t seed = 0;
  Tessellation tessellation;
  TraceOptions trace;
  ProcessOptions process;
  std::optional<BodyTemplate> body;  // default template from joint names when empty
  unsigned threads = 1;
  /// Called from worker threads with (frame index, seconds spent); calls are serialized.
  std::function<void(std::size_t, double)> progress;
};

/// Per-frame seeds derived from the run seed; identical for any thread count.
std::uint64_t samplingSeed(std::uint64_t seed, std::size_t frame);
std::uint64_t noiseSeed(std::uint64_t seed);

/// Traced and noisy IF cube for one mesh.
IfCube simulateCube(const TriMesh& mesh, std::size_t frame_index, const SynthOptions& options);

struct SynthResult {
  std::vector<FrameCloud> frames;
  std::vector<double> frame_seconds;
};

/// Resamples to the configured frame rate, then processes frames in
/// parallel. Output is emitted in frame order and does not depend on threads.
SynthResult synthesizeSequence(const MotionSequence& motion, const SynthOptions& options);
SynthResult synthesizeSequence(const MeshSequence& meshes, const SynthOptions& options);

}  // namespace mmsim
