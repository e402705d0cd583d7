#include "mmsim/pipeline.hpp"

#include "mmsim/error.hpp"
#include "mmsim/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace mmsim {
namespace {

// Runs make(i) for i in [0, n) on `threads` workers; results land by index.
template <typename Make>
SynthResult runFrames(std::size_t n, const SynthOptions& options, Make&& make) {
  SynthResult result;
  result.frames.resize(n);
  result.frame_seconds.resize(n);
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(mutex);
        if (error) return;
      }
      try {
        const auto start = std::chrono::steady_clock::now();
        result.frames[i] = make(i);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.frame_seconds[i] = secs;
        if (options.progress) {
          std::lock_guard lock(mutex);
          options.progress(i, secs);
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return result;
}

}  // namespace

std::uint64_t samplingSeed(std::uint64_t seed, std::size_t frame) { return rng::hashKey({seed, 0x73616d70ull, frame}); }
std::uint64_t noiseSeed(std::uint64_t seed) { return rng::hashKey({seed, 0x6e6f6973ull}); }

IfCube simulateCube(const TriMesh& mesh, std::size_t frame_index, const SynthOptions& options) {
  const AntennaArray array = AntennaArray::fromConfig(options.config);
  const auto paths = traceFrame(mesh, array, options.config, samplingSeed(options.seed, frame_index), options.trace);
  IfCube cube = synthesizeIf(paths, options.config, frame_index);
  return addNoise(cube, options.config.snr_db, noiseSeed(options.seed));
}

SynthResult synthesizeSequence(const MotionSequence& motion, const SynthOptions& options) {
  options.config.validate();
  const MotionSequence frames = resample(motion, options.config.frame_rate_hz);
  const BodyTemplate body = options.body ? *options.body : defaultBodyTemplate(frames.jointNames());
  body.validate(frames.jointCount());
  return runFrames(frames.size(), options, [&](std::size_t i) {
    const TriMesh mesh = skinCapsules(frames, i, body, options.tessellation);
    return processFrame(simulateCube(mesh, i, options), options.process);
  });
}

SynthResult synthesizeSequence(const MeshSequence& meshes, const SynthOptions& options) {
  options.config.validate();
  const MeshSequence frames = resample(meshes, options.config.frame_rate_hz);
  return runFrames(frames.frames.size(), options, [&](std::size_t i) {
    return processFrame(simulateCube(frames.frames[i], i, options), options.process);
  });
}

}  // namespace mmsim
