#include "mmsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace mmsim::fft {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is.
fftw_plan planFor(int n) {
  static std::mutex mutex;
  static std::map<int, Plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second.get();
  std::vector<Complex> scratch(static_cast<std::size_t>(n));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(n, Plan(p));
  return p;
}

}  // namespace

void forward(std::span<Complex> data) {
  if (data.size() <= 1) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(planFor(static_cast<int>(data.size())), buf, buf);
}

}  // namespace mmsim::fft
