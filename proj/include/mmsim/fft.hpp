#pragma once

#include "mmsim/cube.hpp"

#include <span>

namespace mmsim::fft {

/// In-place forward DFT (e^{-j2pi kn/N}, unnormalized) of any length.
/// Thread-safe; plans are cached per length and are alignment independent,
/// so identical input gives identical output on every call.
void forward(std::span<Complex> data);

}  // namespace mmsim::fft
