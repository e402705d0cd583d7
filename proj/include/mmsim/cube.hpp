#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mmsim {

using Complex = std::complex<double>;

/// Dense row-major complex array of shape [outer][middle][inner].
class ComplexCube {
 public:
  ComplexCube() = default;
  ComplexCube(std::size_t outer, std::size_t middle, std::size_t inner)
      : outer_(outer), middle_(middle), inner_(inner), data_(outer * middle * inner) {}

  std::size_t outer() const noexcept { return outer_; }
  std::size_t middle() const noexcept { return middle_; }
  std::size_t inner() const noexcept { return inner_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t o, std::size_t m, std::size_t i) { return data_[(o * middle_ + m) * inner_ + i]; }
  const Complex& operator()(std::size_t o, std::size_t m, std::size_t i) const {
    return data_[(o * middle_ + m) * inner_ + i];
  }

  std::span<Complex> row(std::size_t o, std::size_t m) { return {data_.data() + (o * middle_ + m) * inner_, inner_}; }
  std::span<const Complex> row(std::size_t o, std::size_t m) const {
    return {data_.data() + (o * middle_ + m) * inner_, inner_};
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  bool operator==(const ComplexCube&) const = default;

 private:
  std::size_t outer_ = 0, middle_ = 0, inner_ = 0;
  std::vector<Complex> data_;
};

}  // namespace mmsim
