#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfsim/stream.hpp"

namespace dfsim {

/// Strictly ascending tap offsets into a delay buffer. Offset 0 is the
/// element handed to the most recent shift; the buffer keeps last_tap + 1
/// elements in total.
class TapList {
 public:
  TapList(std::initializer_list<std::size_t> taps)
      : TapList(std::vector<std::size_t>(taps)) {}

  explicit TapList(std::vector<std::size_t> taps) : taps_(std::move(taps)) {
    if (taps_.empty()) {
      throw std::invalid_argument("TapList: at least one tap required");
    }
    for (std::size_t i = 1; i < taps_.size(); ++i) {
      if (taps_[i] <= taps_[i - 1]) {
        throw std::invalid_argument(
            "TapList: tap indices must be strictly ascending");
      }
    }
  }

  const std::vector<std::size_t>& taps() const { return taps_; }
  std::size_t capacity() const { return taps_.back() + 1; }
  bool contains(std::size_t tap) const {
    return std::binary_search(taps_.begin(), taps_.end(), tap);
  }

  /// Buffer sizes a hardware implementation would instantiate: one leading
  /// buffer from the input to the first tap, then one per inter-tap gap.
  /// Together with one register per tap they account for the capacity.
  std::vector<std::size_t> partition_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.push_back(taps_.front());
    for (std::size_t i = 1; i < taps_.size(); ++i) {
      sizes.push_back(taps_[i] - taps_[i - 1] - 1);
    }
    return sizes;
  }

 private:
  std::vector<std::size_t> taps_;
};

namespace detail {

/// Ring-buffer delay core shared by the run-time and compile-time tapped
/// registers. Slot k holds the value supplied k shifts ago (fill before
/// warm-up).
template <typename T>
class DelayCore {
 public:
  DelayCore(std::size_t capacity, T fill)
      : slots_(capacity, fill), head_(0), shift_count_(0) {}

  void shift(T value) {
    head_ = (head_ + slots_.size() - 1) % slots_.size();
    slots_[head_] = value;
    ++shift_count_;
  }

  T at(std::size_t distance) const {
    return slots_[(head_ + distance) % slots_.size()];
  }

  std::uint64_t shift_count() const { return shift_count_; }

 private:
  std::vector<T> slots_;
  std::size_t head_;
  std::uint64_t shift_count_;
};

}  // namespace detail

/// Constant-distance delay buffer with declared parallel taps. Reading an
/// undeclared offset is a hard error, mirroring the compile-time access
/// enforcement of the variadic form below. Owned and mutated by one
/// processing element at a time.
template <typename T, std::size_t... Taps>
class ShiftRegister;

template <typename T>
class ShiftRegister<T> {
 public:
  explicit ShiftRegister(TapList taps, T fill = T{})
      : taps_(std::move(taps)), core_(taps_.capacity(), fill) {}

  /// Moves every stored element one position deeper and inserts `value` at
  /// distance 0.
  void shift(T value) { core_.shift(value); }

  /// Value supplied `tap` shifts ago; the fill value during warm-up.
  T get(std::size_t tap) const {
    if (!taps_.contains(tap)) {
      throw std::out_of_range("ShiftRegister: tap " + std::to_string(tap) +
                              " was not declared");
    }
    return core_.at(tap);
  }

  const TapList& taps() const { return taps_; }
  std::size_t capacity() const { return taps_.capacity(); }
  std::uint64_t shift_count() const { return core_.shift_count(); }

 private:
  TapList taps_;
  detail::DelayCore<T> core_;
};

/// Compile-time tap declaration; undeclared offsets are rejected during
/// compilation.
template <typename T, std::size_t... Taps>
class ShiftRegister {
  static_assert(sizeof...(Taps) >= 1, "at least one tap required");

  static constexpr std::size_t tap_array[] = {Taps...};

  static constexpr bool ascending() {
    for (std::size_t i = 1; i < sizeof...(Taps); ++i) {
      if (tap_array[i] <= tap_array[i - 1]) return false;
    }
    return true;
  }
  static_assert(ascending(), "tap indices must be strictly ascending");

  template <std::size_t K>
  static constexpr bool declared() {
    for (std::size_t tap : tap_array) {
      if (tap == K) return true;
    }
    return false;
  }

 public:
  static constexpr std::size_t capacity =
      tap_array[sizeof...(Taps) - 1] + 1;

  explicit ShiftRegister(T fill = T{}) : core_(capacity, fill) {}

  void shift(T value) { core_.shift(value); }

  template <std::size_t K>
  T get() const {
    static_assert(declared<K>(), "tap offset was not declared");
    return core_.at(K);
  }

  std::uint64_t shift_count() const { return core_.shift_count(); }

 private:
  detail::DelayCore<T> core_;
};

/// Streams a row-major H x W grid through a shift register with taps
/// {0, W-1, W+1, 2W} and emits the 4-point average of every interior cell:
/// out(i-1, j) = 0.25 * (north + east + west + south) for i >= 2 and
/// 1 <= j <= W-2, giving (H-2) * (W-2) outputs.
template <typename T>
void stencil_2d(Stream<T>& in, Stream<T>& out, std::size_t height,
                std::size_t width) {
  if (height < 3 || width < 3) {
    throw std::invalid_argument("stencil_2d: height and width must be >= 3");
  }
  ShiftRegister<T> sr(
      TapList{0, width - 1, width + 1, 2 * width}, T{});
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      sr.shift(in.pop());
      if (i >= 2 && j >= 1 && j < width - 1) {  // Ignore boundary
        const T res =
            static_cast<T>(0.25) * (sr.get(2 * width) + sr.get(width - 1) +
                                    sr.get(width + 1) + sr.get(0));
        out.push(res);
      }
    }
  }
}

}  // namespace dfsim
