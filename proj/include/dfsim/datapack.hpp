#pragma once

#include <array>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstring>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace dfsim {

namespace bytes {

/// Little-endian scalar encoding; element 0 of a pack sits at the lowest
/// offset. This is also the on-disk element format for CLI grid files.
template <typename T>
  requires std::is_arithmetic_v<T>
void store_le(std::byte* dest, T value) {
  std::array<std::byte, sizeof(T)> raw =
      std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      dest[i] = raw[sizeof(T) - 1 - i];
    }
  } else {
    std::memcpy(dest, raw.data(), sizeof(T));
  }
}

template <typename T>
  requires std::is_arithmetic_v<T>
T load_le(const std::byte* src) {
  std::array<std::byte, sizeof(T)> raw;
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      raw[i] = src[sizeof(T) - 1 - i];
    }
  } else {
    std::memcpy(raw.data(), src, sizeof(T));
  }
  return std::bit_cast<T>(raw);
}

}  // namespace bytes

/// Fixed-width vector of N same-typed elements, modeling a wide data bus.
/// Plain value type: copies are independent, lanes are independent, and the
/// packed byte form is exactly N * sizeof(T) little-endian elements.
template <typename T, std::size_t N>
  requires(std::is_arithmetic_v<T> && N >= 1)
class DataPack {
 public:
  static constexpr std::size_t width = N;
  static constexpr std::size_t packed_bytes = N * sizeof(T);
  using value_type = T;

  constexpr DataPack() : elements_{} {}

  /// Broadcasts one value to every lane.
  explicit constexpr DataPack(T fill) {
    for (auto& e : elements_) e = fill;
  }

  explicit constexpr DataPack(const std::array<T, N>& values)
      : elements_(values) {}

  static DataPack from_span(std::span<const T> values) {
    if (values.size() != N) {
      throw std::invalid_argument("DataPack: expected " + std::to_string(N) +
                                  " elements, got " +
                                  std::to_string(values.size()));
    }
    DataPack p;
    for (std::size_t i = 0; i < N; ++i) p.elements_[i] = values[i];
    return p;
  }

  /// Unchecked native indexing.
  constexpr T& operator[](std::size_t i) { return elements_[i]; }
  constexpr const T& operator[](std::size_t i) const { return elements_[i]; }

  /// Checked element access.
  T get(std::size_t i) const {
    check_index(i);
    return elements_[i];
  }
  void set(std::size_t i, T value) {
    check_index(i);
    elements_[i] = value;
  }

  const std::array<T, N>& values() const { return elements_; }
  std::span<const T, N> lanes() const { return elements_; }

  friend DataPack operator+(const DataPack& a, const DataPack& b) {
    return elementwise(a, b, [](T x, T y) { return static_cast<T>(x + y); });
  }
  friend DataPack operator-(const DataPack& a, const DataPack& b) {
    return elementwise(a, b, [](T x, T y) { return static_cast<T>(x - y); });
  }
  friend DataPack operator*(const DataPack& a, const DataPack& b) {
    return elementwise(a, b, [](T x, T y) { return static_cast<T>(x * y); });
  }
  friend DataPack operator/(const DataPack& a, const DataPack& b) {
    if constexpr (std::is_integral_v<T>) {
      for (std::size_t i = 0; i < N; ++i) {
        if (b.elements_[i] == T{0}) {
          throw std::domain_error("DataPack: integer division by zero lane");
        }
      }
    }
    return elementwise(a, b, [](T x, T y) { return static_cast<T>(x / y); });
  }

  friend DataPack operator+(T s, const DataPack& p) {
    return DataPack(s) + p;
  }
  friend DataPack operator+(const DataPack& p, T s) {
    return p + DataPack(s);
  }
  friend DataPack operator-(T s, const DataPack& p) {
    return DataPack(s) - p;
  }
  friend DataPack operator-(const DataPack& p, T s) {
    return p - DataPack(s);
  }
  friend DataPack operator*(T s, const DataPack& p) {
    return DataPack(s) * p;
  }
  friend DataPack operator*(const DataPack& p, T s) {
    return p * DataPack(s);
  }
  friend DataPack operator/(T s, const DataPack& p) {
    return DataPack(s) / p;
  }
  friend DataPack operator/(const DataPack& p, T s) {
    return p / DataPack(s);
  }

  friend bool operator==(const DataPack& a, const DataPack& b) {
    return a.elements_ == b.elements_;
  }

  /// Packed bus form: N little-endian elements, element 0 first.
  std::vector<std::byte> pack_bytes() const {
    std::vector<std::byte> out(packed_bytes);
    for (std::size_t i = 0; i < N; ++i) {
      bytes::store_le(out.data() + i * sizeof(T), elements_[i]);
    }
    return out;
  }

  static DataPack unpack_bytes(std::span<const std::byte> raw) {
    if (raw.size() != packed_bytes) {
      throw std::invalid_argument(
          "DataPack: expected " + std::to_string(packed_bytes) +
          " bytes, got " + std::to_string(raw.size()));
    }
    DataPack p;
    for (std::size_t i = 0; i < N; ++i) {
      p.elements_[i] = bytes::load_le<T>(raw.data() + i * sizeof(T));
    }
    return p;
  }

 private:
  template <typename F>
  static DataPack elementwise(const DataPack& a, const DataPack& b, F op) {
    DataPack out;
    for (std::size_t i = 0; i < N; ++i) {
      out.elements_[i] = op(a.elements_[i], b.elements_[i]);
    }
    return out;
  }

  static void check_index(std::size_t i) {
    if (i >= N) {
      throw std::out_of_range("DataPack: index " + std::to_string(i) +
                              " out of range for width " + std::to_string(N));
    }
  }

  std::array<T, N> elements_;
};

/// Convenience named constructors mirroring C-style array conversion.
template <typename T, std::size_t N>
DataPack<T, N> pack_fill(T value) {
  return DataPack<T, N>(value);
}

template <typename T, std::size_t N>
DataPack<T, N> pack_from_array(std::span<const T> values) {
  return DataPack<T, N>::from_span(values);
}

}  // namespace dfsim
