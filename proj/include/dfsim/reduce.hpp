#pragma once

#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>

#include "dfsim/datapack.hpp"
#include "dfsim/stream.hpp"

namespace dfsim {

/// Binary operator functors with identities. Each satisfies
/// apply(identity, x) == apply(x, identity) == x.
namespace ops {

template <typename T>
  requires std::is_arithmetic_v<T>
struct Add {
  static constexpr T apply(T a, T b) { return static_cast<T>(a + b); }
  static constexpr T identity() { return T{0}; }
};

template <typename T>
  requires std::is_arithmetic_v<T>
struct Multiply {
  static constexpr T apply(T a, T b) { return static_cast<T>(a * b); }
  static constexpr T identity() { return T{1}; }
};

template <typename T>
  requires std::is_arithmetic_v<T>
struct Min {
  static constexpr T apply(T a, T b) { return b < a ? b : a; }
  static constexpr T identity() {
    if constexpr (std::numeric_limits<T>::has_infinity) {
      return std::numeric_limits<T>::infinity();
    } else {
      return std::numeric_limits<T>::max();
    }
  }
};

template <typename T>
  requires std::is_arithmetic_v<T>
struct Max {
  static constexpr T apply(T a, T b) { return a < b ? b : a; }
  static constexpr T identity() {
    if constexpr (std::numeric_limits<T>::has_infinity) {
      return -std::numeric_limits<T>::infinity();
    } else {
      return std::numeric_limits<T>::lowest();
    }
  }
};

template <std::integral T>
struct BitAnd {
  static constexpr T apply(T a, T b) { return static_cast<T>(a & b); }
  static constexpr T identity() { return static_cast<T>(~T{0}); }
};

template <std::integral T>
struct BitOr {
  static constexpr T apply(T a, T b) { return static_cast<T>(a | b); }
  static constexpr T identity() { return T{0}; }
};

}  // namespace ops

namespace detail {

template <typename T, typename Op>
T tree_reduce_impl(std::span<const T> values, Op op, std::size_t& depth) {
  if (values.size() == 1) {
    depth = 0;
    return values[0];
  }
  const std::size_t half = values.size() / 2;
  std::size_t left_depth = 0;
  std::size_t right_depth = 0;
  const T left = tree_reduce_impl(values.first(half), op, left_depth);
  const T right = tree_reduce_impl(values.subspan(half), op, right_depth);
  depth = 1 + (left_depth > right_depth ? left_depth : right_depth);
  return op.apply(left, right);
}

}  // namespace detail

/// Balanced binary tree reduction with a fixed association order: the value
/// list splits into a floor(n/2) left half and the remainder, recursively.
/// The order is part of the contract, so floating-point results are
/// bit-reproducible. Empty input yields the operator identity.
template <typename T, typename Op>
T tree_reduce(std::span<const T> values, Op op = {}) {
  if (values.empty()) {
    return op.identity();
  }
  std::size_t depth = 0;
  return detail::tree_reduce_impl(values, op, depth);
}

/// Instrumented variant exposing the recursion depth (ceil(log2 n) for
/// n >= 1).
template <typename T, typename Op>
std::pair<T, std::size_t> tree_reduce_with_depth(std::span<const T> values,
                                                 Op op = {}) {
  if (values.empty()) {
    return {op.identity(), 0};
  }
  std::size_t depth = 0;
  T value = detail::tree_reduce_impl(values, op, depth);
  return {value, depth};
}

/// Pops `count` packs and emits one tree-reduced scalar per pack, in order.
template <typename T, std::size_t N, typename Op>
void reduce_stream(Stream<DataPack<T, N>>& in, Stream<T>& out,
                   std::size_t count, Op op = {}) {
  for (std::size_t i = 0; i < count; ++i) {
    const DataPack<T, N> pack = in.pop();
    out.push(tree_reduce<T, Op>(pack.lanes(), op));
  }
}

}  // namespace dfsim
