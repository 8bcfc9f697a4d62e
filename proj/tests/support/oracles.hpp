// Independent reference implementations used to derive expected values.
// These deliberately avoid the library's code paths: the shift oracle is a
// full-array shift, the tree oracle is a stack-based evaluator over index
// ranges, and the stencil oracle works on the materialized grid.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stack>
#include <vector>

namespace oracles {

/// Full-array delay line: slot k holds the value supplied k steps ago.
template <typename T>
class ShiftOracle {
 public:
  ShiftOracle(std::size_t capacity, T fill) : slots_(capacity, fill) {}

  void shift(T value) {
    for (std::size_t k = slots_.size() - 1; k > 0; --k) {
      slots_[k] = slots_[k - 1];
    }
    slots_[0] = value;
  }

  T at(std::size_t k) const { return slots_[k]; }

 private:
  std::vector<T> slots_;
};

/// 4-point average of interior cells on the materialized grid, in the same
/// association order as the streamed stencil: ((north + east) + west) +
/// south, scaled by 0.25. Row-major outputs for rows 1..H-2, cols 1..W-2.
template <typename T>
std::vector<T> stencil4_oracle(const std::vector<T>& grid, std::size_t h,
                               std::size_t w) {
  std::vector<T> out;
  out.reserve((h - 2) * (w - 2));
  auto cell = [&](std::size_t i, std::size_t j) { return grid[i * w + j]; };
  for (std::size_t i = 1; i + 1 < h; ++i) {
    for (std::size_t j = 1; j + 1 < w; ++j) {
      const T sum = ((cell(i - 1, j) + cell(i, j + 1)) + cell(i, j - 1)) +
                    cell(i + 1, j);
      out.push_back(static_cast<T>(0.25) * sum);
    }
  }
  return out;
}

/// Balanced-tree reduction evaluated iteratively over explicit index
/// ranges, splitting [lo, hi) at lo + (hi - lo) / 2.
template <typename T, typename Op>
T tree_oracle(std::span<const T> values, Op op) {
  if (values.empty()) return op.identity();

  struct Frame {
    std::size_t lo, hi;
    bool expanded;
  };
  std::stack<Frame> work;
  std::stack<T> results;
  work.push({0, values.size(), false});
  while (!work.empty()) {
    Frame frame = work.top();
    work.pop();
    if (frame.hi - frame.lo == 1) {
      results.push(values[frame.lo]);
      continue;
    }
    if (!frame.expanded) {
      work.push({frame.lo, frame.hi, true});
      const std::size_t mid = frame.lo + (frame.hi - frame.lo) / 2;
      // Right evaluated after left so the result stack pops right first.
      work.push({mid, frame.hi, false});
      work.push({frame.lo, mid, false});
    } else {
      const T right = results.top();
      results.pop();
      const T left = results.top();
      results.pop();
      results.push(op.apply(left, right));
    }
  }
  return results.top();
}

/// Left-to-right fold seeded with the operator identity.
template <typename T, typename Op>
T left_fold(std::span<const T> values, Op op) {
  T acc = op.identity();
  for (const T& v : values) acc = op.apply(acc, v);
  return acc;
}

/// Round-robin partial registers then a left-to-right collapse, per block.
template <typename T, typename Op>
std::vector<T> accumulate_oracle(std::span<const T> values, std::size_t size,
                                 std::size_t iterations, std::size_t latency,
                                 Op op) {
  std::vector<T> out;
  for (std::size_t r = 0; r < iterations; ++r) {
    std::vector<T> partial(latency, op.identity());
    for (std::size_t i = 0; i < size; ++i) {
      partial[i % latency] =
          op.apply(partial[i % latency], values[r * size + i]);
    }
    T acc = partial[0];
    for (std::size_t k = 1; k < latency; ++k) acc = op.apply(acc, partial[k]);
    out.push_back(acc);
  }
  return out;
}

/// One pass of the divergence demo's reference computation.
inline std::vector<std::int32_t> increment_pass(
    std::vector<std::int32_t> values) {
  for (auto& v : values) v += 1;
  return values;
}

}  // namespace oracles
