#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfsim/dataflow.hpp"
#include "dfsim/stream.hpp"

namespace dfsim {

struct AccumulateConfig {
  /// Values folded into each result.
  std::size_t size = 0;
  /// Back-to-back accumulations performed.
  std::size_t iterations = 1;
  /// Partial-result registers circulating on the feedback channel. Stands
  /// in for the hardware operator latency; size must be at least this
  /// large or the feedback loop starves.
  std::size_t latency = 16;
};

/// Pipelined accumulation over a stream as three processing elements in a
/// cycle: a fold stage combines each incoming value with the partial
/// register that comes back on the feedback channel (register v mod latency
/// within each block), a routing stage returns partials to the fold stage
/// until the block ends and then hands the final registers onward in
/// register order, and a collapse stage folds the registers left to right
/// into one result per block. Emits exactly `iterations` results.
///
/// The reassociation is deterministic: result r equals folding the final
/// registers 0..L-1 of block r in ascending order, each register being the
/// in-order fold of the block values assigned to it.
template <typename T, typename Op>
void accumulate_pipeline(Stream<T>& in, Stream<T>& out,
                         const AccumulateConfig& config, Op op = {}) {
  const std::size_t size = config.size;
  const std::size_t latency = config.latency;
  const std::size_t iterations = config.iterations;
  if (latency < 1) {
    throw std::invalid_argument("accumulate: latency must be >= 1");
  }
  if (iterations < 1) {
    throw std::invalid_argument("accumulate: iterations must be >= 1");
  }
  if (size < latency) {
    throw std::invalid_argument(
        "accumulate: size (" + std::to_string(size) +
        ") must be at least the latency (" + std::to_string(latency) + ")");
  }
  if (size < 4 * latency) {
    emit_note("accumulate: size " + std::to_string(size) +
              " is less than 4x the latency " + std::to_string(latency) +
              "; the pipeline degrades to near-sequential progress");
  }

  DataflowRegion region(DataflowMode::Concurrent);
  Stream<T> feedback({.name = "accumulate_feedback", .depth = 2});
  Stream<T> partials({.name = "accumulate_partials", .depth = latency});
  Stream<T> collapse({.name = "accumulate_collapse", .depth = 2});

  region.register_pe("AccumulateIterate", [&] {
    for (std::size_t r = 0; r < iterations; ++r) {
      for (std::size_t i = 0; i < size; ++i) {
        const T value = in.pop();
        const T partial = i < latency ? op.identity() : partials.pop();
        feedback.push(op.apply(partial, value));
      }
    }
  });
  region.register_pe("AccumulateFeedback", [&] {
    std::vector<T> tail(latency, op.identity());
    for (std::size_t r = 0; r < iterations; ++r) {
      for (std::size_t i = 0; i < size; ++i) {
        const T value = feedback.pop();
        if (i + latency < size) {
          partials.push(value);
        } else {
          tail[i % latency] = value;
        }
      }
      for (std::size_t k = 0; k < latency; ++k) {
        collapse.push(tail[k]);
      }
    }
  });
  region.register_pe("AccumulateReduce", [&] {
    for (std::size_t r = 0; r < iterations; ++r) {
      T acc = collapse.pop();
      for (std::size_t k = 1; k < latency; ++k) {
        acc = op.apply(acc, collapse.pop());
      }
      out.push(acc);
    }
  });

  const DataflowReport report = region.finalize();
  for (const auto& pe : report.pes) {
    if (!pe.ok) {
      throw std::runtime_error("accumulate: " + pe.name +
                               " failed: " + pe.error);
    }
  }
}

}  // namespace dfsim
