#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dfsim/dataflow.hpp"

namespace dfsim {

/// Output bytes plus diagnostics of one named pipeline run. Output is the
/// little-endian packed element sequence (the CLI grid/element format).
struct PipelineOutput {
  std::vector<std::byte> bytes;
  std::size_t element_count = 0;
  std::string element_type;
  DataflowReport report;
};

PipelineOutput run_divergence_pipeline(int t_iterations, int n_elements,
                                       DataflowMode mode);

/// Streams `grid` (row-major height x width f32) through the shift-register
/// stencil inside a concurrent region.
PipelineOutput run_stencil_pipeline(std::size_t height, std::size_t width,
                                    std::vector<float> grid);

/// `count` random packs of `lanes` doubles in [0, 1), tree-reduced per pack.
/// Lanes must be a power of two in [1, 64].
PipelineOutput run_reduce_pipeline(std::size_t count, std::size_t lanes,
                                   const std::string& op, std::uint64_t seed);

/// Random doubles in [0, 1) fed through the two-stage accumulator.
PipelineOutput run_accumulate_pipeline(std::size_t size, std::size_t latency,
                                       std::size_t iterations,
                                       const std::string& op,
                                       std::uint64_t seed);

/// The portable host-code flow: n floats of 5.0 into a read buffer on bank
/// 0, a synchronous copy kernel into a write buffer on bank 1, copy back.
PipelineOutput run_hostdemo_pipeline(std::size_t n);

/// Two-PE cyclic design whose feedback channel needs depth 2; with depth 1
/// it deadlocks and never returns (the CLI watchdog turns that into a
/// reportable outcome).
PipelineOutput run_feedback_pipeline(std::size_t feedback_depth,
                                     std::size_t rounds, std::size_t latency);

/// Deterministic pseudo-random row-major grid in [0, 1).
std::vector<float> random_grid(std::size_t height, std::size_t width,
                               std::uint64_t seed);

/// Reads a row-major f32 grid: raw little-endian ("bin") or comma/newline
/// separated ("csv"). The element count must be exactly height * width.
std::vector<float> load_grid(const std::string& path, std::size_t height,
                             std::size_t width, const std::string& format);

}  // namespace dfsim
