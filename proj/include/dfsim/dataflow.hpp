#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "dfsim/stream.hpp"

namespace dfsim {

/// Concurrent runs every processing element on its own thread, reproducing
/// hardware semantics; Sequential runs each body to completion at
/// registration time, reproducing naive software-emulation semantics.
enum class DataflowMode { Concurrent, Sequential };

struct PeStatus {
  std::string name;
  bool ok = true;
  std::string error;
};

struct DataflowReport {
  std::vector<PeStatus> pes;
  std::vector<StreamDiagnostics> streams;
  double duration_ms = 0.0;

  bool ok() const {
    for (const auto& pe : pes) {
      if (!pe.ok) return false;
    }
    return true;
  }
};

/// Lifecycle manager for a set of processing elements. Streams constructed
/// on the controlling thread while the region is open attach to it
/// automatically, so their diagnostics land in the finalize report; in
/// Sequential mode attached streams are switched to elastic bounds, since a
/// producer running to completion ahead of its consumer must not block.
class DataflowRegion {
 public:
  explicit DataflowRegion(DataflowMode mode);
  ~DataflowRegion();

  DataflowRegion(const DataflowRegion&) = delete;
  DataflowRegion& operator=(const DataflowRegion&) = delete;

  DataflowMode mode() const { return mode_; }

  /// Registers a processing element. Concurrent mode launches the body on
  /// its own thread immediately; Sequential mode runs it to completion
  /// before returning (failures propagate to the caller).
  void register_pe(std::string name, std::function<void()> body);

  /// Blocks until every processing element has terminated, then reports
  /// per-PE status and per-stream diagnostics. A region whose elements are
  /// deadlocked never returns; the streams involved keep emitting timeout
  /// warnings, which is the observable the emulator provides.
  DataflowReport finalize();

  /// Adds a stream's diagnostics to this region's report. Called implicitly
  /// for streams constructed on the controlling thread while open.
  void attach_stream(std::shared_ptr<detail::StreamState> state);

  /// Innermost open region on the calling thread, if any.
  static DataflowRegion* current();

 private:
  struct Pe {
    std::string name;
    std::function<void()> body;
    std::thread thread;
    bool ok = true;
    std::string error;
  };

  enum class State { Open, Finalized };

  void run_pe(Pe& pe);

  const DataflowMode mode_;
  State state_ = State::Open;
  std::deque<Pe> pes_;
  std::mutex streams_mutex_;
  std::vector<std::shared_ptr<detail::StreamState>> streams_;
  std::chrono::steady_clock::time_point started_;
};

struct DivergenceResult {
  std::vector<std::int32_t> output;
  DataflowReport report;
};

/// Three processing elements (Read, Compute, Write) sharing one memory
/// region through depth-1 channels, with Compute fixed to `x + 1`. Run
/// Concurrent, iteration t reads what iteration t-1 wrote and the result is
/// input + t_iterations; run Sequential, every iteration re-reads the
/// original memory and the result is input + 1 regardless of t_iterations.
DivergenceResult run_divergence_demo(int t_iterations, int n_elements,
                                     DataflowMode mode,
                                     std::vector<std::int32_t> input);

struct FeedbackResult {
  bool completed = true;
  DataflowReport report;
};

/// Two processing elements in a cycle where the producer runs `latency`
/// iterations ahead of the values returned on the feedback channel. The
/// feedback channel needs capacity 2 to sustain latency 4 alongside the
/// depth-1 forward channel; constructed with feedback_depth 1 the pair
/// deadlocks, emitting blocked-channel warnings forever.
FeedbackResult run_feedback_demo(std::size_t feedback_depth,
                                 std::size_t rounds, std::size_t latency);

}  // namespace dfsim
