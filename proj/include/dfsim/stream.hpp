#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "dfsim/diagnostics.hpp"

namespace dfsim {

/// Whether a full channel blocks the producer (hardware behavior) or grows
/// past its depth while counting the violation (naive sequential emulation).
enum class BoundMode { Enforced, Elastic };

/// Inert hardware mapping hint; has no behavioral effect.
enum class StorageHint { Auto, SRL, LUTRAM, BRAM, UltraRAM };

struct StreamConfig {
  std::string name = "stream";
  /// Channel capacity in elements. Defaults to 2 (a ping-pong buffer).
  std::size_t depth = 2;
  /// Per-stream override of the blocked-operation warning interval.
  std::optional<std::chrono::milliseconds> warn_timeout;
  BoundMode bound_mode = BoundMode::Enforced;
  StorageHint storage = StorageHint::Auto;
};

/// Thrown by pop() when the stream is closed and drained.
class EndOfStream : public std::runtime_error {
 public:
  explicit EndOfStream(const std::string& stream)
      : std::runtime_error("pop from closed and empty stream '" + stream +
                           "'") {}
};

namespace detail {

/// Shared bookkeeping that outlives the stream object itself, so dataflow
/// regions can collect diagnostics after their streams are gone.
struct StreamState {
  StreamState(std::string name_, std::size_t depth_,
              std::chrono::milliseconds warn_timeout_, bool elastic_)
      : name(std::move(name_)),
        depth(depth_),
        warn_timeout(warn_timeout_),
        elastic(elastic_) {}

  const std::string name;
  const std::size_t depth;
  const std::chrono::milliseconds warn_timeout;
  std::atomic<bool> elastic;
  std::atomic<std::uint64_t> push_warnings{0};
  std::atomic<std::uint64_t> pop_warnings{0};
  std::atomic<std::uint64_t> bound_violations{0};

  StreamDiagnostics snapshot() const {
    StreamDiagnostics d;
    d.name = name;
    d.push_warnings = push_warnings.load(std::memory_order_relaxed);
    d.pop_warnings = pop_warnings.load(std::memory_order_relaxed);
    d.bound_violations = bound_violations.load(std::memory_order_relaxed);
    return d;
  }
};

/// Hook installed by dataflow.cpp; attaches newly created streams to the
/// innermost open region on the constructing thread, if any.
void attach_to_current_region(const std::shared_ptr<StreamState>& state);

}  // namespace detail

/// Bounded, thread-safe FIFO channel with blocking push/pop and starvation
/// warnings, emulating a hardware FIFO between processing elements.
///
/// Any operation may be called from any thread. A blocked push or pop emits
/// one warning (naming the stream and the operation) per warn-timeout
/// interval elapsed, both to the process warning sink and to the stream's
/// own counters.
template <typename T>
class Stream {
 public:
  explicit Stream(StreamConfig config = {}) : config_(std::move(config)) {
    if (config_.depth < 1) {
      throw std::invalid_argument("stream '" + config_.name +
                                  "': depth must be at least 1");
    }
    const auto timeout = config_.warn_timeout.value_or(default_warn_timeout());
    if (timeout.count() <= 0) {
      throw std::invalid_argument("stream '" + config_.name +
                                  "': warn_timeout must be positive");
    }
    state_ = std::make_shared<detail::StreamState>(
        config_.name, config_.depth, timeout,
        config_.bound_mode == BoundMode::Elastic);
    detail::attach_to_current_region(state_);
  }

  Stream(std::string name, std::size_t depth)
      : Stream(StreamConfig{.name = std::move(name), .depth = depth}) {}

  Stream(const Stream&) = delete;
  Stream& operator=(const Stream&) = delete;

  /// Appends a value, blocking while the channel is full (Enforced mode).
  /// In Elastic mode never blocks; growth past the depth is counted as a
  /// bound violation instead.
  void push(T value) {
    std::unique_lock lock(mutex_);
    if (closed_) {
      throw std::logic_error("push to closed stream '" + state_->name + "'");
    }
    if (!elastic()) {
      wait_or_warn(lock, StreamOp::Push, [&] {
        return closed_ || buffer_.size() < state_->depth;
      });
      if (closed_) {
        throw std::logic_error("push to closed stream '" + state_->name +
                               "'");
      }
    } else if (buffer_.size() + 1 > state_->depth) {
      state_->bound_violations.fetch_add(1, std::memory_order_relaxed);
    }
    buffer_.push_back(std::move(value));
    lock.unlock();
    not_empty_.notify_one();
  }

  /// Removes and returns the oldest element, blocking while empty. Signals
  /// end-of-stream once the channel is closed and drained.
  T pop() {
    std::unique_lock lock(mutex_);
    wait_or_warn(lock, StreamOp::Pop,
                 [&] { return closed_ || !buffer_.empty(); });
    if (buffer_.empty()) {
      throw EndOfStream(state_->name);
    }
    T value = std::move(buffer_.front());
    buffer_.pop_front();
    lock.unlock();
    not_full_.notify_one();
    return value;
  }

  /// Non-blocking push; reports failure instead of waiting on a full (or
  /// closed) channel. Never emits warnings.
  bool try_push(T value) {
    {
      std::lock_guard lock(mutex_);
      if (closed_) {
        return false;
      }
      if (buffer_.size() >= state_->depth) {
        if (!elastic()) {
          return false;
        }
        state_->bound_violations.fetch_add(1, std::memory_order_relaxed);
      }
      buffer_.push_back(std::move(value));
    }
    not_empty_.notify_one();
    return true;
  }

  /// Non-blocking pop; empty result when nothing is buffered.
  std::optional<T> try_pop() {
    std::optional<T> value;
    {
      std::lock_guard lock(mutex_);
      if (buffer_.empty()) {
        return std::nullopt;
      }
      value = std::move(buffer_.front());
      buffer_.pop_front();
    }
    not_full_.notify_one();
    return value;
  }

  /// Marks the stream closed: pending and future pops drain the buffer and
  /// then signal end-of-stream; pushes become errors. Hardware FIFOs have no
  /// such notion; this exists so finite emulations can shut down cleanly.
  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  bool closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
  }

  std::size_t occupancy() const {
    std::lock_guard lock(mutex_);
    return buffer_.size();
  }

  const StreamConfig& config() const { return config_; }
  const std::string& name() const { return state_->name; }
  StreamDiagnostics diagnostics() const { return state_->snapshot(); }

  /// Shared diagnostics state, used by DataflowRegion bookkeeping.
  const std::shared_ptr<detail::StreamState>& state() const { return state_; }

 private:
  bool elastic() const {
    return state_->elastic.load(std::memory_order_relaxed);
  }

  /// Waits until `ready` holds, emitting one warning per full warn-timeout
  /// interval spent blocked.
  template <typename Pred>
  void wait_or_warn(std::unique_lock<std::mutex>& lock, StreamOp op,
                    Pred ready) {
    if (ready()) {
      return;
    }
    auto& cv = op == StreamOp::Push ? not_full_ : not_empty_;
    const auto started = std::chrono::steady_clock::now();
    while (!ready()) {
      if (cv.wait_for(lock, state_->warn_timeout) ==
              std::cv_status::timeout &&
          !ready()) {
        const auto waited =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started);
        auto& counter = op == StreamOp::Push ? state_->push_warnings
                                             : state_->pop_warnings;
        counter.fetch_add(1, std::memory_order_relaxed);
        StreamWarning warning;
        warning.stream = state_->name;
        warning.op = op;
        warning.waited = waited;
        warning.message = "stream '" + state_->name + "' " + to_string(op) +
                          " blocked for " + std::to_string(waited.count()) +
                          " ms";
        lock.unlock();
        emit_warning(warning);
        lock.lock();
      }
    }
  }

  StreamConfig config_;
  std::shared_ptr<detail::StreamState> state_;
  mutable std::mutex mutex_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> buffer_;
  bool closed_ = false;
};

}  // namespace dfsim
