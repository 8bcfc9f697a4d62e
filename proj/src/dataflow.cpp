#include "dfsim/dataflow.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <utility>

namespace dfsim {

namespace {

thread_local std::vector<DataflowRegion*> t_open_regions;

}  // namespace

namespace detail {

void attach_to_current_region(const std::shared_ptr<StreamState>& state) {
  if (DataflowRegion* region = DataflowRegion::current()) {
    region->attach_stream(state);
  }
}

}  // namespace detail

DataflowRegion* DataflowRegion::current() {
  return t_open_regions.empty() ? nullptr : t_open_regions.back();
}

DataflowRegion::DataflowRegion(DataflowMode mode)
    : mode_(mode), started_(std::chrono::steady_clock::now()) {
  t_open_regions.push_back(this);
}

DataflowRegion::~DataflowRegion() {
  for (auto& pe : pes_) {
    if (pe.thread.joinable()) {
      pe.thread.join();
    }
  }
  auto it = std::find(t_open_regions.begin(), t_open_regions.end(), this);
  if (it != t_open_regions.end()) {
    t_open_regions.erase(it);
  }
}

void DataflowRegion::attach_stream(
    std::shared_ptr<detail::StreamState> state) {
  if (mode_ == DataflowMode::Sequential) {
    state->elastic.store(true, std::memory_order_relaxed);
  }
  std::lock_guard lock(streams_mutex_);
  streams_.push_back(std::move(state));
}

void DataflowRegion::run_pe(Pe& pe) {
  try {
    pe.body();
  } catch (const std::exception& e) {
    pe.ok = false;
    pe.error = e.what();
  } catch (...) {
    pe.ok = false;
    pe.error = "unknown error";
  }
}

void DataflowRegion::register_pe(std::string name,
                                 std::function<void()> body) {
  if (state_ != State::Open) {
    throw std::logic_error("register_pe on finalized dataflow region");
  }
  for (const auto& pe : pes_) {
    if (pe.name == name) {
      throw std::invalid_argument("duplicate processing element name '" +
                                  name + "'");
    }
  }
  Pe& pe = pes_.emplace_back();
  pe.name = std::move(name);
  pe.body = std::move(body);
  if (mode_ == DataflowMode::Concurrent) {
    pe.thread = std::thread([this, &pe] { run_pe(pe); });
  } else {
    run_pe(pe);
    if (!pe.ok) {
      throw std::runtime_error("processing element '" + pe.name +
                               "' failed: " + pe.error);
    }
  }
}

DataflowReport DataflowRegion::finalize() {
  if (state_ != State::Open) {
    throw std::logic_error("finalize on finalized dataflow region");
  }
  for (auto& pe : pes_) {
    if (pe.thread.joinable()) {
      pe.thread.join();
    }
  }
  state_ = State::Finalized;
  auto it = std::find(t_open_regions.begin(), t_open_regions.end(), this);
  if (it != t_open_regions.end()) {
    t_open_regions.erase(it);
  }

  DataflowReport report;
  report.duration_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started_)
                           .count();
  for (const auto& pe : pes_) {
    report.pes.push_back({pe.name, pe.ok, pe.error});
  }
  {
    std::lock_guard lock(streams_mutex_);
    for (const auto& state : streams_) {
      report.streams.push_back(state->snapshot());
    }
  }
  return report;
}

DivergenceResult run_divergence_demo(int t_iterations, int n_elements,
                                     DataflowMode mode,
                                     std::vector<std::int32_t> input) {
  if (t_iterations < 1) {
    throw std::invalid_argument("divergence demo: t_iterations must be >= 1");
  }
  if (n_elements < 2) {
    throw std::invalid_argument(
        "divergence demo: n_elements must be at least twice the channel "
        "depth (2)");
  }
  if (input.size() != static_cast<std::size_t>(n_elements)) {
    throw std::invalid_argument(
        "divergence demo: input length must equal n_elements");
  }

  const std::int64_t total =
      static_cast<std::int64_t>(t_iterations) * n_elements;

  DivergenceResult result;
  result.output = std::move(input);
  auto* mem = result.output.data();

  DataflowRegion region(mode);
  Stream<std::int32_t> s0({.name = "s0", .depth = 1});
  Stream<std::int32_t> s1({.name = "s1", .depth = 1});

  // Tracks how many elements Write has stored. The concurrent Read gates on
  // it so that iteration t observes iteration t-1's stores for any valid N;
  // with depth-1 channels the pipeline only holds ~4 elements in flight, so
  // for N well above that the guard never actually waits.
  std::atomic<std::int64_t> stores_done{0};

  region.register_pe("Read", [&] {
    for (int t = 0; t < t_iterations; ++t) {
      for (int i = 0; i < n_elements; ++i) {
        if (mode == DataflowMode::Concurrent && t > 0) {
          const std::int64_t k =
              static_cast<std::int64_t>(t) * n_elements + i;
          const std::int64_t needed = k - n_elements + 1;
          std::int64_t done = stores_done.load(std::memory_order_acquire);
          while (done < needed) {
            stores_done.wait(done, std::memory_order_acquire);
            done = stores_done.load(std::memory_order_acquire);
          }
        }
        s0.push(std::atomic_ref(mem[i]).load(std::memory_order_relaxed));
      }
    }
  });
  region.register_pe("Compute", [&] {
    for (std::int64_t k = 0; k < total; ++k) {
      const std::int32_t read = s0.pop();
      const std::int32_t res = read + 1;
      s1.push(res);
    }
  });
  region.register_pe("Write", [&] {
    for (int t = 0; t < t_iterations; ++t) {
      for (int i = 0; i < n_elements; ++i) {
        std::atomic_ref(mem[i]).store(s1.pop(), std::memory_order_relaxed);
        stores_done.fetch_add(1, std::memory_order_release);
        stores_done.notify_all();
      }
    }
  });

  result.report = region.finalize();
  return result;
}

FeedbackResult run_feedback_demo(std::size_t feedback_depth,
                                 std::size_t rounds, std::size_t latency) {
  if (feedback_depth < 1 || latency < 1 || rounds <= latency) {
    throw std::invalid_argument(
        "feedback demo: requires feedback_depth >= 1, latency >= 1, rounds "
        "> latency");
  }

  DataflowRegion region(DataflowMode::Concurrent);
  Stream<std::int64_t> forward({.name = "forward", .depth = 1});
  Stream<std::int64_t> feedback(
      {.name = "feedback", .depth = feedback_depth});

  region.register_pe("Producer", [&] {
    for (std::size_t i = 0; i < rounds; ++i) {
      if (i >= latency) {
        (void)feedback.pop();
      }
      forward.push(static_cast<std::int64_t>(i));
    }
  });
  region.register_pe("Consumer", [&] {
    for (std::size_t i = 0; i < rounds; ++i) {
      const std::int64_t value = forward.pop();
      if (i + latency < rounds) {
        feedback.push(value);
      }
    }
  });

  FeedbackResult result;
  result.report = region.finalize();
  result.completed = result.report.ok();
  return result;
}

}  // namespace dfsim
