#include "dfsim/diagnostics.hpp"

#include <atomic>
#include <cstdio>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dfsim {

namespace {

std::mutex g_sink_mutex;
std::shared_ptr<const WarningSink> g_warning_sink;
std::shared_ptr<const NoteSink> g_note_sink;
std::vector<std::shared_ptr<const WarningSink>> g_sink_stack;

std::atomic<std::int64_t> g_default_warn_timeout_ms{3000};

void default_warning_printer(const StreamWarning& w) {
  std::fprintf(stderr, "dfsim: %s\n", w.message.c_str());
  std::fflush(stderr);
}

void default_note_printer(std::string_view note) {
  std::fprintf(stderr, "dfsim: note: %.*s\n", static_cast<int>(note.size()),
               note.data());
}

}  // namespace

const char* to_string(StreamOp op) {
  return op == StreamOp::Push ? "push" : "pop";
}

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_warning_sink =
      sink ? std::make_shared<const WarningSink>(std::move(sink)) : nullptr;
}

void emit_warning(const StreamWarning& warning) {
  std::shared_ptr<const WarningSink> sink;
  {
    std::lock_guard lock(g_sink_mutex);
    sink = g_warning_sink;
  }
  if (sink) {
    (*sink)(warning);
  } else {
    default_warning_printer(warning);
  }
}

void set_note_sink(NoteSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_note_sink =
      sink ? std::make_shared<const NoteSink>(std::move(sink)) : nullptr;
}

void emit_note(std::string_view note) {
  std::shared_ptr<const NoteSink> sink;
  {
    std::lock_guard lock(g_sink_mutex);
    sink = g_note_sink;
  }
  if (sink) {
    (*sink)(note);
  } else {
    default_note_printer(note);
  }
}

ScopedWarningSink::ScopedWarningSink(WarningSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_sink_stack.push_back(g_warning_sink);
  g_warning_sink =
      sink ? std::make_shared<const WarningSink>(std::move(sink)) : nullptr;
}

ScopedWarningSink::~ScopedWarningSink() {
  std::lock_guard lock(g_sink_mutex);
  g_warning_sink = g_sink_stack.back();
  g_sink_stack.pop_back();
}

std::chrono::milliseconds default_warn_timeout() {
  return std::chrono::milliseconds(
      g_default_warn_timeout_ms.load(std::memory_order_relaxed));
}

void set_default_warn_timeout(std::chrono::milliseconds timeout) {
  if (timeout.count() <= 0) {
    throw std::invalid_argument("warn timeout must be positive");
  }
  g_default_warn_timeout_ms.store(timeout.count(), std::memory_order_relaxed);
}

}  // namespace dfsim
