#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace dfsim {

enum class StreamOp { Push, Pop };

const char* to_string(StreamOp op);

/// A single blocked-channel warning, emitted each time a blocking push or
/// pop has waited one full warn-timeout interval without making progress.
struct StreamWarning {
  std::string stream;
  StreamOp op = StreamOp::Push;
  std::chrono::milliseconds waited{0};
  std::string message;
};

using WarningSink = std::function<void(const StreamWarning&)>;
using NoteSink = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink. The default sink prints to
/// standard error. Passing an empty function restores the default.
void set_warning_sink(WarningSink sink);
void emit_warning(const StreamWarning& warning);

/// Informational notes (configuration smells, non-fatal conditions).
void set_note_sink(NoteSink sink);
void emit_note(std::string_view note);

/// Restores the previous sink on destruction. Test helper.
class ScopedWarningSink {
 public:
  explicit ScopedWarningSink(WarningSink sink);
  ~ScopedWarningSink();
  ScopedWarningSink(const ScopedWarningSink&) = delete;
  ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;
};

/// Counter snapshot of one stream's diagnostics.
struct StreamDiagnostics {
  std::string name;
  std::uint64_t push_warnings = 0;
  std::uint64_t pop_warnings = 0;
  std::uint64_t bound_violations = 0;
};

/// Process-wide default for StreamConfig::warn_timeout when left unset.
std::chrono::milliseconds default_warn_timeout();
void set_default_warn_timeout(std::chrono::milliseconds timeout);

}  // namespace dfsim
