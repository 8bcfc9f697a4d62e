#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfsim/dataflow.hpp"

namespace dfsim {

/// FNV-1a 64-bit digest, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::span<const std::byte> data);
std::string checksum_hex(std::span<const std::byte> data);

enum class RunOutcome { Ok, Failed, Watchdog };

const char* to_string(RunOutcome outcome);

/// Per-stream warning tally keyed by operation, as surfaced in reports.
struct StreamWarningCount {
  std::string stream;
  std::string operation;
  std::uint64_t count = 0;
};

struct BoundViolationCount {
  std::string stream;
  std::uint64_t count = 0;
};

/// Machine-readable result of one CLI pipeline run. The JSON field set is
/// identical for every pipeline.
struct RunReport {
  std::string pipeline;
  nlohmann::json parameters = nlohmann::json::object();
  RunOutcome outcome = RunOutcome::Ok;
  std::string checksum;
  std::optional<std::string> output_file;
  std::vector<StreamWarningCount> stream_warnings;
  std::vector<BoundViolationCount> bound_violations;
  std::vector<PeStatus> pe_status;
  double duration_ms = 0.0;

  nlohmann::json to_json() const;
};

/// Folds a finalized dataflow report into the run report's diagnostics.
void merge_dataflow_report(RunReport& run, const DataflowReport& report);

}  // namespace dfsim
