#include "dfsim/report.hpp"

#include <cstdio>

namespace dfsim {

std::uint64_t fnv1a64(std::span<const std::byte> data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::byte b : data) {
    hash ^= static_cast<std::uint64_t>(b);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string checksum_hex(std::span<const std::byte> data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return std::string(buf);
}

const char* to_string(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::Ok:
      return "ok";
    case RunOutcome::Failed:
      return "failed";
    case RunOutcome::Watchdog:
      return "watchdog";
  }
  return "unknown";
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : stream_warnings) {
    warnings.push_back({{"stream", w.stream},
                        {"operation", w.operation},
                        {"count", w.count}});
  }
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : bound_violations) {
    violations.push_back({{"stream", v.stream}, {"count", v.count}});
  }
  nlohmann::json pes = nlohmann::json::array();
  for (const auto& pe : pe_status) {
    pes.push_back({{"name", pe.name}, {"ok", pe.ok}, {"error", pe.error}});
  }
  return nlohmann::json{
      {"pipeline", pipeline},
      {"parameters", parameters},
      {"outcome", to_string(outcome)},
      {"outputs",
       {{"checksum", checksum},
        {"file", output_file ? nlohmann::json(*output_file)
                             : nlohmann::json(nullptr)}}},
      {"diagnostics",
       {{"stream_warnings", warnings},
        {"bound_violations", violations},
        {"pe_status", pes}}},
      {"duration_ms", duration_ms},
  };
}

void merge_dataflow_report(RunReport& run, const DataflowReport& report) {
  run.pe_status.insert(run.pe_status.end(), report.pes.begin(),
                       report.pes.end());
  for (const auto& s : report.streams) {
    if (s.push_warnings > 0) {
      run.stream_warnings.push_back({s.name, "push", s.push_warnings});
    }
    if (s.pop_warnings > 0) {
      run.stream_warnings.push_back({s.name, "pop", s.pop_warnings});
    }
    if (s.bound_violations > 0) {
      run.bound_violations.push_back({s.name, s.bound_violations});
    }
  }
}

}  // namespace dfsim
