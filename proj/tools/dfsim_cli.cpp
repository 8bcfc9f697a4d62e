// Command-line runner for the named example pipelines. Emits a JSON run
// report (stdout by default) and maps outcomes to exit codes:
// 0 ok, 1 failed, 2 watchdog, 64 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dfsim/diagnostics.hpp"
#include "dfsim/pipelines.hpp"
#include "dfsim/report.hpp"
#include "dfsim/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitWatchdog = 2;
constexpr int kExitUsage = 64;

/// Collects every stream warning emitted anywhere in the process, so a
/// watchdogged (deadlocked) run can still report what was blocking.
class WarningCollector {
 public:
  WarningCollector() {
    dfsim::set_warning_sink([this](const dfsim::StreamWarning& w) {
      std::cerr << "dfsim: " << w.message << std::endl;
      std::lock_guard lock(mutex_);
      counts_[{w.stream, dfsim::to_string(w.op)}]++;
    });
  }
  ~WarningCollector() { dfsim::set_warning_sink(nullptr); }

  std::vector<dfsim::StreamWarningCount> snapshot() const {
    std::lock_guard lock(mutex_);
    std::vector<dfsim::StreamWarningCount> out;
    for (const auto& [key, count] : counts_) {
      out.push_back({key.first, key.second, count});
    }
    return out;
  }

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts_;
};

struct RunOptions {
  std::string pipeline;
  std::string mode = "concurrent";
  int t_iterations = 3;
  int n_elements = 1024;
  std::size_t height = 16;
  std::size_t width = 16;
  std::string input;
  std::string format = "bin";
  std::size_t count = 1024;
  std::size_t lanes = 8;
  std::string op = "add";
  std::size_t size = 1024;
  std::size_t latency = 16;
  std::size_t iterations = 1;
  std::size_t depth = 1;
  std::size_t rounds = 16;
  std::size_t feedback_latency = 4;
  std::uint64_t seed = 42;
  std::int64_t stream_timeout_ms = 0;  // 0: keep default
  std::int64_t watchdog_ms = 30000;
  std::string report_path;
  std::string output_path;
};

void write_report(const dfsim::RunReport& report, const std::string& path) {
  const std::string text = report.to_json().dump(2);
  if (path.empty()) {
    std::cout << text << std::endl;
  } else {
    std::ofstream file(path);
    file << text << "\n";
  }
}

dfsim::PipelineOutput dispatch(const RunOptions& opt) {
  if (opt.pipeline == "divergence") {
    const auto mode = opt.mode == "sequential"
                          ? dfsim::DataflowMode::Sequential
                          : dfsim::DataflowMode::Concurrent;
    return dfsim::run_divergence_pipeline(opt.t_iterations, opt.n_elements,
                                          mode);
  }
  if (opt.pipeline == "stencil") {
    auto grid = opt.input.empty()
                    ? dfsim::random_grid(opt.height, opt.width, opt.seed)
                    : dfsim::load_grid(opt.input, opt.height, opt.width,
                                       opt.format);
    return dfsim::run_stencil_pipeline(opt.height, opt.width,
                                       std::move(grid));
  }
  if (opt.pipeline == "reduce") {
    return dfsim::run_reduce_pipeline(opt.count, opt.lanes, opt.op, opt.seed);
  }
  if (opt.pipeline == "accumulate") {
    return dfsim::run_accumulate_pipeline(opt.size, opt.latency,
                                          opt.iterations, opt.op, opt.seed);
  }
  if (opt.pipeline == "hostdemo") {
    return dfsim::run_hostdemo_pipeline(opt.count);
  }
  if (opt.pipeline == "feedback") {
    return dfsim::run_feedback_pipeline(opt.depth, opt.rounds,
                                        opt.feedback_latency);
  }
  throw CLI::ValidationError("unknown pipeline '" + opt.pipeline + "'");
}

int run_pipeline(const RunOptions& opt) {
  if (opt.mode != "concurrent" && opt.mode != "sequential") {
    std::cerr << "dfsim: --mode must be 'concurrent' or 'sequential'"
              << std::endl;
    return kExitUsage;
  }
  if (opt.stream_timeout_ms > 0) {
    dfsim::set_default_warn_timeout(
        std::chrono::milliseconds(opt.stream_timeout_ms));
  }

  WarningCollector collector;
  dfsim::RunReport report;
  report.pipeline = opt.pipeline;
  report.parameters = {
      {"mode", opt.mode},         {"t", opt.t_iterations},
      {"n", opt.n_elements},      {"height", opt.height},
      {"width", opt.width},       {"count", opt.count},
      {"lanes", opt.lanes},       {"op", opt.op},
      {"size", opt.size},         {"latency", opt.latency},
      {"iterations", opt.iterations}, {"depth", opt.depth},
      {"rounds", opt.rounds},     {"seed", opt.seed},
      {"watchdog_ms", opt.watchdog_ms},
  };

  const auto started = std::chrono::steady_clock::now();
  auto elapsed_ms = [&started] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - started)
        .count();
  };

  // The pipeline runs on a worker so an emulated deadlock can be turned
  // into a watchdog report instead of a hung process. A watchdogged worker
  // is unjoinable; the process exits without it.
  auto task = std::make_shared<std::packaged_task<dfsim::PipelineOutput()>>(
      [&opt] { return dispatch(opt); });
  auto future = task->get_future();
  std::thread worker([task] { (*task)(); });

  if (future.wait_for(std::chrono::milliseconds(opt.watchdog_ms)) !=
      std::future_status::ready) {
    worker.detach();
    report.outcome = dfsim::RunOutcome::Watchdog;
    report.stream_warnings = collector.snapshot();
    report.duration_ms = elapsed_ms();
    write_report(report, opt.report_path);
    std::cout.flush();
    std::cerr.flush();
    std::_Exit(kExitWatchdog);
  }
  worker.join();

  dfsim::PipelineOutput output;
  try {
    output = future.get();
  } catch (const CLI::ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    // Bad parameters surface before any PE ran; treat as usage.
    std::cerr << "dfsim: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::exception& e) {
    report.outcome = dfsim::RunOutcome::Failed;
    report.pe_status.push_back({"pipeline", false, e.what()});
    report.duration_ms = elapsed_ms();
    write_report(report, opt.report_path);
    return kExitFailed;
  }

  report.outcome = output.report.ok() ? dfsim::RunOutcome::Ok
                                      : dfsim::RunOutcome::Failed;
  dfsim::merge_dataflow_report(report, output.report);
  report.checksum = dfsim::checksum_hex(output.bytes);
  report.parameters["element_count"] = output.element_count;
  report.parameters["element_type"] = output.element_type;
  if (!opt.output_path.empty()) {
    std::ofstream file(opt.output_path, std::ios::binary);
    if (!file) {
      std::cerr << "dfsim: cannot write output file '" << opt.output_path
                << "'" << std::endl;
      return kExitUsage;
    }
    file.write(reinterpret_cast<const char*>(output.bytes.data()),
               static_cast<std::streamsize>(output.bytes.size()));
    report.output_file = opt.output_path;
  }
  report.duration_ms = elapsed_ms();
  write_report(report, opt.report_path);
  return report.outcome == dfsim::RunOutcome::Ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CPU emulation of pipelined hardware dataflow designs"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run = app.add_subcommand("run", "Run a named example pipeline");
  run->add_option("pipeline", opt.pipeline,
                  "One of: divergence, stencil, reduce, accumulate, "
                  "hostdemo, feedback")
      ->required();
  run->add_option("--mode", opt.mode, "divergence: concurrent|sequential");
  run->add_option("--t", opt.t_iterations, "divergence: outer iterations");
  run->add_option("--n", opt.n_elements, "divergence: elements");
  run->add_option("--height", opt.height, "stencil: grid height");
  run->add_option("--width", opt.width, "stencil: grid width");
  run->add_option("--input", opt.input, "stencil: grid file");
  run->add_option("--format", opt.format, "stencil: input format (bin|csv)");
  run->add_option("--count", opt.count,
                  "reduce: packs / hostdemo: elements");
  run->add_option("--lanes", opt.lanes, "reduce: pack width");
  run->add_option("--op", opt.op, "reduce/accumulate: operator");
  run->add_option("--size", opt.size, "accumulate: values per result");
  run->add_option("--latency", opt.latency,
                  "accumulate/feedback: pipeline latency");
  run->add_option("--iterations", opt.iterations,
                  "accumulate: back-to-back accumulations");
  run->add_option("--depth", opt.depth, "feedback: feedback channel depth");
  run->add_option("--rounds", opt.rounds, "feedback: producer iterations");
  run->add_option("--feedback-latency", opt.feedback_latency,
                  "feedback: producer run-ahead distance");
  run->add_option("--seed", opt.seed, "seed for randomized pipelines");
  run->add_option("--stream-timeout-ms", opt.stream_timeout_ms,
                  "blocked-channel warning interval");
  run->add_option("--watchdog-ms", opt.watchdog_ms,
                  "kill a hung pipeline after this long");
  run->add_option("--report", opt.report_path,
                  "write the JSON report here instead of stdout");
  run->add_option("--output", opt.output_path,
                  "write raw little-endian output elements here");

  std::string inject_fault;
  auto* selftest = app.add_subcommand(
      "selftest", "Run the embedded oracle-equivalence suite");
  selftest
      ->add_option("--inject-fault", inject_fault,
                   "force the named suite to fail (test hook)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  // Environment default for the warning interval; the flag wins.
  if (opt.stream_timeout_ms == 0) {
    if (const char* env = std::getenv("DFSIM_STREAM_TIMEOUT_MS")) {
      opt.stream_timeout_ms = std::atoll(env);
    }
  }

  try {
    if (run->parsed()) {
      return run_pipeline(opt);
    }
    if (selftest->parsed()) {
      return dfsim::run_selftest(std::cout, inject_fault) == 0 ? kExitOk
                                                               : kExitFailed;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "dfsim: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dfsim: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "dfsim: " << e.what() << std::endl;
    return kExitFailed;
  }
  return kExitUsage;
}
