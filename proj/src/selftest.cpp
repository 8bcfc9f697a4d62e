#include "dfsim/selftest.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <thread>
#include <vector>

#include "dfsim/accumulate.hpp"
#include "dfsim/dataflow.hpp"
#include "dfsim/datapack.hpp"
#include "dfsim/host_runtime.hpp"
#include "dfsim/reduce.hpp"
#include "dfsim/shift_register.hpp"
#include "dfsim/stream.hpp"

namespace dfsim {

namespace {

bool check_streams() {
  Stream<int> s({.name = "selftest", .depth = 4});
  for (int i = 0; i < 3; ++i) s.push(i);
  if (s.occupancy() != 3) return false;
  for (int i = 0; i < 3; ++i) {
    if (s.pop() != i) return false;
  }
  if (s.try_pop().has_value()) return false;

  Stream<int> rendezvous({.name = "selftest_rv", .depth = 1});
  int got = -1;
  std::thread consumer([&] { got = rendezvous.pop(); });
  rendezvous.push(7);
  consumer.join();
  return got == 7;
}

bool check_dataflow() {
  auto concurrent = run_divergence_demo(3, 16, DataflowMode::Concurrent,
                                        std::vector<std::int32_t>(16, 0));
  auto sequential = run_divergence_demo(3, 16, DataflowMode::Sequential,
                                        std::vector<std::int32_t>(16, 0));
  for (std::int32_t v : concurrent.output) {
    if (v != 3) return false;
  }
  for (std::int32_t v : sequential.output) {
    if (v != 1) return false;
  }
  return concurrent.report.ok() && sequential.report.ok();
}

bool check_datapack() {
  const DataPack<float, 4> a(0.0f), b(1.0f);
  const auto d = b - a;
  const float len = d[0] + d[1] + d[2] + d[3];
  const auto direction = (1.0f / len) * d;
  for (std::size_t i = 0; i < 4; ++i) {
    if (direction[i] != 0.25f) return false;
  }
  const auto bytes = direction.pack_bytes();
  return DataPack<float, 4>::unpack_bytes(bytes) == direction;
}

bool check_shift_register() {
  // Plain full-array shift as the oracle.
  const TapList taps{0, 2, 5};
  ShiftRegister<float> sr(taps, 0.0f);
  std::vector<float> oracle(taps.capacity(), 0.0f);
  for (int step = 0; step < 32; ++step) {
    const float value = static_cast<float>(step * step % 17);
    for (std::size_t k = oracle.size() - 1; k > 0; --k) {
      oracle[k] = oracle[k - 1];
    }
    oracle[0] = value;
    sr.shift(value);
    for (std::size_t tap : taps.taps()) {
      if (sr.get(tap) != oracle[tap]) return false;
    }
  }
  return true;
}

bool check_reduce() {
  std::vector<std::int64_t> values(37);
  std::iota(values.begin(), values.end(), 1);
  const auto tree =
      tree_reduce<std::int64_t>(values, ops::Add<std::int64_t>{});
  const auto fold = std::accumulate(values.begin(), values.end(),
                                    std::int64_t{0});
  return tree == fold && tree == 37 * 38 / 2;
}

bool check_accumulate() {
  const AccumulateConfig config{.size = 64, .iterations = 2, .latency = 8};
  Stream<double> in({.name = "selftest_acc_in", .depth = 128,
                     .bound_mode = BoundMode::Elastic});
  Stream<double> out({.name = "selftest_acc_out", .depth = 2});
  for (std::size_t r = 0; r < config.iterations; ++r) {
    for (std::size_t i = 0; i < config.size; ++i) {
      in.push(static_cast<double>(r + 1));
    }
  }
  accumulate_pipeline(in, out, config, ops::Add<double>{});
  return out.pop() == 64.0 && out.pop() == 128.0;
}

bool check_host_runtime() {
  Context context(2, 1 << 20);
  auto program = context.make_program("selftest.xclbin");
  program.register_kernel("Scale",
                          {ArgKind::Buffer, ArgKind::Buffer, ArgKind::Scalar},
                          [](KernelArgs& args) {
                            auto in = args.buffer<float>(0);
                            auto out = args.buffer<float>(1);
                            const auto f = args.scalar<double>(2);
                            for (std::size_t i = 0; i < in.size(); ++i) {
                              out.store(i, static_cast<float>(f) * in.load(i));
                            }
                          });
  std::vector<float> host{1.0f, 2.0f, 3.0f, 4.0f};
  auto in = context.make_buffer<float>(0, Access::Read,
                                       std::span<const float>(host));
  auto out = context.make_buffer<float>(1, Access::Write, host.size());
  program.make_kernel("Scale", in, out, 2.0).execute_task();
  const auto result = out.to_host();
  for (std::size_t i = 0; i < host.size(); ++i) {
    if (result[i] != 2.0f * host[i]) return false;
  }
  return true;
}

struct Suite {
  const char* name;
  bool (*run)();
};

constexpr Suite kSuites[] = {
    {"streams", check_streams},
    {"dataflow", check_dataflow},
    {"datapack", check_datapack},
    {"shift_register", check_shift_register},
    {"reduce", check_reduce},
    {"accumulate", check_accumulate},
    {"host_runtime", check_host_runtime},
};

}  // namespace

int run_selftest(std::ostream& out, const std::string& inject_fault) {
  int failures = 0;
  bool fault_matched = inject_fault.empty();
  for (const auto& suite : kSuites) {
    bool ok = false;
    std::string error;
    try {
      ok = suite.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (!inject_fault.empty() && inject_fault == suite.name) {
      ok = false;
      error = "fault injected";
      fault_matched = true;
    }
    if (!ok) ++failures;
    out << std::left << std::setw(16) << suite.name
        << (ok ? "PASS" : "FAIL");
    if (!error.empty()) {
      out << "  (" << error << ")";
    }
    out << "\n";
  }
  if (!fault_matched) {
    out << "unknown suite '" << inject_fault << "' for fault injection\n";
    ++failures;
  }
  out << (failures == 0 ? "all suites passed" : "some suites failed")
      << "\n";
  return failures;
}

}  // namespace dfsim
