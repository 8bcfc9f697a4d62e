#include "dfsim/pipelines.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dfsim/accumulate.hpp"
#include "dfsim/datapack.hpp"
#include "dfsim/host_runtime.hpp"
#include "dfsim/reduce.hpp"
#include "dfsim/shift_register.hpp"
#include "dfsim/stream.hpp"

namespace dfsim {

namespace {

template <typename T>
void append_elements(std::vector<std::byte>& bytes, const std::vector<T>& v) {
  const std::size_t base = bytes.size();
  bytes.resize(base + v.size() * sizeof(T));
  for (std::size_t i = 0; i < v.size(); ++i) {
    bytes::store_le(bytes.data() + base + i * sizeof(T), v[i]);
  }
}

template <typename T>
const char* element_name() {
  if constexpr (std::is_same_v<T, float>) return "f32";
  if constexpr (std::is_same_v<T, double>) return "f64";
  if constexpr (std::is_same_v<T, std::int32_t>) return "i32";
  if constexpr (std::is_same_v<T, std::int64_t>) return "i64";
  return "bytes";
}

template <typename T>
PipelineOutput make_output(std::vector<T> values, DataflowReport report) {
  PipelineOutput out;
  out.element_count = values.size();
  out.element_type = element_name<T>();
  out.report = std::move(report);
  append_elements(out.bytes, values);
  return out;
}

}  // namespace

PipelineOutput run_divergence_pipeline(int t_iterations, int n_elements,
                                       DataflowMode mode) {
  auto result = run_divergence_demo(
      t_iterations, n_elements, mode,
      std::vector<std::int32_t>(static_cast<std::size_t>(n_elements), 0));
  return make_output(std::move(result.output), std::move(result.report));
}

PipelineOutput run_stencil_pipeline(std::size_t height, std::size_t width,
                                    std::vector<float> grid) {
  if (height < 3 || width < 3) {
    throw std::invalid_argument("stencil: height and width must be >= 3");
  }
  if (grid.size() != height * width) {
    throw std::invalid_argument("stencil: grid size must be height * width");
  }
  const std::size_t out_count = (height - 2) * (width - 2);

  DataflowRegion region(DataflowMode::Concurrent);
  Stream<float> in({.name = "stencil_in", .depth = 16});
  Stream<float> out({.name = "stencil_out", .depth = 16});
  std::vector<float> results(out_count);

  region.register_pe("Feed", [&] {
    for (float value : grid) in.push(value);
  });
  region.register_pe("Stencil", [&] { stencil_2d(in, out, height, width); });
  region.register_pe("Collect", [&] {
    for (std::size_t i = 0; i < out_count; ++i) results[i] = out.pop();
  });

  auto report = region.finalize();
  return make_output(std::move(results), std::move(report));
}

namespace {

template <typename Op>
PipelineOutput run_reduce_with_op(std::size_t count, std::size_t lanes,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);

  auto run = [&]<std::size_t N>() {
    using Pack = DataPack<double, N>;
    DataflowRegion region(DataflowMode::Concurrent);
    Stream<Pack> in({.name = "reduce_in", .depth = 16});
    Stream<double> out({.name = "reduce_out", .depth = 16});
    std::vector<double> results(count);

    region.register_pe("Feed", [&] {
      for (std::size_t i = 0; i < count; ++i) {
        Pack pack;
        for (std::size_t lane = 0; lane < N; ++lane) pack[lane] = dist(rng);
        in.push(pack);
      }
    });
    region.register_pe("Reduce",
                       [&] { reduce_stream(in, out, count, Op{}); });
    region.register_pe("Collect", [&] {
      for (std::size_t i = 0; i < count; ++i) results[i] = out.pop();
    });

    auto report = region.finalize();
    return make_output(std::move(results), std::move(report));
  };

  switch (lanes) {
    case 1:
      return run.template operator()<1>();
    case 2:
      return run.template operator()<2>();
    case 4:
      return run.template operator()<4>();
    case 8:
      return run.template operator()<8>();
    case 16:
      return run.template operator()<16>();
    case 32:
      return run.template operator()<32>();
    case 64:
      return run.template operator()<64>();
    default:
      throw std::invalid_argument(
          "reduce: lanes must be a power of two in [1, 64]");
  }
}

}  // namespace

PipelineOutput run_reduce_pipeline(std::size_t count, std::size_t lanes,
                                   const std::string& op,
                                   std::uint64_t seed) {
  if (op == "add") {
    return run_reduce_with_op<ops::Add<double>>(count, lanes, seed);
  }
  if (op == "multiply") {
    return run_reduce_with_op<ops::Multiply<double>>(count, lanes, seed);
  }
  if (op == "min") {
    return run_reduce_with_op<ops::Min<double>>(count, lanes, seed);
  }
  if (op == "max") {
    return run_reduce_with_op<ops::Max<double>>(count, lanes, seed);
  }
  throw std::invalid_argument("reduce: unknown operator '" + op + "'");
}

namespace {

template <typename Op>
PipelineOutput run_accumulate_with_op(std::size_t size, std::size_t latency,
                                      std::size_t iterations,
                                      std::uint64_t seed) {
  AccumulateConfig config{.size = size, .iterations = iterations,
                          .latency = latency};
  // Validated here as well so bad configs are rejected before any PE
  // launches; accumulate_pipeline repeats the check.
  if (latency < 1 || iterations < 1 || size < latency) {
    throw std::invalid_argument(
        "accumulate: requires size >= latency >= 1 and iterations >= 1");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);

  DataflowRegion region(DataflowMode::Concurrent);
  Stream<double> in({.name = "accumulate_in", .depth = 64});
  Stream<double> out({.name = "accumulate_out", .depth = 16});
  std::vector<double> results(iterations);

  region.register_pe("Feed", [&] {
    for (std::size_t i = 0; i < size * iterations; ++i) in.push(dist(rng));
  });
  region.register_pe("Accumulate",
                     [&] { accumulate_pipeline(in, out, config, Op{}); });
  region.register_pe("Collect", [&] {
    for (std::size_t i = 0; i < iterations; ++i) results[i] = out.pop();
  });

  auto report = region.finalize();
  return make_output(std::move(results), std::move(report));
}

}  // namespace

PipelineOutput run_accumulate_pipeline(std::size_t size, std::size_t latency,
                                       std::size_t iterations,
                                       const std::string& op,
                                       std::uint64_t seed) {
  if (op == "add") {
    return run_accumulate_with_op<ops::Add<double>>(size, latency, iterations,
                                                    seed);
  }
  if (op == "multiply") {
    return run_accumulate_with_op<ops::Multiply<double>>(size, latency,
                                                         iterations, seed);
  }
  throw std::invalid_argument("accumulate: unknown operator '" + op + "'");
}

PipelineOutput run_hostdemo_pipeline(std::size_t n) {
  if (n < 1) {
    throw std::invalid_argument("hostdemo: n must be >= 1");
  }
  Context context;
  auto program = context.make_program("KernelFile.xclbin");
  program.register_kernel(
      "Copy", {ArgKind::Buffer, ArgKind::Buffer, ArgKind::Scalar},
      [](KernelArgs& args) {
        auto in = args.buffer<float>(0);
        auto out = args.buffer<float>(1);
        const auto count = args.scalar<std::int64_t>(2);
        for (std::int64_t i = 0; i < count; ++i) {
          out.store(i, in.load(i));
        }
      });

  std::vector<float> input_host(n, 5.0f), output_host(n);
  auto input_device = context.make_buffer<float>(
      0, Access::Read, std::span<const float>(input_host));
  auto output_device = context.make_buffer<float>(1, Access::Write, n);
  auto kernel = program.make_kernel("Copy", input_device, output_device,
                                    static_cast<std::int64_t>(n));
  const auto elapsed = kernel.execute_task();
  output_device.copy_to_host(std::span<float>(output_host));

  DataflowReport report;
  report.duration_ms = elapsed.count();
  return make_output(std::move(output_host), std::move(report));
}

PipelineOutput run_feedback_pipeline(std::size_t feedback_depth,
                                     std::size_t rounds,
                                     std::size_t latency) {
  auto result = run_feedback_demo(feedback_depth, rounds, latency);
  std::vector<std::int64_t> values{result.completed ? std::int64_t{1}
                                                    : std::int64_t{0}};
  return make_output(std::move(values), std::move(result.report));
}

std::vector<float> random_grid(std::size_t height, std::size_t width,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  std::vector<float> grid(height * width);
  for (auto& cell : grid) cell = dist(rng);
  return grid;
}

std::vector<float> load_grid(const std::string& path, std::size_t height,
                             std::size_t width, const std::string& format) {
  const std::size_t expected = height * width;
  std::vector<float> grid;
  if (format == "bin") {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
      throw std::invalid_argument("cannot open grid file '" + path + "'");
    }
    std::vector<char> raw((std::istreambuf_iterator<char>(file)),
                          std::istreambuf_iterator<char>());
    if (raw.size() != expected * sizeof(float)) {
      throw std::invalid_argument(
          "grid file '" + path + "' holds " + std::to_string(raw.size()) +
          " bytes, expected " + std::to_string(expected * sizeof(float)));
    }
    grid.resize(expected);
    for (std::size_t i = 0; i < expected; ++i) {
      grid[i] = bytes::load_le<float>(
          reinterpret_cast<const std::byte*>(raw.data()) + i * sizeof(float));
    }
    return grid;
  }
  if (format == "csv") {
    std::ifstream file(path);
    if (!file) {
      throw std::invalid_argument("cannot open grid file '" + path + "'");
    }
    std::string token;
    while (std::getline(file, token)) {
      std::stringstream line(token);
      std::string cell;
      while (std::getline(line, cell, ',')) {
        if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
        grid.push_back(std::stof(cell));
      }
    }
    if (grid.size() != expected) {
      throw std::invalid_argument(
          "grid file '" + path + "' holds " + std::to_string(grid.size()) +
          " values, expected " + std::to_string(expected));
    }
    return grid;
  }
  throw std::invalid_argument("unknown grid format '" + format + "'");
}

}  // namespace dfsim
