#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <typeindex>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace dfsim {

/// Kernel-side permission on a device buffer. Host-side copies are always
/// allowed in both directions.
enum class Access { Read, Write, ReadWrite };

const char* to_string(Access access);

/// A kernel touched a buffer in a way its access mode forbids.
class AccessViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two kernels were executed concurrently on overlapping buffers.
class KernelConflict : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct BufferBinding {
  std::size_t bank = 0;
  std::size_t offset = 0;       // bytes from bank start
  std::size_t length = 0;       // elements
  std::size_t elem_size = 0;    // bytes
  std::type_index elem_type = std::type_index(typeid(void));
  Access access = Access::ReadWrite;

  std::size_t size_bytes() const { return length * elem_size; }
};

using BoundArg = std::variant<BufferBinding, std::int64_t, double>;

struct DeviceState {
  explicit DeviceState(std::size_t bank_count, std::size_t bank_capacity);

  std::size_t allocate(std::size_t bank, std::size_t bytes);
  std::byte* bank_data(std::size_t bank, std::size_t offset);
  const std::byte* bank_data(std::size_t bank, std::size_t offset) const;
  void check_bank(std::size_t bank) const;

  void begin_execution(const std::vector<BoundArg>& args);
  void end_execution(const std::vector<BoundArg>& args);

  const std::size_t bank_capacity;
  mutable std::mutex mutex;
  std::vector<std::vector<std::byte>> banks;
  std::vector<BufferBinding> in_flight;
};

}  // namespace detail

enum class ArgKind { Buffer, Scalar };

/// Checked kernel-side view of one bound buffer. Loads require read access,
/// stores require write access; either violation throws before any byte
/// moves.
template <typename T>
class BufferAccessor {
 public:
  BufferAccessor(detail::DeviceState* device,
                 const detail::BufferBinding& binding)
      : device_(device), binding_(binding) {}

  T load(std::size_t i) const {
    if (binding_.access == Access::Write) {
      throw AccessViolation("kernel read from a write-only buffer");
    }
    check_bounds(i);
    T value;
    std::memcpy(&value, device_->bank_data(binding_.bank, byte_offset(i)),
                sizeof(T));
    return value;
  }

  void store(std::size_t i, T value) {
    if (binding_.access == Access::Read) {
      throw AccessViolation("kernel write to a read-only buffer");
    }
    check_bounds(i);
    std::memcpy(device_->bank_data(binding_.bank, byte_offset(i)), &value,
                sizeof(T));
  }

  std::size_t size() const { return binding_.length; }

 private:
  void check_bounds(std::size_t i) const {
    if (i >= binding_.length) {
      throw std::out_of_range("kernel buffer index out of range");
    }
  }
  std::size_t byte_offset(std::size_t i) const {
    return binding_.offset + i * sizeof(T);
  }

  detail::DeviceState* device_;
  detail::BufferBinding binding_;
};

/// Argument view handed to an executing kernel body.
class KernelArgs {
 public:
  KernelArgs(detail::DeviceState* device,
             const std::vector<detail::BoundArg>* args)
      : device_(device), args_(args) {}

  std::size_t size() const { return args_->size(); }

  template <typename T>
  BufferAccessor<T> buffer(std::size_t i) const {
    const auto* binding = std::get_if<detail::BufferBinding>(&arg(i));
    if (!binding) {
      throw std::invalid_argument("kernel argument is not a buffer");
    }
    if (binding->elem_type != std::type_index(typeid(T))) {
      throw std::invalid_argument(
          "kernel buffer argument element type mismatch");
    }
    return BufferAccessor<T>(device_, *binding);
  }

  template <typename T>
    requires std::is_arithmetic_v<T>
  T scalar(std::size_t i) const {
    const auto& a = arg(i);
    if (const auto* v = std::get_if<std::int64_t>(&a)) {
      return static_cast<T>(*v);
    }
    if (const auto* v = std::get_if<double>(&a)) {
      return static_cast<T>(*v);
    }
    throw std::invalid_argument("kernel argument is not a scalar");
  }

 private:
  const detail::BoundArg& arg(std::size_t i) const {
    if (i >= args_->size()) {
      throw std::out_of_range("kernel argument index out of range");
    }
    return (*args_)[i];
  }

  detail::DeviceState* device_;
  const std::vector<detail::BoundArg>* args_;
};

using KernelBody = std::function<void(KernelArgs&)>;

namespace detail {

struct KernelEntry {
  std::vector<ArgKind> signature;
  KernelBody body;
};

struct ProgramState {
  std::string name;
  std::shared_ptr<DeviceState> device;
  std::mutex mutex;
  std::unordered_map<std::string, KernelEntry> kernels;
};

}  // namespace detail

/// Handle to one allocated device region. Host copies are length-checked
/// and byte-exact.
template <typename T>
class DeviceBuffer {
 public:
  DeviceBuffer(std::shared_ptr<detail::DeviceState> device,
               detail::BufferBinding binding)
      : device_(std::move(device)), binding_(binding) {}

  std::size_t size() const { return binding_.length; }
  std::size_t bank() const { return binding_.bank; }
  std::size_t offset_bytes() const { return binding_.offset; }
  Access access() const { return binding_.access; }

  void copy_to_host(std::span<T> dest) const {
    if (dest.size() != binding_.length) {
      throw std::invalid_argument(
          "copy_to_host: destination length does not match buffer length");
    }
    std::memcpy(dest.data(), device_->bank_data(binding_.bank, binding_.offset),
                binding_.size_bytes());
  }

  void copy_from_host(std::span<const T> src) {
    if (src.size() != binding_.length) {
      throw std::invalid_argument(
          "copy_from_host: source length does not match buffer length");
    }
    std::memcpy(device_->bank_data(binding_.bank, binding_.offset), src.data(),
                binding_.size_bytes());
  }

  std::vector<T> to_host() const {
    std::vector<T> out(binding_.length);
    copy_to_host(std::span<T>(out));
    return out;
  }

  const detail::BufferBinding& binding() const { return binding_; }

 private:
  std::shared_ptr<detail::DeviceState> device_;
  detail::BufferBinding binding_;
};

/// A bound, ready-to-run kernel invocation.
class KernelInstance {
 public:
  KernelInstance(std::shared_ptr<detail::DeviceState> device, KernelBody body,
                 std::vector<detail::BoundArg> args)
      : device_(std::move(device)),
        body_(std::move(body)),
        args_(std::move(args)) {}

  /// Runs the kernel synchronously against device memory; all effects are
  /// visible once this returns. Returns the wall-clock duration.
  std::chrono::duration<double, std::milli> execute_task();

 private:
  std::shared_ptr<detail::DeviceState> device_;
  KernelBody body_;
  std::vector<detail::BoundArg> args_;
};

/// Registry of host-executable kernel bodies, keyed the way a loaded
/// kernel binary would be.
class Program {
 public:
  Program(std::string name, std::shared_ptr<detail::DeviceState> device);

  const std::string& name() const;

  /// Registers a kernel body under a unique name with its argument kinds.
  void register_kernel(const std::string& kernel_name,
                       std::vector<ArgKind> signature, KernelBody body);

  /// Binds arguments (device buffers and scalars) to a registered kernel.
  template <typename... Args>
  KernelInstance make_kernel(const std::string& kernel_name, Args&&... args) {
    std::vector<detail::BoundArg> bound;
    bound.reserve(sizeof...(Args));
    (bound.push_back(bind_arg(std::forward<Args>(args))), ...);
    return make_kernel_bound(kernel_name, std::move(bound));
  }

  KernelInstance make_kernel_bound(const std::string& kernel_name,
                                   std::vector<detail::BoundArg> args);

 private:
  template <typename T>
  static detail::BoundArg bind_arg(const DeviceBuffer<T>& buffer) {
    return buffer.binding();
  }
  template <typename T>
    requires std::is_arithmetic_v<T>
  static detail::BoundArg bind_arg(T scalar) {
    if constexpr (std::is_floating_point_v<T>) {
      return static_cast<double>(scalar);
    } else {
      return static_cast<std::int64_t>(scalar);
    }
  }

  std::shared_ptr<detail::ProgramState> state_;
};

/// Simulated accelerator: a fixed set of memory banks with bump allocation,
/// a program registry, and synchronous kernel execution.
class Context {
 public:
  static constexpr std::size_t default_bank_count = 4;
  static constexpr std::size_t default_bank_capacity = 64ull << 20;

  Context() : Context(default_bank_count, default_bank_capacity) {}
  Context(std::size_t bank_count, std::size_t bank_capacity);

  Program make_program(std::string name);

  /// Allocates `length` zero-initialized elements on a bank.
  template <typename T>
  DeviceBuffer<T> make_buffer(std::size_t bank, Access access,
                              std::size_t length) {
    return DeviceBuffer<T>(device_, allocate<T>(bank, access, length));
  }

  /// Allocates and copies host data to the device.
  template <typename T>
  DeviceBuffer<T> make_buffer(std::size_t bank, Access access,
                              std::span<const T> host) {
    auto binding = allocate<T>(bank, access, host.size());
    std::memcpy(device_->bank_data(bank, binding.offset), host.data(),
                host.size_bytes());
    return DeviceBuffer<T>(device_, binding);
  }

  template <typename T, typename It>
  DeviceBuffer<T> make_buffer(std::size_t bank, Access access, It first,
                              It last) {
    std::vector<T> staged(first, last);
    return make_buffer<T>(bank, access, std::span<const T>(staged));
  }

  std::size_t bank_count() const;
  std::size_t bank_capacity() const;
  std::size_t bank_used(std::size_t bank) const;

  /// Snapshot of a bank's allocated bytes (for hashing and inspection).
  std::vector<std::byte> bank_bytes(std::size_t bank) const;

 private:
  template <typename T>
  detail::BufferBinding allocate(std::size_t bank, Access access,
                                 std::size_t length) {
    detail::BufferBinding binding;
    binding.bank = bank;
    binding.offset = device_->allocate(bank, length * sizeof(T));
    binding.length = length;
    binding.elem_size = sizeof(T);
    binding.elem_type = std::type_index(typeid(T));
    binding.access = access;
    return binding;
  }

  std::shared_ptr<detail::DeviceState> device_;
};

}  // namespace dfsim
