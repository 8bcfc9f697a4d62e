#include "dfsim/host_runtime.hpp"

namespace dfsim {

const char* to_string(Access access) {
  switch (access) {
    case Access::Read:
      return "read";
    case Access::Write:
      return "write";
    case Access::ReadWrite:
      return "readwrite";
  }
  return "unknown";
}

namespace detail {

DeviceState::DeviceState(std::size_t bank_count, std::size_t capacity)
    : bank_capacity(capacity) {
  if (bank_count < 1) {
    throw std::invalid_argument("device requires at least one memory bank");
  }
  if (capacity < 1) {
    throw std::invalid_argument("bank capacity must be positive");
  }
  banks.resize(bank_count);
  for (auto& bank : banks) {
    // Committed lazily by the OS; keeps buffer pointers stable while
    // kernels run, since allocation never reallocates.
    bank.reserve(capacity);
  }
}

void DeviceState::check_bank(std::size_t bank) const {
  if (bank >= banks.size()) {
    throw std::out_of_range("invalid memory bank " + std::to_string(bank));
  }
}

std::size_t DeviceState::allocate(std::size_t bank, std::size_t bytes) {
  std::lock_guard lock(mutex);
  check_bank(bank);
  auto& storage = banks[bank];
  if (bytes > bank_capacity - storage.size()) {
    throw std::length_error(
        "bank " + std::to_string(bank) + " capacity exhausted: requested " +
        std::to_string(bytes) + " bytes with " +
        std::to_string(bank_capacity - storage.size()) + " remaining");
  }
  const std::size_t offset = storage.size();
  storage.resize(storage.size() + bytes);  // zero-initializes
  return offset;
}

std::byte* DeviceState::bank_data(std::size_t bank, std::size_t offset) {
  return banks[bank].data() + offset;
}

const std::byte* DeviceState::bank_data(std::size_t bank,
                                        std::size_t offset) const {
  return banks[bank].data() + offset;
}

namespace {

bool overlaps(const BufferBinding& a, const BufferBinding& b) {
  if (a.bank != b.bank) return false;
  return a.offset < b.offset + b.size_bytes() &&
         b.offset < a.offset + a.size_bytes();
}

}  // namespace

void DeviceState::begin_execution(const std::vector<BoundArg>& args) {
  std::lock_guard lock(mutex);
  for (const auto& arg : args) {
    const auto* binding = std::get_if<BufferBinding>(&arg);
    if (!binding) continue;
    for (const auto& active : in_flight) {
      if (overlaps(*binding, active)) {
        throw KernelConflict(
            "concurrent kernel executions touch overlapping buffers on "
            "bank " +
            std::to_string(binding->bank));
      }
    }
  }
  for (const auto& arg : args) {
    if (const auto* binding = std::get_if<BufferBinding>(&arg)) {
      in_flight.push_back(*binding);
    }
  }
}

void DeviceState::end_execution(const std::vector<BoundArg>& args) {
  std::lock_guard lock(mutex);
  for (const auto& arg : args) {
    const auto* binding = std::get_if<BufferBinding>(&arg);
    if (!binding) continue;
    for (auto it = in_flight.begin(); it != in_flight.end(); ++it) {
      if (it->bank == binding->bank && it->offset == binding->offset &&
          it->length == binding->length) {
        in_flight.erase(it);
        break;
      }
    }
  }
}

}  // namespace detail

std::chrono::duration<double, std::milli> KernelInstance::execute_task() {
  device_->begin_execution(args_);
  struct Guard {
    detail::DeviceState* device;
    const std::vector<detail::BoundArg>* args;
    ~Guard() { device->end_execution(*args); }
  } guard{device_.get(), &args_};

  const auto started = std::chrono::steady_clock::now();
  KernelArgs view(device_.get(), &args_);
  body_(view);
  return std::chrono::steady_clock::now() - started;
}

Program::Program(std::string name,
                 std::shared_ptr<detail::DeviceState> device)
    : state_(std::make_shared<detail::ProgramState>()) {
  state_->name = std::move(name);
  state_->device = std::move(device);
}

const std::string& Program::name() const { return state_->name; }

void Program::register_kernel(const std::string& kernel_name,
                              std::vector<ArgKind> signature,
                              KernelBody body) {
  std::lock_guard lock(state_->mutex);
  if (state_->kernels.count(kernel_name)) {
    throw std::invalid_argument("kernel '" + kernel_name +
                                "' already registered");
  }
  state_->kernels[kernel_name] = {std::move(signature), std::move(body)};
}

KernelInstance Program::make_kernel_bound(
    const std::string& kernel_name, std::vector<detail::BoundArg> args) {
  std::lock_guard lock(state_->mutex);
  auto it = state_->kernels.find(kernel_name);
  if (it == state_->kernels.end()) {
    throw std::invalid_argument("unknown kernel '" + kernel_name +
                                "' in program '" + state_->name + "'");
  }
  const auto& signature = it->second.signature;
  if (signature.size() != args.size()) {
    throw std::invalid_argument(
        "kernel '" + kernel_name + "' expects " +
        std::to_string(signature.size()) + " arguments, got " +
        std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    const bool is_buffer =
        std::holds_alternative<detail::BufferBinding>(args[i]);
    if ((signature[i] == ArgKind::Buffer) != is_buffer) {
      throw std::invalid_argument("kernel '" + kernel_name + "' argument " +
                                  std::to_string(i) + " kind mismatch");
    }
  }
  return KernelInstance(state_->device, it->second.body, std::move(args));
}

Context::Context(std::size_t bank_count, std::size_t bank_capacity)
    : device_(std::make_shared<detail::DeviceState>(bank_count,
                                                    bank_capacity)) {}

Program Context::make_program(std::string name) {
  return Program(std::move(name), device_);
}

std::size_t Context::bank_count() const { return device_->banks.size(); }

std::size_t Context::bank_capacity() const { return device_->bank_capacity; }

std::size_t Context::bank_used(std::size_t bank) const {
  std::lock_guard lock(device_->mutex);
  device_->check_bank(bank);
  return device_->banks[bank].size();
}

std::vector<std::byte> Context::bank_bytes(std::size_t bank) const {
  std::lock_guard lock(device_->mutex);
  device_->check_bank(bank);
  return device_->banks[bank];
}

}  // namespace dfsim
