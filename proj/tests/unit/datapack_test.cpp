#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "dfsim/datapack.hpp"

using namespace dfsim;

TEST_CASE("fill broadcasts a value") {
  const auto p = pack_fill<double, 4>(5.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == 5.0);
}

TEST_CASE("from_span copies elementwise and checks the length") {
  const int values[] = {1, 2, 3};
  const auto p = pack_from_array<int, 3>(values);
  CHECK(p[0] == 1);
  CHECK(p[1] == 2);
  CHECK(p[2] == 3);

  const int two[] = {1, 2};
  CHECK_THROWS_AS((pack_from_array<int, 4>(two)), std::invalid_argument);
}

TEST_CASE("checked get and set") {
  DataPack<int, 4> p(std::array<int, 4>{1, 2, 3, 4});
  CHECK(p.get(2) == 3);
  p.set(0, 9);
  CHECK(p.get(0) == 9);
  CHECK(p.get(1) == 2);
  CHECK(p.get(3) == 4);
  CHECK_THROWS_AS(p.get(4), std::out_of_range);
  CHECK_THROWS_AS(p.set(4, 0), std::out_of_range);
}

TEST_CASE("value semantics: copies are independent") {
  DataPack<int, 2> a(std::array<int, 2>{1, 2});
  DataPack<int, 2> b = a;
  b.set(0, 99);
  CHECK(a.get(0) == 1);
  CHECK(b.get(0) == 99);
}

TEST_CASE("elementwise arithmetic applies per lane") {
  const DataPack<int, 4> ones(1), zeros(0);
  CHECK((ones - zeros) == ones);

  const DataPack<int, 4> a(std::array<int, 4>{1, 2, 3, 4});
  const DataPack<int, 4> b(std::array<int, 4>{10, 20, 30, 40});
  const auto sum = a + b;
  const auto prod = a * b;
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sum[i] == a[i] + b[i]);
    CHECK(prod[i] == a[i] * b[i]);
  }
}

TEST_CASE("scalar operations broadcast") {
  const DataPack<int, 4> p(std::array<int, 4>{1, 2, 3, 4});
  const auto doubled = 2 * p;
  CHECK(doubled == (p + p));
  const auto shifted = p + 10;
  for (std::size_t i = 0; i < 4; ++i) CHECK(shifted[i] == p[i] + 10);
}

TEST_CASE("direction example: normalized difference vector") {
  const DataPack<float, 4> a(0.0f), b(1.0f);
  const auto d = b - a;
  const float len = d[0] + d[1] + d[2] + d[3];
  CHECK(len == 4.0f);
  const auto direction = (1.0f / len) * d;
  CHECK(direction == DataPack<float, 4>(0.25f));
}

TEST_CASE("integer division by a zero lane is a domain error") {
  const DataPack<int, 2> num(std::array<int, 2>{4, 8});
  const DataPack<int, 2> den(std::array<int, 2>{2, 0});
  CHECK_THROWS_AS(num / den, std::domain_error);
  // Floating point follows IEEE semantics instead.
  const DataPack<double, 2> fnum(1.0);
  const DataPack<double, 2> fden(0.0);
  const auto q = fnum / fden;
  CHECK(std::isinf(q[0]));
}

TEST_CASE("packed form is little-endian with element 0 first") {
  const DataPack<float, 1> p(1.0f);
  const auto raw = p.pack_bytes();
  REQUIRE(raw.size() == 4);
  CHECK(raw[0] == std::byte{0x00});
  CHECK(raw[1] == std::byte{0x00});
  CHECK(raw[2] == std::byte{0x80});
  CHECK(raw[3] == std::byte{0x3f});

  const DataPack<std::uint16_t, 2> q(
      std::array<std::uint16_t, 2>{0x0102, 0x0304});
  const auto qraw = q.pack_bytes();
  REQUIRE(qraw.size() == 4);
  CHECK(qraw[0] == std::byte{0x02});
  CHECK(qraw[1] == std::byte{0x01});
  CHECK(qraw[2] == std::byte{0x04});
  CHECK(qraw[3] == std::byte{0x03});
}

TEST_CASE("unpack rejects wrong byte counts") {
  const std::byte raw[3] = {};
  CHECK_THROWS_AS((DataPack<float, 1>::unpack_bytes(raw)),
                  std::invalid_argument);
}

namespace {

template <typename T, std::size_t N>
void roundtrip_random(std::mt19937_64& rng) {
  DataPack<T, N> p;
  for (std::size_t i = 0; i < N; ++i) {
    if constexpr (std::is_floating_point_v<T>) {
      p[i] = static_cast<T>(std::uniform_real_distribution<double>(
          -1e6, 1e6)(rng));
    } else {
      p[i] = static_cast<T>(rng());
    }
  }
  const auto raw = p.pack_bytes();
  CHECK(raw.size() == N * sizeof(T));
  CHECK(DataPack<T, N>::unpack_bytes(raw) == p);
}

template <typename T, std::size_t... Ns>
void roundtrip_widths(std::mt19937_64& rng, std::index_sequence<Ns...>) {
  (roundtrip_random<T, Ns + 1>(rng), ...);
}

}  // namespace

TEST_CASE("pack/unpack round-trips for every width 1..64") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 8; ++trial) {
    roundtrip_widths<float>(rng, std::make_index_sequence<64>{});
    roundtrip_widths<double>(rng, std::make_index_sequence<64>{});
  }
  // Remaining element types at spot widths.
  for (int trial = 0; trial < 32; ++trial) {
    roundtrip_random<std::int8_t, 3>(rng);
    roundtrip_random<std::uint8_t, 16>(rng);
    roundtrip_random<std::int16_t, 5>(rng);
    roundtrip_random<std::uint16_t, 8>(rng);
    roundtrip_random<std::int32_t, 7>(rng);
    roundtrip_random<std::uint32_t, 64>(rng);
    roundtrip_random<std::int64_t, 4>(rng);
    roundtrip_random<std::uint64_t, 33>(rng);
  }
}

TEST_CASE("elementwise result matches per-index application bit-exactly") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<float> dist(-100.0f, 100.0f);
  for (int trial = 0; trial < 100; ++trial) {
    DataPack<float, 8> a, b;
    for (std::size_t i = 0; i < 8; ++i) {
      a[i] = dist(rng);
      b[i] = dist(rng);
    }
    const auto sum = a + b;
    const auto diff = a - b;
    const auto prod = a * b;
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(sum[i] == a[i] + b[i]);
      CHECK(diff[i] == a[i] - b[i]);
      CHECK(prod[i] == a[i] * b[i]);
    }
  }
}
