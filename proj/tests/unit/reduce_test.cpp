#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "dfsim/reduce.hpp"
#include "support/oracles.hpp"

using namespace dfsim;

namespace {

template <typename Op, typename T>
void check_identity_law(Op op, const std::vector<T>& samples) {
  for (T x : samples) {
    CHECK(op.apply(op.identity(), x) == x);
    CHECK(op.apply(x, op.identity()) == x);
  }
}

}  // namespace

TEST_CASE("provided operators satisfy the identity law") {
  const std::vector<std::int32_t> ints{-5, -1, 0, 1, 3, 1000, -32768};
  check_identity_law(ops::Add<std::int32_t>{}, ints);
  check_identity_law(ops::Multiply<std::int32_t>{}, ints);
  check_identity_law(ops::Min<std::int32_t>{}, ints);
  check_identity_law(ops::Max<std::int32_t>{}, ints);
  const std::vector<std::uint32_t> bits{0u, 1u, 0xffffffffu, 0xdeadbeefu};
  check_identity_law(ops::BitAnd<std::uint32_t>{}, bits);
  check_identity_law(ops::BitOr<std::uint32_t>{}, bits);

  const std::vector<float> floats{-2.5f, 0.0f, 1.0f, 1e30f, -1e30f};
  check_identity_law(ops::Add<float>{}, floats);
  check_identity_law(ops::Multiply<float>{}, floats);
  check_identity_law(ops::Min<float>{}, floats);
  check_identity_law(ops::Max<float>{}, floats);
}

TEST_CASE("integer extremes still satisfy min/max identities") {
  const auto lowest = std::numeric_limits<std::int32_t>::lowest();
  const auto highest = std::numeric_limits<std::int32_t>::max();
  CHECK(ops::Min<std::int32_t>::apply(ops::Min<std::int32_t>::identity(),
                                      highest) == highest);
  CHECK(ops::Max<std::int32_t>::apply(ops::Max<std::int32_t>::identity(),
                                      lowest) == lowest);
}

TEST_CASE("tree reduce of 1..8 with Add") {
  std::vector<std::int64_t> values{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(tree_reduce<std::int64_t>(values, ops::Add<std::int64_t>{}) == 36);
}

TEST_CASE("tree reduce base cases") {
  const std::vector<double> one{3.25};
  CHECK(tree_reduce<double>(one, ops::Add<double>{}) == 3.25);
  CHECK(tree_reduce<double>({}, ops::Add<double>{}) == 0.0);
  CHECK(tree_reduce<double>({}, ops::Multiply<double>{}) == 1.0);
  CHECK(tree_reduce<std::uint8_t>({}, ops::BitAnd<std::uint8_t>{}) == 0xff);
}

TEST_CASE("tree reduce equals left fold for exactly associative operators") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng() % 70;
    std::vector<std::int64_t> values(n);
    for (auto& v : values) {
      v = static_cast<std::int64_t>(rng() % 20001) - 10000;
    }
    CHECK(tree_reduce<std::int64_t>(values, ops::Add<std::int64_t>{}) ==
          oracles::left_fold<std::int64_t>(values, ops::Add<std::int64_t>{}));
    CHECK(tree_reduce<std::int64_t>(values, ops::Min<std::int64_t>{}) ==
          oracles::left_fold<std::int64_t>(values, ops::Min<std::int64_t>{}));
    CHECK(tree_reduce<std::int64_t>(values, ops::Max<std::int64_t>{}) ==
          oracles::left_fold<std::int64_t>(values, ops::Max<std::int64_t>{}));

    std::vector<std::uint64_t> bits(n);
    for (auto& v : bits) v = rng();
    CHECK(
        tree_reduce<std::uint64_t>(bits, ops::BitAnd<std::uint64_t>{}) ==
        oracles::left_fold<std::uint64_t>(bits, ops::BitAnd<std::uint64_t>{}));
    CHECK(
        tree_reduce<std::uint64_t>(bits, ops::BitOr<std::uint64_t>{}) ==
        oracles::left_fold<std::uint64_t>(bits, ops::BitOr<std::uint64_t>{}));
  }
}

TEST_CASE("f32 association: balanced tree differs from the left fold") {
  // Alternating large/small magnitudes expose float non-associativity.
  std::vector<float> values;
  for (int i = 0; i < 4; ++i) {
    values.push_back(1e8f);
    values.push_back(1.0f);
  }
  const float tree = tree_reduce<float>(values, ops::Add<float>{});
  const float oracle =
      oracles::tree_oracle<float>(values, ops::Add<float>{});
  const float fold = oracles::left_fold<float>(values, ops::Add<float>{});
  CHECK(tree == oracle);  // bit-equal association
  CHECK(tree != fold);
}

TEST_CASE("tree reduce matches the range-splitting oracle on random input") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<float> values(1 + rng() % 257);
    for (auto& v : values) {
      v = dist(rng) * (rng() % 2 ? 1e8f : 1.0f);
    }
    CHECK(tree_reduce<float>(values, ops::Add<float>{}) ==
          oracles::tree_oracle<float>(values, ops::Add<float>{}));
  }
}

TEST_CASE("association is deterministic across runs") {
  std::mt19937_64 rng(23);
  std::vector<float> values(257);
  for (auto& v : values) {
    v = std::uniform_real_distribution<float>(-1e8f, 1e8f)(rng);
  }
  const float first = tree_reduce<float>(values, ops::Add<float>{});
  for (int i = 0; i < 10; ++i) {
    CHECK(tree_reduce<float>(values, ops::Add<float>{}) == first);
  }
}

TEST_CASE("recursion depth is ceil(log2 n)") {
  for (std::size_t n = 1; n <= 257; ++n) {
    std::vector<std::int32_t> values(n, 1);
    const auto [value, depth] =
        tree_reduce_with_depth<std::int32_t>(values, ops::Add<std::int32_t>{});
    CHECK(value == static_cast<std::int32_t>(n));
    const auto expected = static_cast<std::size_t>(
        std::ceil(std::log2(static_cast<double>(n))));
    CHECK(depth == expected);
  }
}

TEST_CASE("reducing identities yields the identity") {
  for (std::size_t n : {0, 1, 5, 64}) {
    std::vector<double> values(n, ops::Add<double>::identity());
    CHECK(tree_reduce<double>(values, ops::Add<double>{}) ==
          ops::Add<double>::identity());
    std::vector<double> maxes(n, ops::Max<double>::identity());
    CHECK(tree_reduce<double>(maxes, ops::Max<double>{}) ==
          ops::Max<double>::identity());
  }
}

TEST_CASE("reduce_stream folds each pack into one ordered scalar") {
  using Pack = DataPack<double, 8>;
  Stream<Pack> in("packs", 4);
  Stream<double> out("sums", 4);

  SUBCASE("single all-ones pack") {
    in.push(Pack(1.0));
    reduce_stream(in, out, 1, ops::Add<double>{});
    CHECK(out.pop() == 8.0);
  }

  SUBCASE("zero packs produce no output") {
    reduce_stream(in, out, 0, ops::Add<double>{});
    CHECK_FALSE(out.try_pop().has_value());
  }

  SUBCASE("each output equals the per-pack oracle") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    constexpr std::size_t kCount = 64;
    std::vector<Pack> packs(kCount);
    for (auto& pack : packs) {
      for (std::size_t lane = 0; lane < 8; ++lane) pack[lane] = dist(rng);
    }
    std::thread feeder([&] {
      for (const auto& pack : packs) in.push(pack);
    });
    std::thread reducer(
        [&] { reduce_stream(in, out, kCount, ops::Add<double>{}); });
    std::vector<double> results;
    for (std::size_t i = 0; i < kCount; ++i) results.push_back(out.pop());
    feeder.join();
    reducer.join();
    for (std::size_t i = 0; i < kCount; ++i) {
      CHECK(results[i] ==
            oracles::tree_oracle<double>(packs[i].lanes(),
                                         ops::Add<double>{}));
    }
  }
}
