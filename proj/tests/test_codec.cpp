#include <algorithm>
#include <random>

#include "doctest.h"
#include "ecsim/codec.hpp"
#include "ecsim/gf256.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ecsim;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::mt19937& gen) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(byte(gen));
  return out;
}

// Every subset of `count` indices out of 0..n-1.
std::vector<std::vector<std::uint32_t>> subsets(std::uint32_t n, std::uint32_t count) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + count, true);
  do {
    std::vector<std::uint32_t> s;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (pick[i]) s.push_back(i);
    }
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

std::vector<StripeUnit> pick(const std::vector<StripeUnit>& units,
                             const std::vector<std::uint32_t>& idx) {
  std::vector<StripeUnit> out;
  for (auto i : idx) out.push_back(units[i]);
  return out;
}

}  // namespace

TEST_CASE("gf256 agrees with a bitwise multiply on every pair") {
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      const auto x = static_cast<std::uint8_t>(a);
      const auto y = static_cast<std::uint8_t>(b);
      REQUIRE(gf256::mul(x, y) == oracle::gf_mul(x, y));
    }
  }
  for (unsigned a = 1; a < 256; ++a) {
    const auto x = static_cast<std::uint8_t>(a);
    CHECK(gf256::inv(x) == oracle::gf_inv(x));
    CHECK(gf256::mul(x, gf256::inv(x)) == 1);
  }
}

TEST_CASE("policy parsing and names") {
  CHECK(StoragePolicy::parse("replica2") == StoragePolicy::replication(2));
  CHECK(StoragePolicy::parse("Replica1") == StoragePolicy::replication(1));
  CHECK(StoragePolicy::parse("EC3+2") == StoragePolicy::erasure(3, 2));
  CHECK(StoragePolicy::parse("ec2+1").name() == "EC2+1");
  CHECK(StoragePolicy::replication(2).name() == "Replica2");
  CHECK(StoragePolicy::replication(3).k == 1);
  CHECK(StoragePolicy::replication(3).r == 2);
  CHECK_ERROR_CODE(StoragePolicy::parse("raid5"), ErrorCode::kInvalidPolicy);
  CHECK_ERROR_CODE(StoragePolicy::parse("ec3+"), ErrorCode::kInvalidPolicy);
  CHECK_ERROR_CODE(StoragePolicy::parse("replica0"), ErrorCode::kInvalidPolicy);
  CHECK_ERROR_CODE(StoragePolicy::erasure(200, 56).validate(), ErrorCode::kInvalidPolicy);
  CHECK_NOTHROW(StoragePolicy::erasure(200, 55).validate());
}

TEST_CASE("redundancy is n over k") {
  CHECK(redundancy(StoragePolicy::replication(2)) == 2.0);
  CHECK(redundancy(StoragePolicy::erasure(2, 1)) == 1.5);
  CHECK(redundancy(StoragePolicy::replication(1)) == 1.0);
  CHECK(redundancy(StoragePolicy::erasure(3, 2)) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("EC2+1 on six bytes matches a hand matrix multiply") {
  const std::vector<std::uint8_t> data = {1, 2, 3, 4, 5, 6};
  const auto policy = StoragePolicy::erasure(2, 1);
  const auto units = encode(data, policy);
  REQUIRE(units.size() == 3);
  CHECK(units[0].payload == std::vector<std::uint8_t>{1, 2, 3});
  CHECK(units[1].payload == std::vector<std::uint8_t>{4, 5, 6});

  // Cauchy row for parity 0: 1/(2^0), 1/(2^1) = 1/2, 1/3.
  const std::uint8_t c0 = oracle::gf_inv(2);
  const std::uint8_t c1 = oracle::gf_inv(3);
  CHECK(parity_coefficient(policy, 0, 0) == c0);
  CHECK(parity_coefficient(policy, 0, 1) == c1);
  for (int i = 0; i < 3; ++i) {
    const std::uint8_t want = oracle::gf_mul(c0, data[i]) ^ oracle::gf_mul(c1, data[3 + i]);
    CHECK(units[2].payload[i] == want);
  }
}

TEST_CASE("parity block decodes through a brute-force inverse oracle") {
  // Recover data unit 0 of EC2+1 from units 1 and 2 by hand:
  // p = c0*d0 + c1*d1  =>  d0 = (p - c1*d1) / c0.
  std::mt19937 gen(5);
  const auto data = random_bytes(64, gen);
  const auto policy = StoragePolicy::erasure(2, 1);
  const auto units = encode(data, policy);
  const std::uint8_t c0 = parity_coefficient(policy, 0, 0);
  const std::uint8_t c1 = parity_coefficient(policy, 0, 1);
  for (std::size_t i = 0; i < 32; ++i) {
    const std::uint8_t rest = units[2].payload[i] ^ oracle::gf_mul(c1, units[1].payload[i]);
    CHECK(oracle::gf_mul(oracle::gf_inv(c0), rest) == data[i]);
  }
  const auto got = decode(pick(units, {1, 2}), policy, data.size());
  CHECK(got == data);
}

TEST_CASE("unit sizing and padding") {
  const auto policy = StoragePolicy::erasure(3, 2);
  CHECK(unit_size(policy, 1u << 20) == 349526);
  std::vector<std::uint8_t> mb(1u << 20, 7);
  const auto units = encode(mb, policy);
  REQUIRE(units.size() == 5);
  std::size_t total = 0;
  for (const auto& u : units) {
    CHECK(u.payload.size() == 349526);
    CHECK(u.original_size == mb.size());
    total += u.payload.size();
  }
  // within k bytes of redundancy x size
  CHECK(static_cast<double>(total) - redundancy(policy) * mb.size() < 3.0 * 5);
  // padding bytes are zero
  CHECK(units[2].payload.back() == 0);
  CHECK(units[2].payload[349526 - 3] == 7);
}

TEST_CASE("replication copies verbatim") {
  std::mt19937 gen(1);
  const auto data = random_bytes(1000, gen);
  const auto units = encode(data, StoragePolicy::replication(2));
  REQUIRE(units.size() == 2);
  CHECK(units[0].payload == data);
  CHECK(units[1].payload == data);
  CHECK(decode(pick(units, {1}), StoragePolicy::replication(2), data.size()) == data);
}

TEST_CASE("systematic units are the data slices") {
  std::mt19937 gen(2);
  const auto data = random_bytes(301, gen);
  const auto policy = StoragePolicy::erasure(3, 1);
  const auto units = encode(data, policy);
  std::vector<std::uint8_t> joined;
  for (int i = 0; i < 3; ++i) {
    joined.insert(joined.end(), units[i].payload.begin(), units[i].payload.end());
  }
  joined.resize(data.size());
  CHECK(joined == data);
}

TEST_CASE("every erasure pattern round-trips") {
  std::mt19937 gen(3);
  for (const auto& policy :
       {StoragePolicy::replication(1), StoragePolicy::replication(2), StoragePolicy::replication(3),
        StoragePolicy::erasure(2, 1), StoragePolicy::erasure(3, 1), StoragePolicy::erasure(3, 2),
        StoragePolicy::erasure(4, 4), StoragePolicy::erasure(6, 3)}) {
    for (std::size_t size : {1u, 2u, 5u, 17u, 1000u, 4099u}) {
      const auto data = random_bytes(size, gen);
      const auto units = encode(data, policy);
      REQUIRE(units.size() == policy.n());
      for (const auto& s : subsets(policy.n(), policy.k)) {
        INFO(policy.name() << " size " << size);
        CHECK(decode(pick(units, s), policy, size) == data);
      }
    }
  }
}

TEST_CASE("decode ignores units beyond k and accepts any order") {
  std::mt19937 gen(4);
  const auto data = random_bytes(99, gen);
  const auto policy = StoragePolicy::erasure(3, 2);
  const auto units = encode(data, policy);
  CHECK(decode(pick(units, {4, 1, 3, 0}), policy, data.size()) == data);
  CHECK(decode(units, policy, data.size()) == data);
}

TEST_CASE("encode is deterministic") {
  std::mt19937 gen(6);
  const auto data = random_bytes(5000, gen);
  const auto a = encode(data, StoragePolicy::erasure(3, 2));
  const auto b = encode(data, StoragePolicy::erasure(3, 2));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].payload == b[i].payload);
}

TEST_CASE("codec errors") {
  const auto policy = StoragePolicy::erasure(3, 1);
  std::vector<std::uint8_t> empty;
  CHECK_ERROR_CODE(encode(empty, policy), ErrorCode::kInvalidInput);
  CHECK_ERROR_CODE(encode(std::vector<std::uint8_t>{1}, StoragePolicy::erasure(250, 10)),
                   ErrorCode::kInvalidPolicy);

  std::mt19937 gen(7);
  const auto data = random_bytes(30, gen);
  auto units = encode(data, policy);
  CHECK_ERROR_CODE(decode(pick(units, {0, 3}), policy, data.size()),
                   ErrorCode::kInsufficientUnits);

  auto bad = pick(units, {0, 1, 2});
  bad[1].payload.pop_back();
  CHECK_ERROR_CODE(decode(bad, policy, data.size()), ErrorCode::kCorruptStripe);

  auto dup = pick(units, {0, 1, 1});
  CHECK_ERROR_CODE(decode(dup, policy, data.size()), ErrorCode::kInvalidInput);

  auto out_of_range = pick(units, {0, 1, 2});
  out_of_range[2].index = 9;
  CHECK_ERROR_CODE(decode(out_of_range, policy, data.size()), ErrorCode::kCorruptStripe);
}
