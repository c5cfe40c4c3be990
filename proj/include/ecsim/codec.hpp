#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecsim {

enum class PolicyKind { kReplication, kErasureCode };

// Replication is carried as k = 1, r = n - 1 so every consumer sees the
// same (n, k, r) triple.
struct StoragePolicy {
  PolicyKind kind = PolicyKind::kReplication;
  std::uint32_t k = 1;
  std::uint32_t r = 0;

  static StoragePolicy replication(std::uint32_t copies);
  static StoragePolicy erasure(std::uint32_t data_units, std::uint32_t parity_units);
  // "replica<N>" or "ec<K>+<R>", case-insensitive.
  static StoragePolicy parse(std::string_view text);

  std::uint32_t n() const { return k + r; }
  bool is_replication() const { return kind == PolicyKind::kReplication; }
  // Throws Error(kInvalidPolicy) when the invariants do not hold.
  void validate() const;
  std::string name() const;

  friend bool operator==(const StoragePolicy&, const StoragePolicy&) = default;
};

struct StripeUnit {
  std::uint32_t index = 0;
  std::vector<std::uint8_t> payload;
  std::size_t original_size = 0;
  StoragePolicy policy;
};

// Stripe size over logical size, n / k.
double redundancy(const StoragePolicy& policy);

// Bytes per unit for a cache of `size` bytes: ceil(size / k).
std::size_t unit_size(const StoragePolicy& policy, std::size_t size);

// Coefficient of data unit `col` in parity unit `row` (0-based among the
// parity units). The generator is [I_k ; C] with the Cauchy block
// C[row][col] = 1 / ((k + row) ^ col).
std::uint8_t parity_coefficient(const StoragePolicy& policy, std::uint32_t row,
                                std::uint32_t col);

std::vector<StripeUnit> encode(std::span<const std::uint8_t> data,
                               const StoragePolicy& policy);

// Reconstructs the original bytes from any k units with distinct indices.
// Extra units beyond k are ignored.
std::vector<std::uint8_t> decode(std::span<const StripeUnit> units,
                                 const StoragePolicy& policy,
                                 std::size_t original_size);

}  // namespace ecsim
