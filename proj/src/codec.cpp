#include "ecsim/codec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "ecsim/error.hpp"
#include "ecsim/gf256.hpp"

namespace ecsim {
namespace {

constexpr std::uint32_t kMaxUnits = 255;

std::uint32_t parse_count(std::string_view digits, std::string_view whole) {
  std::uint32_t value = 0;
  const auto* first = digits.data();
  const auto* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (digits.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::kInvalidPolicy, "malformed policy '" + std::string(whole) + "'");
  }
  return value;
}

using Matrix = std::vector<std::vector<std::uint8_t>>;

// Row `index` of the n x k systematic generator.
std::vector<std::uint8_t> generator_row(const StoragePolicy& policy, std::uint32_t index) {
  std::vector<std::uint8_t> row(policy.k, 0);
  if (index < policy.k) {
    row[index] = 1;
  } else {
    for (std::uint32_t c = 0; c < policy.k; ++c) {
      row[c] = parity_coefficient(policy, index - policy.k, c);
    }
  }
  return row;
}

// Gauss-Jordan inversion over GF(2^8). Any k rows of [I; Cauchy] are
// independent, so a zero pivot means the caller passed bad indices.
Matrix invert(Matrix m) {
  const std::size_t size = m.size();
  Matrix inv(size, std::vector<std::uint8_t>(size, 0));
  for (std::size_t i = 0; i < size; ++i) inv[i][i] = 1;

  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    while (pivot < size && m[pivot][col] == 0) ++pivot;
    if (pivot == size) {
      throw Error(ErrorCode::kCorruptStripe, "singular decode matrix");
    }
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);

    const std::uint8_t scale = gf256::inv(m[col][col]);
    for (std::size_t c = 0; c < size; ++c) {
      m[col][c] = gf256::mul(m[col][c], scale);
      inv[col][c] = gf256::mul(inv[col][c], scale);
    }
    for (std::size_t row = 0; row < size; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const std::uint8_t factor = m[row][col];
      for (std::size_t c = 0; c < size; ++c) {
        m[row][c] ^= gf256::mul(factor, m[col][c]);
        inv[row][c] ^= gf256::mul(factor, inv[col][c]);
      }
    }
  }
  return inv;
}

}  // namespace

StoragePolicy StoragePolicy::replication(std::uint32_t copies) {
  if (copies == 0) {
    throw Error(ErrorCode::kInvalidPolicy, "replication needs at least one copy");
  }
  StoragePolicy p{PolicyKind::kReplication, 1, copies - 1};
  p.validate();
  return p;
}

StoragePolicy StoragePolicy::erasure(std::uint32_t data_units, std::uint32_t parity_units) {
  StoragePolicy p{PolicyKind::kErasureCode, data_units, parity_units};
  p.validate();
  return p;
}

StoragePolicy StoragePolicy::parse(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::string_view s = lower;
  if (s.starts_with("replica")) {
    return replication(parse_count(s.substr(7), text));
  }
  if (s.starts_with("ec")) {
    s.remove_prefix(2);
    const auto plus = s.find('+');
    if (plus == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidPolicy, "malformed policy '" + std::string(text) + "'");
    }
    return erasure(parse_count(s.substr(0, plus), text), parse_count(s.substr(plus + 1), text));
  }
  throw Error(ErrorCode::kInvalidPolicy, "unknown policy '" + std::string(text) + "'");
}

void StoragePolicy::validate() const {
  if (k == 0) throw Error(ErrorCode::kInvalidPolicy, "k must be at least 1");
  if (n() > kMaxUnits) {
    throw Error(ErrorCode::kInvalidPolicy,
                "n = " + std::to_string(n()) + " exceeds the GF(2^8) limit of 255");
  }
  if (kind == PolicyKind::kReplication && k != 1) {
    throw Error(ErrorCode::kInvalidPolicy, "replication requires k = 1");
  }
  if (kind == PolicyKind::kErasureCode && k < 2) {
    throw Error(ErrorCode::kInvalidPolicy, "erasure codes require k >= 2");
  }
}

std::string StoragePolicy::name() const {
  if (is_replication()) return "Replica" + std::to_string(n());
  return "EC" + std::to_string(k) + "+" + std::to_string(r);
}

double redundancy(const StoragePolicy& policy) {
  return static_cast<double>(policy.n()) / static_cast<double>(policy.k);
}

std::size_t unit_size(const StoragePolicy& policy, std::size_t size) {
  return (size + policy.k - 1) / policy.k;
}

std::uint8_t parity_coefficient(const StoragePolicy& policy, std::uint32_t row,
                                std::uint32_t col) {
  const auto x = static_cast<std::uint8_t>(policy.k + row);
  const auto y = static_cast<std::uint8_t>(col);
  return gf256::inv(static_cast<std::uint8_t>(x ^ y));
}

std::vector<StripeUnit> encode(std::span<const std::uint8_t> data, const StoragePolicy& policy) {
  policy.validate();
  if (data.empty()) throw Error(ErrorCode::kInvalidInput, "cannot encode empty data");

  const std::size_t len = unit_size(policy, data.size());
  std::vector<StripeUnit> units(policy.n());
  for (std::uint32_t i = 0; i < policy.n(); ++i) {
    units[i].index = i;
    units[i].original_size = data.size();
    units[i].policy = policy;
    units[i].payload.assign(len, 0);
  }

  if (policy.is_replication()) {
    for (auto& u : units) std::copy(data.begin(), data.end(), u.payload.begin());
    return units;
  }

  for (std::uint32_t i = 0; i < policy.k; ++i) {
    const std::size_t begin = std::min(data.size(), i * len);
    const std::size_t end = std::min(data.size(), begin + len);
    std::copy(data.begin() + begin, data.begin() + end, units[i].payload.begin());
  }
  for (std::uint32_t p = 0; p < policy.r; ++p) {
    auto& parity = units[policy.k + p].payload;
    for (std::uint32_t c = 0; c < policy.k; ++c) {
      gf256::mul_add_region(parity_coefficient(policy, p, c), units[c].payload, parity);
    }
  }
  return units;
}

std::vector<std::uint8_t> decode(std::span<const StripeUnit> units, const StoragePolicy& policy,
                                 std::size_t original_size) {
  policy.validate();

  std::vector<const StripeUnit*> chosen;
  std::set<std::uint32_t> seen;
  for (const auto& u : units) {
    if (u.index >= policy.n()) {
      throw Error(ErrorCode::kCorruptStripe,
                  "unit index " + std::to_string(u.index) + " outside stripe");
    }
    if (!seen.insert(u.index).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate unit index " + std::to_string(u.index));
    }
    chosen.push_back(&u);
  }
  if (chosen.size() < policy.k) {
    throw Error(ErrorCode::kInsufficientUnits,
                "need " + std::to_string(policy.k) + " units, have " +
                    std::to_string(chosen.size()));
  }

  const std::size_t len = unit_size(policy, original_size);
  for (const auto* u : chosen) {
    if (u->payload.size() != len) {
      throw Error(ErrorCode::kCorruptStripe, "unit " + std::to_string(u->index) + " has " +
                                                 std::to_string(u->payload.size()) +
                                                 " bytes, expected " + std::to_string(len));
    }
  }

  std::vector<std::uint8_t> out;
  out.reserve(len * policy.k);

  if (policy.is_replication()) {
    out.assign(chosen.front()->payload.begin(), chosen.front()->payload.end());
    out.resize(original_size);
    return out;
  }

  // Prefer data units so the common case is a plain copy.
  std::sort(chosen.begin(), chosen.end(),
            [](const StripeUnit* a, const StripeUnit* b) { return a->index < b->index; });
  chosen.resize(policy.k);

  const bool systematic = chosen.back()->index == policy.k - 1;
  if (systematic) {
    for (const auto* u : chosen) out.insert(out.end(), u->payload.begin(), u->payload.end());
    out.resize(original_size);
    return out;
  }

  Matrix sub;
  sub.reserve(policy.k);
  for (const auto* u : chosen) sub.push_back(generator_row(policy, u->index));
  const Matrix inv = invert(std::move(sub));

  out.assign(len * policy.k, 0);
  for (std::uint32_t d = 0; d < policy.k; ++d) {
    std::span<std::uint8_t> dst(out.data() + d * len, len);
    for (std::uint32_t j = 0; j < policy.k; ++j) {
      gf256::mul_add_region(inv[d][j], chosen[j]->payload, dst);
    }
  }
  out.resize(original_size);
  return out;
}

}  // namespace ecsim
