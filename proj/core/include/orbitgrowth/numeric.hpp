#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace orbitgrowth {

using BigNat = mpz_class;
using ExactRational = mpq_class;

/// 2^m - 1 as an exact integer.
BigNat mersenne_number(std::uint64_t m);

/// Lowest-terms "num/den" rendering (always with a slash, "0/1" for zero).
std::string to_string(const ExactRational& q);

/// Decimal rendering with `significant` significant digits, locale independent.
std::string to_decimal(const ExactRational& q, int significant = 18);

/// Parses "3", "-2/7", "0.9", "1.5e-3" exactly (decimal strings become exact rationals).
ExactRational parse_rational(std::string_view text);

long double to_long_double(const ExactRational& q);

/// Unsigned fixed-point accumulator with 96 fractional bits.
///
/// Sums of reciprocals are accumulated as integers, so the result is independent of
/// summation order and partitioning. Each added reciprocal is truncated by less than
/// 2^-96; the integer part is limited to 32 bits.
class FixedSum {
 public:
  static constexpr int kFractionBits = 96;

  FixedSum() = default;

  void add_reciprocal(std::uint64_t n);
  FixedSum& operator+=(const FixedSum& other);
  friend bool operator==(const FixedSum&, const FixedSum&) = default;

  std::uint64_t terms() const noexcept { return terms_; }
  /// Upper bound on the accumulated truncation error.
  long double truncation_bound() const;
  long double to_long_double() const;
  ExactRational to_rational() const;
  std::string to_string(int significant = 18) const;

 private:
  unsigned __int128 raw_ = 0;
  std::uint64_t terms_ = 0;
};

}  // namespace orbitgrowth
