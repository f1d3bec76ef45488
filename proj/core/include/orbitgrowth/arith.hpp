#pragma once

// Exact elementary number theory: sieving, multiplicative orders of 2, Moebius and
// totient, p-adic valuations (including those of Mersenne numbers) and cyclotomic
// values at 2.

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orbitgrowth/numeric.hpp"

namespace orbitgrowth::arith {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

/// Primes up to `limit` plus the least-prime-factor table on [0, limit].
///
/// Immutable after construction and safe to share between threads.
class PrimeTable {
 public:
  static constexpr std::uint64_t kDefaultCapacity = 100'000'000;

  /// Throws CapacityError unless 2 <= limit <= capacity.
  explicit PrimeTable(std::uint64_t limit, std::uint64_t capacity = kDefaultCapacity);

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const& noexcept { return primes_; }
  std::span<const std::uint32_t> primes() const&& = delete;
  std::size_t prime_count() const noexcept { return primes_.size(); }

  /// Least prime factor of n, for 2 <= n <= limit.
  std::uint32_t smallest_factor(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;

  /// Factorization via the table when n <= limit, otherwise by general 64-bit splitting.
  Factorization factorize(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint32_t> smallest_factor_;
};

PrimeTable sieve_primes(std::uint64_t limit,
                        std::uint64_t capacity = PrimeTable::kDefaultCapacity);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

/// Full factorization of a 64-bit integer (trial division, then Pollard-Brent rho).
Factorization factorize_u64(std::uint64_t n);

std::vector<std::uint64_t> divisors(std::uint64_t n);
std::vector<std::uint64_t> divisors(const Factorization& f);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
/// Throws CapacityError when the result does not fit in 64 bits.
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);

/// Multiplicative order of 2 modulo the odd prime p. DomainError otherwise.
std::uint64_t mult_order(std::uint64_t p);
/// Same, using a precomputed factorization of p - 1.
std::uint64_t mult_order(std::uint64_t p, const Factorization& p_minus_one);

int moebius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

/// Largest e with p^e | n. DomainError when n == 0 or p < 2.
unsigned valuation(std::uint64_t n, std::uint64_t p);
unsigned valuation(const BigNat& n, const BigNat& p);

/// ord_p(2^{m_p} - 1), found by lifting 2^{m_p} modulo p^k until it leaves 1.
unsigned mersenne_base_exponent(const BigNat& p, std::uint64_t order);

/// Phi_n(2), computed exactly as prod_{d|n} (2^d - 1)^{mu(n/d)}.
BigNat cyclotomic_eval2(std::uint64_t n);

/// Map p -> m_p for the odd primes of a PrimeTable, with the inverse m -> {(p, e_p)}.
///
/// Primes above the table limit are answered on demand and memoized; memo
/// insertion is serialized behind a mutex, the table part is immutable.
class OrderTable {
 public:
  struct OrderClassMember {
    std::uint64_t prime;
    unsigned exponent;  // e_p = ord_p(2^{m_p} - 1)
  };

  explicit OrderTable(const PrimeTable& table);
  /// Builds its own table up to `limit`.
  explicit OrderTable(std::uint64_t limit);

  OrderTable(const OrderTable&) = delete;
  OrderTable& operator=(const OrderTable&) = delete;

  std::uint64_t limit() const noexcept { return limit_; }

  /// m_p for an odd prime p (table lookup or on-demand computation).
  std::uint64_t order(std::uint64_t p) const;
  std::optional<std::uint64_t> find(std::uint64_t p) const;

  /// Primes p <= limit with m_p == m, ascending.
  std::vector<OrderClassMember> primes_with_order(std::uint64_t m) const;

  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::span<const std::uint32_t> orders() const noexcept { return orders_; }

 private:
  void build(const PrimeTable& table);

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;  // odd primes, ascending
  std::vector<std::uint32_t> orders_;  // parallel to primes_
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> inverse_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

/// ord_p(2^n - 1) = e_p + ord_p(n) when m_p | n, else 0. Never forms 2^n - 1.
unsigned ord_p_mersenne(std::uint64_t p, std::uint64_t n, const OrderTable& orders);

}  // namespace orbitgrowth::arith
