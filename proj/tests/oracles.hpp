#pragma once

// Slow, independent reference computations used as test oracles.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Least m >= 1 with 2^m = 1 mod p, by iterating x -> 2x mod p.
inline std::uint64_t order_by_iteration(std::uint64_t p) {
  std::uint64_t x = 2 % p, m = 1;
  while (x != 1) {
    x = (2 * x) % p;
    ++m;
  }
  return m;
}

/// Exponent of p in n by repeated exact division.
inline unsigned big_valuation(mpz_class n, unsigned long p) {
  unsigned e = 0;
  while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    n /= p;
    ++e;
  }
  return e;
}

inline mpz_class mersenne(unsigned n) {
  mpz_class v = 1;
  v <<= n;
  return v - 1;
}

/// Number of primitive binary necklaces (Lyndon words) of length n: words that are
/// strictly smaller than each of their proper rotations.
inline std::uint64_t lyndon_words(unsigned n) {
  std::uint64_t count = 0;
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t w = 0; w <= mask; ++w) {
    bool lyndon = true;
    for (unsigned k = 1; k < n && lyndon; ++k) {
      const std::uint64_t rot = ((w << k) | (w >> (n - k))) & mask;
      if (rot <= w) lyndon = false;
    }
    count += lyndon;
  }
  return count;
}

inline bool squarefree(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % (d * d) == 0) return false;
  }
  return true;
}

inline unsigned big_omega(std::uint64_t n) {
  unsigned k = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      n /= d;
      ++k;
    }
  }
  return k + (n > 1);
}

}  // namespace oracle
