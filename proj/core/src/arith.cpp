#include "orbitgrowth/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "orbitgrowth/errors.hpp"

namespace orbitgrowth::arith {

namespace {

constexpr std::uint32_t kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t block = 128;
    auto step = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += block) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(block, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(std::uint64_t n, Factorization& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back({n, 1});
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

Factorization normalize(Factorization f) {
  std::sort(f.begin(), f.end(), [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  Factorization merged;
  for (const auto& pp : f) {
    if (!merged.empty() && merged.back().prime == pp.prime) {
      merged.back().exponent += pp.exponent;
    } else {
      merged.push_back(pp);
    }
  }
  return merged;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::uint64_t capacity) : limit_(limit) {
  if (limit < 2) throw CapacityError("sieve limit must be at least 2, got " + std::to_string(limit));
  if (limit > capacity) {
    throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds capacity " +
                        std::to_string(capacity));
  }
  smallest_factor_.assign(limit + 1, 0);
  // Linear sieve: every composite is crossed out exactly once by its least prime.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (smallest_factor_[i] == 0) {
      smallest_factor_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t lpf = smallest_factor_[i];
    for (const std::uint32_t p : primes_) {
      if (p > lpf || i * p > limit) break;
      smallest_factor_[i * p] = p;
    }
  }
}

std::uint32_t PrimeTable::smallest_factor(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw DomainError("smallest_factor: " + std::to_string(n) + " outside [2, " + std::to_string(limit_) + "]");
  }
  return smallest_factor_[n];
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n <= limit_) return n >= 2 && smallest_factor_[n] == n;
  return is_prime_u64(n);
}

Factorization PrimeTable::factorize(std::uint64_t n) const {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > limit_) return factorize_u64(n);
  Factorization f;
  while (n > 1) {
    const std::uint32_t p = smallest_factor_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  return f;
}

PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t capacity) { return PrimeTable(limit, capacity); }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (const std::uint32_t p : kSmallPrimes) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3e24.
  for (const std::uint32_t a : kSmallPrimes) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factorization factorize_u64(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize_u64: n must be positive");
  Factorization f;
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.push_back({p, e});
    }
  }
  factor_into(n, f);
  return normalize(std::move(f));
}

std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<std::uint64_t> result{1};
  for (const auto& [p, e] : f) {
    const std::size_t base = result.size();
    std::uint64_t power = 1;
    for (unsigned k = 1; k <= e; ++k) {
      power *= p;
      for (std::size_t i = 0; i < base; ++i) result.push_back(result[i] * power);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) { return divisors(factorize_u64(n)); }

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t q = a / std::gcd(a, b);
  unsigned __int128 value = static_cast<unsigned __int128>(q) * b;
  if (value > UINT64_MAX) {
    throw CapacityError("lcm(" + std::to_string(a) + ", " + std::to_string(b) + ") overflows 64 bits");
  }
  return static_cast<std::uint64_t>(value);
}

std::uint64_t mult_order(std::uint64_t p, const Factorization& p_minus_one) {
  std::uint64_t m = p - 1;
  for (const auto& [q, e] : p_minus_one) {
    for (unsigned k = 0; k < e; ++k) {
      if (powmod(2, m / q, p) != 1) break;
      m /= q;
    }
  }
  return m;
}

std::uint64_t mult_order(std::uint64_t p) {
  if (p % 2 == 0 || !is_prime_u64(p)) {
    throw DomainError("mult_order: " + std::to_string(p) + " is not an odd prime");
  }
  return mult_order(p, factorize_u64(p - 1));
}

int moebius(std::uint64_t n) {
  if (n == 0) throw DomainError("moebius: n must be positive");
  int sign = 1;
  for (const auto& [p, e] : factorize_u64(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw DomainError("euler_phi: n must be positive");
  std::uint64_t phi = n;
  for (const auto& pp : factorize_u64(n)) phi = phi / pp.prime * (pp.prime - 1);
  return phi;
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw DomainError("valuation: ord_p(0) is infinite");
  if (p < 2) throw DomainError("valuation: p must be at least 2");
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

unsigned valuation(const BigNat& n, const BigNat& p) {
  if (n == 0) throw DomainError("valuation: ord_p(0) is infinite");
  if (p < 2) throw DomainError("valuation: p must be at least 2");
  BigNat rest;
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

unsigned mersenne_base_exponent(const BigNat& p, std::uint64_t order) {
  BigNat two(2), modulus(p), residue;
  const BigNat exp(static_cast<unsigned long>(order));
  mpz_powm(residue.get_mpz_t(), two.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  if (residue != 1) {
    throw InvariantViolation("core-arith", "2^" + std::to_string(order) + " is not 1 modulo " + p.get_str());
  }
  unsigned e = 1;
  for (;;) {
    modulus *= p;
    mpz_powm(residue.get_mpz_t(), two.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    if (residue != 1) return e;
    ++e;
  }
}

BigNat cyclotomic_eval2(std::uint64_t n) {
  if (n == 0) throw DomainError("cyclotomic_eval2: n must be positive");
  BigNat numerator = 1, denominator = 1;
  for (const std::uint64_t d : divisors(n)) {
    const int mu = moebius(n / d);
    if (mu == 1) numerator *= mersenne_number(d);
    if (mu == -1) denominator *= mersenne_number(d);
  }
  BigNat result;
  mpz_divexact(result.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  return result;
}

OrderTable::OrderTable(const PrimeTable& table) { build(table); }

OrderTable::OrderTable(std::uint64_t limit) { build(PrimeTable(std::max<std::uint64_t>(limit, 2))); }

void OrderTable::build(const PrimeTable& table) {
  limit_ = table.limit();
  const auto primes = table.primes();
  primes_.reserve(primes.size());
  orders_.reserve(primes.size());
  for (const std::uint32_t p : primes) {
    if (p == 2) continue;
    const auto m = static_cast<std::uint32_t>(mult_order(p, table.factorize(p - 1)));
    primes_.push_back(p);
    orders_.push_back(m);
    inverse_[m].push_back(p);
  }
}

std::optional<std::uint64_t> OrderTable::find(std::uint64_t p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return std::nullopt;
  return orders_[static_cast<std::size_t>(it - primes_.begin())];
}

std::uint64_t OrderTable::order(std::uint64_t p) const {
  if (p <= limit_) {
    if (auto m = find(p)) return *m;
    throw DomainError("order: " + std::to_string(p) + " is not an odd prime");
  }
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(p); it != memo_.end()) return it->second;
  }
  const std::uint64_t m = mult_order(p);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(p, m);
  return m;
}

std::vector<OrderTable::OrderClassMember> OrderTable::primes_with_order(std::uint64_t m) const {
  std::vector<OrderClassMember> members;
  if (auto it = inverse_.find(m); it != inverse_.end()) {
    for (const std::uint32_t p : it->second) {
      members.push_back({p, mersenne_base_exponent(BigNat(static_cast<unsigned long>(p)), m)});
    }
  }
  return members;
}

unsigned ord_p_mersenne(std::uint64_t p, std::uint64_t n, const OrderTable& orders) {
  if (n == 0) throw DomainError("ord_p_mersenne: n must be positive");
  if (p == 2) return 0;
  const std::uint64_t m = orders.order(p);
  if (n % m != 0) return 0;
  return mersenne_base_exponent(BigNat(static_cast<unsigned long>(p)), m) + valuation(n, p);
}

}  // namespace orbitgrowth::arith
