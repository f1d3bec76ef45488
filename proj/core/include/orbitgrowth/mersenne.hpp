#pragma once

// Factorizations of 2^m - 1, their persistent line-delimited JSON cache, primitive
// prime divisors and primitive parts.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "orbitgrowth/numeric.hpp"

namespace orbitgrowth::mersenne {

struct BigPrimePower {
  BigNat prime;
  unsigned exponent = 0;
  friend bool operator==(const BigPrimePower&, const BigPrimePower&) = default;
};

struct MersenneFactorization {
  std::uint64_t m = 0;
  std::vector<BigPrimePower> factors;  // distinct primes, ascending
  /// Every factor passed 40 rounds of probabilistic primality testing.
  bool certified = false;

  BigNat product() const;
  /// One cache line: {"m":29,"factors":[[233,1],[1103,1],[2089,1]]}.
  std::string to_json_line() const;
};

/// Checks prod p^e == 2^m - 1 and ordering; throws InvariantViolation otherwise.
void verify(const MersenneFactorization& f);

/// Map m -> verified factorization, optionally persisted append-only to a file.
///
/// Readers see verified entries only. Inserts go through a single writer lock.
class FactorCache {
 public:
  FactorCache() = default;
  FactorCache(const FactorCache&) = delete;
  FactorCache& operator=(const FactorCache&) = delete;

  /// Loads every line of `path`; a malformed or non-verifying line is a hard error
  /// naming its line number.
  void load(const std::filesystem::path& path);
  /// New entries are appended to `path` on commit().
  void persist_to(const std::filesystem::path& path);

  std::optional<MersenneFactorization> find(std::uint64_t m) const;
  bool contains(std::uint64_t m) const;
  std::size_t size() const;
  std::vector<std::uint64_t> exponents() const;

  /// Verifies, then stores. Inserting an existing exponent with different factors
  /// is an invariant violation.
  void insert(MersenneFactorization f);
  /// Appends dirty entries to the persistence file, in exponent order.
  void commit();

  /// Seed cache (shipped with the library) plus the file named by ORBITGROWTH_CACHE,
  /// which also becomes the persistence target.
  static void open_default(FactorCache& cache);
  static std::filesystem::path seed_path();

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::uint64_t, MersenneFactorization> entries_;
  std::set<std::uint64_t> dirty_;
  std::optional<std::filesystem::path> persist_path_;
};

struct Budget {
  std::chrono::duration<double> limit{10.0};
  /// Largest trial divisor k*m + 1 tried before switching to rho.
  std::uint64_t trial_bound = 10'000'000;
};

/// Complete factorization of 2^m - 1 (cache first). Peels the factorizations of
/// 2^d - 1 for proper divisors d, trial-divides the rest by candidates 1 mod m, then
/// applies Pollard-Brent rho. BudgetExhausted carries the unsplit cofactor; partial
/// results are never cached.
MersenneFactorization factor_mersenne(std::uint64_t m, FactorCache& cache, const Budget& budget = {});

/// Like factor_mersenne but never factors: CacheMiss when m is not cached.
MersenneFactorization cached_factorization(std::uint64_t m, const FactorCache& cache);

/// {(p, e_p) : m_p = m}: factors of 2^m - 1 dividing no 2^d - 1 with d | m, d < m.
/// With `budget` absent, every needed factorization must already be cached.
std::vector<BigPrimePower> primitive_primes(std::uint64_t m, FactorCache& cache,
                                            const std::optional<Budget>& budget = std::nullopt);

/// (2^n - 1)^*: product of p^{ord_p(2^n - 1)} over the primitive primes of n.
BigNat primitive_part(std::uint64_t n, FactorCache& cache,
                      const std::optional<Budget>& budget = std::nullopt);

}  // namespace orbitgrowth::mersenne
