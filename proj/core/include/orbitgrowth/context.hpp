#pragma once

// Shared state for the engines: an order table, the factor cache and the optional
// on-demand factoring budget.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/mersenne.hpp"

namespace orbitgrowth {

struct ContextOptions {
  std::uint64_t order_limit = std::uint64_t{1} << 20;
  /// Load the seed cache and ORBITGROWTH_CACHE.
  bool load_default_cache = true;
  /// When set, missing factorizations are computed (and committed) instead of
  /// raising CacheMiss.
  std::optional<mersenne::Budget> budget;
  unsigned threads = 1;
};

class Context {
 public:
  explicit Context(const ContextOptions& options = {});
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  const arith::OrderTable& orders() const noexcept { return orders_; }
  mersenne::FactorCache& cache() noexcept { return cache_; }
  const std::optional<mersenne::Budget>& budget() const noexcept { return budget_; }
  unsigned threads() const noexcept { return threads_; }

  mersenne::MersenneFactorization factorization(std::uint64_t m);
  /// Memoized primitive prime divisors (p, e_p) of 2^m - 1.
  const std::vector<mersenne::BigPrimePower>& primitive_primes(std::uint64_t m);

 private:
  arith::OrderTable orders_;
  mersenne::FactorCache cache_;
  std::optional<mersenne::Budget> budget_;
  unsigned threads_;
  std::mutex primitive_mutex_;
  std::map<std::uint64_t, std::vector<mersenne::BigPrimePower>> primitive_;
};

}  // namespace orbitgrowth
