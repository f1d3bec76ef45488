#include "orbitgrowth/context.hpp"

namespace orbitgrowth {

Context::Context(const ContextOptions& options)
    : orders_(options.order_limit), budget_(options.budget), threads_(options.threads ? options.threads : 1) {
  if (options.load_default_cache) mersenne::FactorCache::open_default(cache_);
}

mersenne::MersenneFactorization Context::factorization(std::uint64_t m) {
  if (!budget_) return mersenne::cached_factorization(m, cache_);
  auto f = mersenne::factor_mersenne(m, cache_, *budget_);
  cache_.commit();
  return f;
}

const std::vector<mersenne::BigPrimePower>& Context::primitive_primes(std::uint64_t m) {
  {
    std::lock_guard lock(primitive_mutex_);
    if (auto it = primitive_.find(m); it != primitive_.end()) return it->second;
  }
  auto primes = mersenne::primitive_primes(m, cache_, budget_);
  if (budget_) cache_.commit();
  std::lock_guard lock(primitive_mutex_);
  return primitive_.emplace(m, std::move(primes)).first->second;
}

}  // namespace orbitgrowth
