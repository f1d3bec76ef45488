#include "orbitgrowth/mersenne.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/errors.hpp"

namespace orbitgrowth::mersenne {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kPrimalityRounds = 40;
const BigNat kUint64Max(std::to_string(UINT64_MAX), 10);

bool probable_prime(const BigNat& n) { return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityRounds) > 0; }

struct Deadline {
  Clock::time_point at;
  std::uint64_t exponent;
  bool expired() const { return Clock::now() > at; }
};

/// Pollard-Brent rho on a composite that is not a perfect power; returns a proper factor.
BigNat rho_split(const BigNat& n, const Deadline& deadline) {
  const std::uint64_t block = 256;
  for (unsigned long c = 1;; ++c) {
    BigNat x = 2, y = 2, ys = 2, q = 1, g = 1, diff;
    auto step = [&](BigNat& v) {
      v *= v;
      v += c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += block) {
        if (deadline.expired()) {
          throw BudgetExhausted(deadline.exponent, n.get_str(),
                                "factor budget exhausted for 2^" + std::to_string(deadline.exponent) +
                                    "-1 with composite cofactor " + n.get_str());
        }
        ys = y;
        const std::uint64_t count = std::min(block, r - k);
        for (std::uint64_t i = 0; i < count; ++i) {
          step(y);
          diff = x - y;
          mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
          q *= diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g == n) {
      do {
        step(ys);
        diff = x - ys;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_completely(const BigNat& n, const Deadline& deadline, std::vector<BigNat>& primes) {
  if (n == 1) return;
  if (probable_prime(n)) {
    primes.push_back(n);
    return;
  }
  for (unsigned long k = 2; k < 128; ++k) {
    if (mpz_root(nullptr, n.get_mpz_t(), k) == 0) {
      BigNat root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
        split_completely(root, deadline, primes);
        return;
      }
    }
  }
  const BigNat d = rho_split(n, deadline);
  split_completely(d, deadline, primes);
  split_completely(BigNat(n / d), deadline, primes);
}

BigNat parse_factor(const nlohmann::json& value) {
  if (value.is_number_unsigned()) return BigNat(std::to_string(value.get<std::uint64_t>()), 10);
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw DomainError("factor string is not a decimal natural: '" + s + "'");
    }
    return BigNat(s, 10);
  }
  throw DomainError("factor must be an unsigned integer or a decimal string");
}

MersenneFactorization parse_line(const std::string& line) {
  const auto doc = nlohmann::json::parse(line);
  if (!doc.is_object()) throw DomainError("cache line is not a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "m" && key != "factors") throw DomainError("unknown field '" + key + "'");
  }
  MersenneFactorization f;
  f.m = doc.at("m").get<std::uint64_t>();
  for (const auto& entry : doc.at("factors")) {
    if (!entry.is_array() || entry.size() != 2) throw DomainError("factor entry must be [prime, exponent]");
    f.factors.push_back({parse_factor(entry[0]), entry[1].get<unsigned>()});
  }
  f.certified = std::all_of(f.factors.begin(), f.factors.end(),
                            [](const BigPrimePower& pp) { return probable_prime(pp.prime); });
  return f;
}

MersenneFactorization factor_with_deadline(std::uint64_t m, FactorCache& cache, const Budget& budget,
                                           const Deadline& deadline) {
  if (auto hit = cache.find(m)) return *hit;
  if (m == 0) throw DomainError("factor_mersenne: m must be positive");

  MersenneFactorization result;
  result.m = m;
  if (m == 1) {
    result.certified = true;
    cache.insert(result);
    return result;
  }

  const BigNat value = mersenne_number(m);
  BigNat rest = value;
  std::vector<BigNat> primes;

  for (const std::uint64_t d : arith::divisors(m)) {
    if (d == 1 || d == m) continue;
    const Deadline inner{deadline.at, d};
    for (const auto& pp : factor_with_deadline(d, cache, budget, inner).factors) {
      if (mpz_divisible_p(rest.get_mpz_t(), pp.prime.get_mpz_t())) {
        mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), pp.prime.get_mpz_t());
        primes.push_back(pp.prime);
      }
    }
  }

  // What remains is a product of primitive primes, each congruent to 1 modulo m
  // (and modulo 2m when m is odd, since such primes are odd).
  const std::uint64_t step = (m % 2 == 1) ? 2 * m : m;
  std::uint64_t candidate = step + 1;
  bool exhausted_sqrt = false;
  for (; candidate <= budget.trial_bound; candidate += step) {
    if (BigNat(static_cast<unsigned long>(candidate)) * candidate > rest) {
      exhausted_sqrt = true;
      break;
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), candidate)) {
      const BigNat q(static_cast<unsigned long>(candidate));
      mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), q.get_mpz_t());
      primes.push_back(q);
    }
    if (rest == 1) break;
  }
  if (rest > 1) {
    if (exhausted_sqrt) {
      primes.push_back(rest);
    } else {
      split_completely(rest, deadline, primes);
    }
  }

  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const BigNat& p : primes) {
    result.factors.push_back({p, arith::valuation(value, p)});
  }
  result.certified = std::all_of(result.factors.begin(), result.factors.end(),
                                 [](const BigPrimePower& pp) { return probable_prime(pp.prime); });
  cache.insert(result);
  return result;
}

}  // namespace

BigNat MersenneFactorization::product() const {
  BigNat product = 1, power;
  for (const auto& pp : factors) {
    mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    product *= power;
  }
  return product;
}

std::string MersenneFactorization::to_json_line() const {
  std::ostringstream out;
  out << "{\"m\":" << m << ",\"factors\":[";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out << ',';
    const bool fits = factors[i].prime <= kUint64Max;
    out << '[' << (fits ? "" : "\"") << factors[i].prime.get_str() << (fits ? "" : "\"") << ','
        << factors[i].exponent << ']';
  }
  out << "]}";
  return out.str();
}

void verify(const MersenneFactorization& f) {
  if (f.m == 0) throw InvariantViolation("mersenne-factors", "exponent 0 is not allowed");
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    if (f.factors[i].exponent == 0 || f.factors[i].prime < 2) {
      throw InvariantViolation("mersenne-factors", "bad factor entry for m=" + std::to_string(f.m));
    }
    if (i > 0 && !(f.factors[i - 1].prime < f.factors[i].prime)) {
      throw InvariantViolation("mersenne-factors", "factors not distinct and ascending for m=" + std::to_string(f.m));
    }
  }
  if (f.product() != mersenne_number(f.m)) {
    throw InvariantViolation("mersenne-factors", "product check failed for 2^" + std::to_string(f.m) + "-1");
  }
}

void FactorCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open factor cache '" + path.string() + "'");
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& why) {
      return InvariantViolation("mersenne-factors",
                                path.string() + ":" + std::to_string(line_number) + ": " + why);
    };
    MersenneFactorization f;
    try {
      f = parse_line(line);
      verify(f);
    } catch (const InvariantViolation& e) {
      throw fail(e.what());
    } catch (const std::exception& e) {
      throw fail(std::string("malformed entry: ") + e.what());
    }
    std::unique_lock lock(mutex_);
    const auto [it, inserted] = entries_.emplace(f.m, f);
    if (!inserted && !(it->second.factors == f.factors)) {
      throw fail("conflicting entry for m=" + std::to_string(f.m));
    }
  }
}

void FactorCache::persist_to(const std::filesystem::path& path) {
  std::unique_lock lock(mutex_);
  persist_path_ = path;
}

std::optional<MersenneFactorization> FactorCache::find(std::uint64_t m) const {
  std::shared_lock lock(mutex_);
  if (auto it = entries_.find(m); it != entries_.end()) return it->second;
  return std::nullopt;
}

bool FactorCache::contains(std::uint64_t m) const {
  std::shared_lock lock(mutex_);
  return entries_.count(m) > 0;
}

std::size_t FactorCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<std::uint64_t> FactorCache::exponents() const {
  std::shared_lock lock(mutex_);
  std::vector<std::uint64_t> keys;
  for (const auto& [m, _] : entries_) keys.push_back(m);
  return keys;
}

void FactorCache::insert(MersenneFactorization f) {
  verify(f);
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = entries_.emplace(f.m, f);
  if (!inserted) {
    if (!(it->second.factors == f.factors)) {
      throw InvariantViolation("mersenne-factors", "conflicting factorization for m=" + std::to_string(f.m));
    }
    return;
  }
  dirty_.insert(f.m);
}

void FactorCache::commit() {
  std::unique_lock lock(mutex_);
  if (!persist_path_ || dirty_.empty()) return;
  std::ofstream out(*persist_path_, std::ios::app);
  if (!out) throw DomainError("cannot append to factor cache '" + persist_path_->string() + "'");
  for (const std::uint64_t m : dirty_) out << entries_.at(m).to_json_line() << '\n';
  out.flush();
  if (!out) throw DomainError("write to factor cache '" + persist_path_->string() + "' failed");
  dirty_.clear();
}

std::filesystem::path FactorCache::seed_path() {
  if (const char* env = std::getenv("ORBITGROWTH_SEED"); env && *env) return env;
  const std::filesystem::path build_tree(ORBITGROWTH_SEED_CACHE_BUILD);
  if (std::filesystem::exists(build_tree)) return build_tree;
  return ORBITGROWTH_SEED_CACHE_INSTALL;
}

void FactorCache::open_default(FactorCache& cache) {
  const auto seed = seed_path();
  if (std::filesystem::exists(seed)) cache.load(seed);
  if (const char* env = std::getenv("ORBITGROWTH_CACHE"); env && *env) {
    const std::filesystem::path user(env);
    const bool same = std::filesystem::exists(seed) && std::filesystem::exists(user) &&
                      std::filesystem::equivalent(seed, user);
    if (std::filesystem::exists(user) && !same) cache.load(user);
    cache.persist_to(user);
  }
  // Entries loaded from disk are already persisted.
  std::unique_lock lock(cache.mutex_);
  cache.dirty_.clear();
}

MersenneFactorization factor_mersenne(std::uint64_t m, FactorCache& cache, const Budget& budget) {
  const Deadline deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(budget.limit), m};
  return factor_with_deadline(m, cache, budget, deadline);
}

MersenneFactorization cached_factorization(std::uint64_t m, const FactorCache& cache) {
  if (auto hit = cache.find(m)) return *hit;
  throw CacheMiss(m, "factor cache has no entry for 2^" + std::to_string(m) + "-1 (exponent " +
                         std::to_string(m) + ")");
}

std::vector<BigPrimePower> primitive_primes(std::uint64_t m, FactorCache& cache,
                                            const std::optional<Budget>& budget) {
  if (m == 0) throw DomainError("primitive_primes: m must be positive");
  auto get = [&](std::uint64_t d) {
    return budget ? factor_mersenne(d, cache, *budget) : cached_factorization(d, cache);
  };
  const MersenneFactorization full = get(m);
  std::vector<BigNat> earlier;
  for (const auto& [q, _] : arith::factorize_u64(m)) {
    for (const auto& pp : get(m / q).factors) earlier.push_back(pp.prime);
  }
  std::vector<BigPrimePower> result;
  for (const auto& pp : full.factors) {
    if (std::find(earlier.begin(), earlier.end(), pp.prime) == earlier.end()) result.push_back(pp);
  }
  return result;
}

BigNat primitive_part(std::uint64_t n, FactorCache& cache, const std::optional<Budget>& budget) {
  BigNat part = 1, power;
  for (const auto& pp : primitive_primes(n, cache, budget)) {
    mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    part *= power;
  }
  return part;
}

}  // namespace orbitgrowth::mersenne
