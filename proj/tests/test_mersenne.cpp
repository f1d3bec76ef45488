#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/context.hpp"
#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/mersenne.hpp"

using namespace orbitgrowth;
using namespace orbitgrowth::mersenne;

namespace {

std::vector<std::string> primes_of(const std::vector<BigPrimePower>& f) {
  std::vector<std::string> out;
  for (const auto& pp : f) out.push_back(pp.prime.get_str());
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  auto path = std::filesystem::temp_directory_path() / ("orbitgrowth_test_" + name);
  std::filesystem::remove(path);
  return path;
}

}  // namespace

TEST(FactorMersenne, Examples) {
  FactorCache cache;
  EXPECT_EQ(primes_of(factor_mersenne(29, cache).factors), (std::vector<std::string>{"233", "1103", "2089"}));
  EXPECT_TRUE(factor_mersenne(1, cache).factors.empty());
  EXPECT_EQ(primes_of(factor_mersenne(11, cache).factors), (std::vector<std::string>{"23", "89"}));
}

TEST(FactorMersenne, ExponentsReadFromFullValuation) {
  FactorCache cache;
  for (const unsigned m : {6u, 42u, 100u}) {
    const auto f = factor_mersenne(m, cache);
    for (const auto& pp : f.factors) {
      EXPECT_EQ(pp.exponent, oracle::big_valuation(oracle::mersenne(m), pp.prime.get_ui())) << m;
    }
    EXPECT_EQ(f.product(), oracle::mersenne(m));
  }
  EXPECT_EQ(factor_mersenne(42, cache).factors[1].exponent, 2u);  // 7^2 | 2^42 - 1
}

TEST(FactorMersenne, BudgetExhaustionCarriesCofactorAndCachesNothing) {
  FactorCache cache;
  Budget tiny;
  tiny.limit = std::chrono::duration<double>(1e-4);
  tiny.trial_bound = 10;
  try {
    factor_mersenne(1061, cache, tiny);
    FAIL() << "expected BudgetExhausted";
  } catch (const BudgetExhausted& e) {
    EXPECT_EQ(e.exponent(), 1061u);
    EXPECT_FALSE(e.cofactor().empty());
  }
  EXPECT_FALSE(cache.contains(1061));
}

TEST(SeedCache, EveryEntryVerifiesAndCoversTo128) {
  FactorCache cache;
  cache.load(FactorCache::seed_path());
  for (std::uint64_t m = 1; m <= 128; ++m) {
    const auto f = cache.find(m);
    ASSERT_TRUE(f.has_value()) << m;
    ASSERT_EQ(f->product(), oracle::mersenne(static_cast<unsigned>(m))) << m;
    ASSERT_TRUE(f->certified) << m;
  }
}

TEST(FactorCache, LoaderRejectsBadLineWithLineNumber) {
  const auto path = temp_file("bad.jsonl");
  {
    std::ofstream out(path);
    out << R"({"m":3,"factors":[[7,1]]})" << '\n' << R"({"m":4,"factors":[[3,1],[7,1]]})" << '\n';
  }
  FactorCache cache;
  try {
    cache.load(path);
    FAIL() << "expected a load error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(FactorCache, PersistsAppendOnlyAndReloads) {
  const auto path = temp_file("persist.jsonl");
  {
    FactorCache cache;
    cache.persist_to(path);
    factor_mersenne(29, cache);
    factor_mersenne(11, cache);
    cache.commit();
  }
  FactorCache reloaded;
  reloaded.load(path);
  EXPECT_TRUE(reloaded.contains(29));
  EXPECT_TRUE(reloaded.contains(11));
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, R"({"m":11,"factors":[[23,1],[89,1]]})");
}

TEST(FactorCache, BigFactorsRoundTripAsStrings) {
  FactorCache seed;
  seed.load(FactorCache::seed_path());
  const auto line = seed.find(127)->to_json_line();
  EXPECT_EQ(line, R"({"m":127,"factors":[["170141183460469231731687303715884105727",1]]})");
}

TEST(FactorCache, ConflictingInsertIsInvariantViolation) {
  FactorCache cache;
  factor_mersenne(6, cache);
  MersenneFactorization wrong;
  wrong.m = 6;
  wrong.factors = {{BigNat(63), 1}};
  EXPECT_THROW(cache.insert(wrong), InvariantViolation);
}

TEST(CachedFactorization, MissNamesExponent) {
  FactorCache empty;
  try {
    cached_factorization(77, empty);
    FAIL();
  } catch (const CacheMiss& e) {
    EXPECT_EQ(e.exponent(), 77u);
  }
}

TEST(Primitive, Examples) {
  Context ctx;
  EXPECT_TRUE(ctx.primitive_primes(6).empty());
  EXPECT_TRUE(ctx.primitive_primes(1).empty());
  EXPECT_EQ(primes_of(ctx.primitive_primes(29)), (std::vector<std::string>{"233", "1103", "2089"}));
  EXPECT_EQ(primes_of(ctx.primitive_primes(4)), (std::vector<std::string>{"5"}));
  EXPECT_EQ(primitive_part(6, ctx.cache()), 1);
  EXPECT_EQ(primitive_part(11, ctx.cache()), 2047);
  EXPECT_EQ(primitive_part(4, ctx.cache()), 5);
}

TEST(Primitive, ZsigmondyExceptionsUpTo128) {
  Context ctx;
  for (std::uint64_t m = 1; m <= 128; ++m) {
    EXPECT_EQ(ctx.primitive_primes(m).empty(), m == 1 || m == 6) << m;
  }
}

TEST(Primitive, OrdersAreExact) {
  Context ctx;
  for (std::uint64_t m = 2; m <= 64; ++m) {
    for (const auto& pp : ctx.primitive_primes(m)) {
      if (pp.prime.fits_ulong_p() && pp.prime < 4'000'000'000UL) {
        ASSERT_EQ(arith::mult_order(pp.prime.get_ui()), m);
      }
    }
  }
}

TEST(Primitive, CloseYourEyesBound) {
  // |2^n - 1|_S <= n / 2^{phi(n) - 2} with S the primitive primes of n.
  Context ctx;
  for (std::uint64_t n = 3; n <= 64; ++n) {
    if (n == 6) continue;
    const BigNat part = primitive_part(n, ctx.cache());
    // |2^n - 1|_S = 1 / part, so the bound reads part * n >= 2^{phi(n) - 2}.
    BigNat rhs = 1;
    rhs <<= (arith::euler_phi(n) - 2);
    ASSERT_GE(part * static_cast<unsigned long>(n), rhs) << n;
  }
}

TEST(Primitive, SomeExponentHasTwoPrimitivePrimes) {
  Context ctx;
  int count = 0;
  for (std::uint64_t m = 1; m <= 64; ++m) count += ctx.primitive_primes(m).size() >= 2;
  EXPECT_GE(count, 1);
}
