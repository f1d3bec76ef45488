#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/errors.hpp"

using namespace orbitgrowth;
using namespace orbitgrowth::arith;

TEST(Sieve, SmallLimits) {
  const auto t10 = sieve_primes(10);
  EXPECT_EQ(std::vector<std::uint32_t>(t10.primes().begin(), t10.primes().end()),
            (std::vector<std::uint32_t>{2, 3, 5, 7}));
  const auto t2 = sieve_primes(2);
  EXPECT_EQ(t2.prime_count(), 1u);
  EXPECT_THROW(sieve_primes(1), CapacityError);
  EXPECT_THROW(sieve_primes(1000, 100), CapacityError);
}

TEST(Sieve, CountToOneMillion) {
  // Oracle: trial division over the same range.
  std::size_t count = 0;
  for (std::uint64_t n = 2; n <= 1'000'000; ++n) count += oracle::is_prime_trial(n);
  EXPECT_EQ(count, 78498u);
  EXPECT_EQ(sieve_primes(1'000'000).prime_count(), count);
}

TEST(Sieve, SmallestFactorAndFactorize) {
  const auto t = sieve_primes(1000);
  EXPECT_EQ(t.smallest_factor(91), 7u);
  EXPECT_TRUE(t.is_prime(997));
  EXPECT_FALSE(t.is_prime(999));
  EXPECT_EQ(t.factorize(360), (Factorization{{2, 3}, {3, 2}, {5, 1}}));
  EXPECT_EQ(t.factorize(1000003), (Factorization{{1000003, 1}}));
}

TEST(Order, Examples) {
  EXPECT_EQ(mult_order(233), 29u);
  EXPECT_EQ(mult_order(1103), 29u);
  EXPECT_EQ(mult_order(2089), 29u);
  EXPECT_EQ(mult_order(3), 2u);
  EXPECT_EQ(mult_order(7), 3u);
  EXPECT_THROW(mult_order(2), DomainError);
  EXPECT_THROW(mult_order(15), DomainError);
}

TEST(Order, MatchesIterationAndDividesPMinusOne) {
  const OrderTable table(1'000'000);
  const auto primes = table.primes();
  const auto orders = table.orders();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    ASSERT_EQ((primes[i] - 1) % orders[i], 0u) << primes[i];
    if (primes[i] < 20'000) {
      ASSERT_EQ(orders[i], oracle::order_by_iteration(primes[i])) << primes[i];
    }
  }
}

TEST(Order, BeyondTableComputedOnDemand) {
  const OrderTable table(1000);
  EXPECT_EQ(table.order(1'000'003), oracle::order_by_iteration(1'000'003));
  EXPECT_EQ(table.find(1'000'003), std::nullopt);
  const auto class29 = OrderTable(3000).primes_with_order(29);
  ASSERT_EQ(class29.size(), 3u);
  EXPECT_EQ(class29[0].prime, 233u);
  EXPECT_EQ(class29[2].prime, 2089u);
}

TEST(Multiplicative, MoebiusAndPhi) {
  EXPECT_EQ(moebius(1), 1);
  EXPECT_EQ(euler_phi(1), 1u);
  EXPECT_EQ(moebius(12), 0);
  EXPECT_EQ(euler_phi(12), 4u);
  EXPECT_EQ(moebius(30), -1);
  EXPECT_EQ(euler_phi(30), 8u);
  EXPECT_THROW(moebius(0), DomainError);
  EXPECT_THROW(euler_phi(0), DomainError);
  for (std::uint64_t n = 1; n <= 500; ++n) {
    std::uint64_t coprime = 0;
    for (std::uint64_t k = 1; k <= n; ++k) coprime += gcd(k, n) == 1;
    ASSERT_EQ(euler_phi(n), coprime) << n;
    int mu_sum = 0;
    for (const auto d : divisors(n)) mu_sum += moebius(d);
    ASSERT_EQ(mu_sum, n == 1 ? 1 : 0) << n;
  }
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(63, 3), 2u);
  EXPECT_EQ(valuation(63, 5), 0u);
  EXPECT_EQ(valuation(2187 * 2, 3), 7u);
  EXPECT_THROW(valuation(0, 3), DomainError);
}

TEST(Valuation, MersenneExamples) {
  const OrderTable orders(1 << 16);
  EXPECT_EQ(ord_p_mersenne(3, 6, orders), 2u);
  EXPECT_EQ(ord_p_mersenne(5, 3, orders), 0u);
  EXPECT_EQ(ord_p_mersenne(1093, 364, orders), 2u);
  EXPECT_EQ(oracle::big_valuation(oracle::mersenne(364), 1093), 2u);
  EXPECT_EQ(ord_p_mersenne(3511, 1755, orders), 2u);
}

TEST(Valuation, WieferichBaseExponents) {
  EXPECT_EQ(mersenne_base_exponent(BigNat(1093), 364), 2u);
  EXPECT_EQ(mersenne_base_exponent(BigNat(3511), 1755), 2u);
  EXPECT_EQ(mersenne_base_exponent(BigNat(7), 3), 1u);
}

TEST(Valuation, MersenneAgreesWithBigIntegerOracle) {
  const OrderTable orders(10'000);
  const auto table = sieve_primes(2'000);
  for (const auto p : table.primes()) {
    if (p == 2) continue;
    for (unsigned n = 1; n <= 64; ++n) {
      ASSERT_EQ(ord_p_mersenne(p, n, orders), oracle::big_valuation(oracle::mersenne(n), p)) << p << ' ' << n;
    }
  }
}

TEST(Cyclotomic, Examples) {
  EXPECT_EQ(cyclotomic_eval2(1), 1);
  EXPECT_EQ(cyclotomic_eval2(6), 3);
  EXPECT_EQ(cyclotomic_eval2(29), 536870911);
}

TEST(Cyclotomic, ProductGrowthAndGcdProperties) {
  std::vector<BigNat> phi(201);
  for (std::uint64_t n = 1; n <= 200; ++n) phi[n] = cyclotomic_eval2(n);
  for (std::uint64_t n = 1; n <= 200; ++n) {
    BigNat product = 1, earlier = 1;
    for (const auto d : divisors(n)) {
      product *= phi[d];
      if (d < n) earlier *= phi[d];
    }
    ASSERT_EQ(product, oracle::mersenne(static_cast<unsigned>(n))) << n;
    if (n >= 3) {
      BigNat lower = 1;
      if (euler_phi(n) >= 2) lower <<= (euler_phi(n) - 2);
      ASSERT_GE(phi[n], lower) << n;
    }
    BigNat g;
    mpz_gcd(g.get_mpz_t(), phi[n].get_mpz_t(), earlier.get_mpz_t());
    ASSERT_TRUE(mpz_divisible_ui_p(BigNat(static_cast<unsigned long>(n)).get_mpz_t(), g.get_ui())) << n;
  }
}

TEST(Factorize, U64) {
  EXPECT_EQ(factorize_u64(2047), (Factorization{{23, 1}, {89, 1}}));
  const std::uint64_t big = 4294967291ULL * 4294967279ULL;
  EXPECT_EQ(factorize_u64(big), (Factorization{{4294967279ULL, 1}, {4294967291ULL, 1}}));
  EXPECT_TRUE(is_prime_u64(18446744073709551557ULL));
  EXPECT_FALSE(is_prime_u64(3215031751ULL));
}
