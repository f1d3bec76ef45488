#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/mertens.hpp"

using namespace orbitgrowth;
using namespace orbitgrowth::mertens;
using sets::OrderSet;
using sets::OrderSetSpec;
using sets::PrimeClass;
using sets::PrimeSetSpec;

namespace {

Context& shared_context() {
  static Context ctx;
  return ctx;
}

std::vector<PrimeSetSpec> round_trip_sets() {
  return {PrimeSetSpec::explicit_finite({}), PrimeSetSpec::explicit_finite({3}), PrimeSetSpec::explicit_finite({3, 7}),
          PrimeSetSpec::induced(OrderSetSpec::multiples_of(PrimeClass::list({3})))};
}

}  // namespace

TEST(PeriodicPoints, Examples) {
  auto& ctx = shared_context();
  EXPECT_EQ(periodic_points(4, PrimeSetSpec::explicit_finite({}), ctx), 15);
  EXPECT_EQ(periodic_points(4, PrimeSetSpec::explicit_finite({3}), ctx), 5);
  EXPECT_EQ(periodic_points(6, PrimeSetSpec::explicit_finite({3, 7}), ctx), 1);
}

TEST(PeriodicPoints, DivideMersenneNumbers) {
  auto& ctx = shared_context();
  for (const auto& S : round_trip_sets()) {
    const auto F = periodic_point_table(60, S, ctx);
    for (unsigned n = 1; n <= 60; ++n) {
      ASSERT_TRUE(mpz_divisible_p(oracle::mersenne(n).get_mpz_t(), F[n].get_mpz_t())) << n;
    }
  }
}

TEST(OrbitCount, Examples) {
  auto& ctx = shared_context();
  EXPECT_EQ(orbit_count(4, PrimeSetSpec::explicit_finite({}), ctx), 3);
  EXPECT_EQ(orbit_count(1, PrimeSetSpec::explicit_finite({}), ctx), 1);
  EXPECT_EQ(orbit_count(2, PrimeSetSpec::explicit_finite({3}), ctx), 0);
}

TEST(OrbitCount, EmptySetMatchesNecklaces) {
  // Closed orbits of length n >= 2 of x -> 2x on the circle are the Lyndon words of
  // length n; n = 1 has the single fixed point 0 (the words 0 and 1 coincide).
  auto& ctx = shared_context();
  const auto S = PrimeSetSpec::explicit_finite({});
  for (unsigned n = 2; n <= 16; ++n) ASSERT_EQ(orbit_count(n, S, ctx), oracle::lyndon_words(n)) << n;
}

TEST(OrbitCount, MoebiusRoundTrip) {
  auto& ctx = shared_context();
  for (const auto& S : round_trip_sets()) {
    const auto F = periodic_point_table(40, S, ctx);
    for (std::uint64_t n = 1; n <= 40; ++n) {
      BigNat total = 0;
      for (const auto d : arith::divisors(n)) total += BigNat(static_cast<unsigned long>(d)) * orbit_count(d, F);
      ASSERT_EQ(total, F[n]) << n;
    }
  }
}

TEST(MertensExact, Examples) {
  auto& ctx = shared_context();
  const auto series = mertens_exact(4, PrimeSetSpec::explicit_finite({}), ctx);
  ASSERT_EQ(series.samples.size(), 4u);
  EXPECT_EQ(*series.samples.back().exact, ExactRational(19, 16));
  const auto one = mertens_exact(1, PrimeSetSpec::explicit_finite({3, 7}), ctx);
  EXPECT_EQ(*one.samples.front().exact, ExactRational(1, 2));
  EXPECT_THROW(mertens_exact(121, PrimeSetSpec::explicit_finite({}), ctx), CapacityError);
}

TEST(MertensExact, AddingTwoChangesNothing) {
  auto& ctx = shared_context();
  const auto a = mertens_exact(40, PrimeSetSpec::explicit_finite({3, 5}), ctx);
  PrimeSetSpec with_two = PrimeSetSpec::explicit_finite({3, 5});
  with_two.primes.insert(with_two.primes.begin(), 2);
  const auto b = mertens_exact(40, with_two, ctx);
  for (std::size_t i = 0; i < a.samples.size(); ++i) ASSERT_EQ(*a.samples[i].exact, *b.samples[i].exact);
}

TEST(MertensExact, MonotoneInNAndInS) {
  auto& ctx = shared_context();
  const auto small = mertens_exact(60, PrimeSetSpec::explicit_finite({3}), ctx);
  const auto large = mertens_exact(60, PrimeSetSpec::explicit_finite({3, 7, 233}), ctx);
  for (std::size_t i = 0; i < small.samples.size(); ++i) {
    if (i > 0) {
      ASSERT_LE(*small.samples[i - 1].exact, *small.samples[i].exact);
    }
    ASSERT_LE(*large.samples[i].exact, *small.samples[i].exact);
  }
  // Inner and outer sets sandwich S = {233}.
  const std::uint64_t S[] = {233};
  const auto [inner, outer] = sets::inner_outer(S, ctx);
  const auto mid = mertens_exact(60, PrimeSetSpec::explicit_finite({233}), ctx);
  const auto lo = mertens_exact(60, outer, ctx);
  const auto hi = mertens_exact(60, inner, ctx);
  for (std::size_t i = 0; i < mid.samples.size(); ++i) {
    ASSERT_LE(*lo.samples[i].exact, *mid.samples[i].exact);
    ASSERT_LE(*mid.samples[i].exact, *hi.samples[i].exact);
  }
}

TEST(DominantSum, Examples) {
  const OrderSet multiples3(OrderSetSpec::multiples_of(PrimeClass::list({3})));
  const auto s = dominant_sum({10}, multiples3);
  const double expected = 1 + 1.0 / 2 + 1.0 / 4 + 1.0 / 5 + 1.0 / 7 + 1.0 / 8 + 1.0 / 10;
  EXPECT_NEAR(static_cast<double>(s.samples[0].value), expected, 1e-15);

  const OrderSet empty(OrderSetSpec::explicit_list({}));
  const auto h = dominant_sum({1000}, empty);
  double harmonic = 0;
  for (int n = 1000; n >= 1; --n) harmonic += 1.0 / n;
  EXPECT_NEAR(static_cast<double>(h.samples[0].value), harmonic, 1e-12);
}

TEST(DominantSum, CompositeOrdersGivePrimeHarmonicSum) {
  const OrderSet composite(OrderSetSpec::composite_numbers());
  const auto s = dominant_sum({1'000'000}, composite);
  double oracle_sum = 0;
  const auto table = arith::sieve_primes(1'000'000);
  for (const auto p : table.primes()) oracle_sum += 1.0 / p;
  EXPECT_NEAR(static_cast<double>(s.samples[0].value), oracle_sum, 1e-12);
  EXPECT_NEAR(oracle_sum, std::log(std::log(1e6)) + 0.26149, 1e-3);
}

TEST(DominantSum, ThreadCountDoesNotChangeBits) {
  const OrderSet M(OrderSetSpec::multiples_of(PrimeClass::list({3, 5})));
  const auto grid = geometric_grid(10, 2'000'000, 4);
  const auto a = dominant_sum(grid, M, 1);
  const auto b = dominant_sum(grid, M, 4);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) ASSERT_EQ(a.samples[i].value, b.samples[i].value);
}

TEST(DominantSum, RejectsSetsNotClosedUnderMultiplication) {
  const OrderSet M(OrderSetSpec::complement_multiples_of(3));
  EXPECT_THROW(dominant_sum({100}, M), ContractError);
}

TEST(DominantSum, DifferenceFromExactSettles) {
  // For M closed under multiplication, M_S(N) - D(N) converges.
  auto& ctx = shared_context();
  const auto S = PrimeSetSpec::induced(OrderSetSpec::multiples_of(PrimeClass::list({3})));
  const auto exact = mertens_exact(120, S, ctx);
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 1; n <= 120; ++n) grid.push_back(n);
  const auto dominant = dominant_sum(grid, *S.order_set);
  const double d60 = static_cast<double>(exact.samples[59].value - dominant.samples[59].value);
  const double d120 = static_cast<double>(exact.samples[119].value - dominant.samples[119].value);
  EXPECT_LT(std::abs(d120 - d60), 0.05);
}

TEST(Decompose, ExampleAndTotals) {
  auto& ctx = shared_context();
  const auto d = decompose_lcm_closed(200, PrimeSetSpec::explicit_finite({3, 7}), ctx);
  EXPECT_EQ(d.total, d.direct);
  std::vector<std::uint64_t> mbars;
  for (const auto& t : d.terms) mbars.push_back(t.mbar);
  EXPECT_EQ(mbars, (std::vector<std::uint64_t>{1, 2, 3, 6}));
  const auto powers = decompose_lcm_closed(100, PrimeSetSpec::induced(OrderSetSpec::complement_multiples_of(3)), ctx);
  EXPECT_EQ(powers.total, powers.direct);
}

TEST(Decompose, StratifiedSumMatchesExact) {
  auto& ctx = shared_context();
  const auto S = PrimeSetSpec::explicit_finite({3, 5, 7, 31});
  const auto st = strata(S, 200, ctx);
  const auto values = stratified_sum({50, 200}, st);
  EXPECT_NEAR(static_cast<double>(values[0]), decompose_lcm_closed(50, S, ctx).direct.get_d(), 1e-14);
  EXPECT_NEAR(static_cast<double>(values[1]), decompose_lcm_closed(200, S, ctx).direct.get_d(), 1e-14);
}

TEST(RemainderBounds, GeometricClosedForm) {
  const auto b = remainder_bounds(40);
  const long double expected = std::ldexp(1.0L, -40) / 0.5L + std::ldexp(1.0L, -20) / (1 - std::sqrt(0.5L));
  EXPECT_NEAR(static_cast<double>(b.bound_R), static_cast<double>(expected), 1e-18);
  EXPECT_GT(b.bound_Q, 0);
  EXPECT_THROW(remainder_bounds(5), ContractError);
}

TEST(RemainderBounds, QDominatesObservedTail) {
  // bound_Q majorizes sum_{n >= N} 4 * 2^{-phi(n)}.
  const auto b = remainder_bounds(30);
  double tail = 0;
  for (std::uint64_t n = 30; n <= 20'000; ++n) tail += 4 * std::exp2(-static_cast<double>(arith::euler_phi(n)));
  EXPECT_LE(tail, static_cast<double>(b.bound_Q));
}

TEST(Csv, RoundTripAndFormat) {
  auto& ctx = shared_context();
  const auto series = mertens_exact(8, PrimeSetSpec::explicit_finite({}), ctx);
  std::stringstream buf;
  write_csv(buf, series);
  const std::string text = buf.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "N,value,mode,bound_R,bound_Q");
  EXPECT_NE(text.find("4,19/16,exact,,"), std::string::npos);
  const auto back = read_csv(buf);
  ASSERT_EQ(back.samples.size(), 8u);
  EXPECT_NEAR(static_cast<double>(back.samples[3].value), 19.0 / 16.0, 1e-18);
}

TEST(Grid, GeometricGridIsStrictlyIncreasing) {
  const auto g = geometric_grid(1, 1'000'000, 8);
  EXPECT_EQ(g.front(), 1u);
  EXPECT_EQ(g.back(), 1'000'000u);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_LT(g[i - 1], g[i]);
}
