#include <gtest/gtest.h>

#include <random>

#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/numeric.hpp"

using namespace orbitgrowth;

TEST(Numeric, MersenneNumber) {
  EXPECT_EQ(mersenne_number(1), 1);
  EXPECT_EQ(mersenne_number(29), 536870911);
  EXPECT_EQ(mersenne_number(64).get_str(), "18446744073709551615");
}

TEST(Numeric, RationalFormatting) {
  EXPECT_EQ(to_string(ExactRational(269, 576)), "269/576");
  EXPECT_EQ(to_string(ExactRational(2)), "2/1");
  EXPECT_EQ(to_decimal(ExactRational(1, 3), 6), "0.333333");
}

TEST(Numeric, ParseRationalIsExact) {
  EXPECT_EQ(parse_rational("0.9"), ExactRational(9, 10));
  EXPECT_EQ(parse_rational("-2/7"), ExactRational(-2, 7));
  EXPECT_EQ(parse_rational("1.5e-3"), ExactRational(3, 2000));
  EXPECT_EQ(parse_rational("3"), ExactRational(3));
  EXPECT_THROW(parse_rational("abc"), DomainError);
  EXPECT_THROW(parse_rational("1/0"), DomainError);
}

TEST(FixedSum, HarmonicMatchesExactWithinTruncationBound) {
  FixedSum s;
  ExactRational exact = 0;
  for (std::uint64_t n = 1; n <= 200; ++n) {
    s.add_reciprocal(n);
    exact += ExactRational(1, n);
  }
  const ExactRational err = abs(s.to_rational() - exact);
  EXPECT_LE(err.get_d(), static_cast<double>(s.truncation_bound()));
  EXPECT_EQ(s.terms(), 200u);
}

TEST(FixedSum, PartitionIndependent) {
  std::mt19937_64 rng(0);
  std::vector<std::uint64_t> ns(5000);
  for (auto& n : ns) n = 1 + rng() % 1'000'000;
  FixedSum whole;
  for (const auto n : ns) whole.add_reciprocal(n);
  for (const std::size_t parts : {2u, 3u, 7u}) {
    FixedSum total;
    const std::size_t block = (ns.size() + parts - 1) / parts;
    for (std::size_t start = 0; start < ns.size(); start += block) {
      FixedSum part;
      for (std::size_t i = start; i < std::min(ns.size(), start + block); ++i) part.add_reciprocal(ns[i]);
      total += part;
    }
    EXPECT_EQ(total, whole) << parts << " parts";
  }
}
