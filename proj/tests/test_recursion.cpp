#include <gtest/gtest.h>

#include <cmath>

#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/recursion.hpp"

using namespace orbitgrowth;
using namespace orbitgrowth::recursion;

TEST(Recursion, RIsFloorOfScaledY) {
  EXPECT_EQ(R_of(0, 50), 50u);
  EXPECT_EQ(R_of(1, 50), 70u);  // floor(50 sqrt 2) = floor(70.71)
  EXPECT_EQ(R_of(2, 50), 100u);
  EXPECT_EQ(R_of(3, 50), 141u);
}

TEST(Recursion, WindowEdgesAreContractErrors) {
  const auto w = a_prime_window(ExactRational(1, 2), 50);
  EXPECT_NEAR(w.lower, 0.002, 1e-15);
  EXPECT_NEAR(w.upper, 4.0 / 3.0 * std::log(1.01), 1e-15);
  Params p;
  p.a_prime = ExactRational(1, 1000);
  EXPECT_THROW(rn_recursion(p), ContractError);
  p.a_prime = ExactRational(1, 50);
  EXPECT_THROW(rn_recursion(p), ContractError);
}

TEST(Recursion, IdealizedClosedFormIsExact) {
  for (const auto& a : {ExactRational(3, 1000), ExactRational(1, 100), ExactRational(13, 1000)}) {
    Params p;
    p.a_prime = a;
    p.n_max = 40;
    const auto t = rn_recursion(p);
    EXPECT_TRUE(t.closed_form_exact);
    EXPECT_TRUE(t.all_invariants_hold);
    ASSERT_EQ(t.steps.size(), 40u);
  }
}

TEST(Recursion, PerturbedExtremalEtaKeepsInvariants) {
  Params p;
  p.mode = Mode::perturbed;
  for (const auto kind : {Perturbation::plus, Perturbation::minus, Perturbation::alternating, Perturbation::random}) {
    p.perturbation = kind;
    const auto t = rn_recursion(p);
    for (const auto& s : t.steps) {
      ASSERT_TRUE(s.r_in_range) << to_string(kind) << " n=" << s.n;
      ASSERT_TRUE(s.sandwich) << to_string(kind) << " n=" << s.n;
      ASSERT_TRUE(s.concentration) << to_string(kind) << " n=" << s.n;
    }
  }
}

TEST(Recursion, RandomModeIsSeeded) {
  Params p;
  p.mode = Mode::perturbed;
  p.perturbation = Perturbation::random;
  p.seed = 7;
  EXPECT_EQ(rn_recursion(p).to_json(), rn_recursion(p).to_json());
  Params q = p;
  q.seed = 8;
  EXPECT_NE(rn_recursion(p).to_json(), rn_recursion(q).to_json());
}

TEST(Recursion, FBound) {
  EXPECT_TRUE(f_bound_holds(40));
  EXPECT_LT(std::pow(100.0, -std::pow(2.0, 0.25)), 0.125);
}
