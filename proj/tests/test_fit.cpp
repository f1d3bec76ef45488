#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "orbitgrowth/constants.hpp"
#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/fit.hpp"
#include "orbitgrowth/mertens.hpp"

using namespace orbitgrowth;
using namespace orbitgrowth::fit;
using mertens::MertensSeries;

namespace {

MertensSeries synthetic(const std::vector<std::uint64_t>& grid, const std::function<double(double)>& f) {
  MertensSeries s;
  s.mode = mertens::Mode::dominant;
  for (const auto n : grid) s.samples.push_back({n, static_cast<long double>(f(static_cast<double>(n))), std::nullopt});
  return s;
}

}  // namespace

TEST(FitLinear, RecoversLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_linear(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 2);
  EXPECT_DOUBLE_EQ(f.intercept, 1);
  const std::vector<double> flat{1, 1};
  EXPECT_THROW(fit_linear(flat, flat), DomainError);
}

TEST(FitModel, SyntheticKLogRecovered) {
  const auto grid = mertens::geometric_grid(10, 10'000'000, 4);
  const auto s = synthetic(grid, [](double n) { return 0.37 * std::log(n) + 1.25; });
  EXPECT_NEAR(fit_model(s, Model::klog).k, 0.37, 1e-6);
  EXPECT_EQ(classify_growth(s).model, Model::klog);
}

TEST(FitModel, SyntheticLogDeltaAndLogLog) {
  const auto grid = mertens::geometric_grid(10, 10'000'000, 4);
  const auto d = synthetic(grid, [](double n) { return 0.8 * std::pow(std::log(n), 0.5) + 0.1; });
  const auto rd = classify_growth(d);
  EXPECT_EQ(rd.model, Model::logdelta);
  EXPECT_NEAR(*rd.delta, 0.5, 1e-4);
  const auto l = synthetic(grid, [](double n) { return std::pow(std::log(std::log(n)), 2) + 0.3; });
  const auto rl = classify_growth(l);
  EXPECT_EQ(rl.model, Model::loglogr);
  EXPECT_EQ(*rl.r, 2u);
  std::size_t i = 0;
  const auto b = synthetic(grid, [&i](double) { return 0.9 + ((i++ % 2) ? 1e-6 : -1e-6); });
  EXPECT_EQ(classify_growth(b).model, Model::bounded);
}

TEST(FitModel, HarmonicNumbers) {
  const auto grid = mertens::geometric_grid(10, 1'000'000, 8);
  MertensSeries s;
  double h = 0;
  std::uint64_t n = 0;
  for (const auto g : grid) {
    while (n < g) h += 1.0 / static_cast<double>(++n);
    s.samples.push_back({g, h, std::nullopt});
  }
  const auto r = classify_growth(s);
  EXPECT_EQ(r.model, Model::klog);
  EXPECT_NEAR(r.k, 1, 0.005);
}

TEST(FitModel, DominantSumOfMultiplesOfThree) {
  const sets::OrderSet M(sets::OrderSetSpec::multiples_of(sets::PrimeClass::list({3})));
  const auto s = mertens::dominant_sum(mertens::geometric_grid(10, 1'000'000, 8), M);
  EXPECT_NEAR(fit_model(s, Model::klog).k, 2.0 / 3.0, 0.01);
}

TEST(FitModel, CompositeOrdersSelectLogLogOne) {
  const sets::OrderSet M(sets::OrderSetSpec::composite_numbers());
  const auto s = mertens::dominant_sum(mertens::geometric_grid(10, 10'000'000, 4), M);
  const auto r = classify_growth(s);
  EXPECT_EQ(r.model, Model::loglogr);
  EXPECT_EQ(r.r.value_or(0), 1u);
  EXPECT_NEAR(r.k, 1, 0.05);
}

TEST(FitModel, SquarefreeExcludedHarmonicIsKLog) {
  const auto grid = mertens::geometric_grid(10, 1'000'000, 8);
  MertensSeries s;
  for (const auto g : grid) s.samples.push_back({g, constants::squarefree_slope(g).sum, std::nullopt});
  const auto r = classify_growth(s);
  EXPECT_EQ(r.model, Model::klog);
  EXPECT_NEAR(r.k, 6 / (std::numbers::pi * std::numbers::pi), 0.01);
}

TEST(FitModel, ShortGridIsContractError) {
  const auto s = synthetic({10, 20, 30, 40, 50, 60, 70, 80}, [](double n) { return std::log(n); });
  EXPECT_THROW(fit_model(s, Model::klog), ContractError);
  EXPECT_NO_THROW(fit_model(s, Model::bounded));
}

TEST(ClassifyGrowth, PermutationInvariantAndDeterministic) {
  const auto grid = mertens::geometric_grid(10, 10'000'000, 4);
  const auto s = synthetic(grid, [](double n) { return 0.5 * std::pow(std::log(n), 0.7) + std::sin(n) * 1e-3; });
  const auto a = classify_growth(s);
  auto shuffled = s;
  std::mt19937_64 rng(0);
  std::shuffle(shuffled.samples.begin(), shuffled.samples.end(), rng);
  std::sort(shuffled.samples.begin(), shuffled.samples.end(), [](const auto& x, const auto& y) { return x.N < y.N; });
  EXPECT_EQ(classify_growth(shuffled).to_json(), a.to_json());
  EXPECT_EQ(classify_growth(s).to_json(), a.to_json());
}

TEST(FitModel, NestedSetsFitMonotone) {
  auto ctx = std::make_unique<Context>();
  const auto grid = mertens::geometric_grid(10, 100'000, 8);
  auto series_of = [&](std::vector<std::uint64_t> S) {
    const auto st = mertens::strata(sets::PrimeSetSpec::explicit_finite(S), 100'000, *ctx);
    const auto v = mertens::stratified_sum(grid, st);
    MertensSeries s;
    for (std::size_t i = 0; i < grid.size(); ++i) s.samples.push_back({grid[i], v[i], std::nullopt});
    return fit_model(s, Model::klog);
  };
  const auto small = series_of({3});
  const auto large = series_of({3, 5, 7});
  EXPECT_LE(large.k, small.k + 2 * (small.residual + large.residual));
}

TEST(FitReport, JsonFieldsExactly) {
  const auto grid = mertens::geometric_grid(10, 10'000'000, 4);
  const auto r = classify_growth(synthetic(grid, [](double n) { return std::log(n); }));
  const std::string j = r.to_json();
  for (const char* key : {"\"model\"", "\"k\"", "\"delta\"", "\"r\"", "\"residual\"", "\"n_samples\""}) {
    EXPECT_NE(j.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(j.find("score"), std::string::npos);
}
