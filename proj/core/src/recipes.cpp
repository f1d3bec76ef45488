#include "orbitgrowth/recipes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/constants.hpp"
#include "orbitgrowth/context.hpp"
#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/fit.hpp"
#include "orbitgrowth/mertens.hpp"
#include "orbitgrowth/recursion.hpp"
#include "orbitgrowth/sets.hpp"

namespace orbitgrowth::recipes {

namespace {

using sets::OrderSet;
using sets::OrderSetSpec;
using sets::PrimeClass;
using sets::PrimeSetSpec;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

Outcome exact_constant() {
  ContextOptions options;
  options.order_limit = std::uint64_t{1} << 14;
  Context ctx(options);
  const std::uint64_t S[] = {3, 7};
  const auto k = constants::k_exact_finite_S(S, ctx).value;
  return {k == ExactRational(269, 576), "k_{3,7} = " + to_string(k)};
}

Outcome valuation_oracle() {
  const arith::OrderTable orders(10'000);
  std::uint64_t checked = 0;
  const auto table = arith::sieve_primes(10'000);
  for (const auto p : table.primes()) {
    if (p == 2) continue;
    const BigNat big_p = static_cast<unsigned long>(p);
    for (std::uint64_t n = 1; n <= 64; ++n) {
      const unsigned fast = arith::ord_p_mersenne(p, n, orders);
      const unsigned slow = arith::valuation(mersenne_number(n), big_p);
      if (fast != slow) {
        return {false, "mismatch at p=" + std::to_string(p) + ", n=" + std::to_string(n) + ": " +
                           std::to_string(fast) + " vs " + std::to_string(slow)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " pairs agree"};
}

Outcome moebius_round_trip(const RunOptions& options) {
  Context ctx;
  const std::vector<std::pair<std::string, PrimeSetSpec>> sets{
      {"{}", PrimeSetSpec::explicit_finite({})},
      {"{3}", PrimeSetSpec::explicit_finite({3})},
      {"{3,7}", PrimeSetSpec::explicit_finite({3, 7})},
      {"induced(multiples_of(3))", PrimeSetSpec::induced(OrderSetSpec::multiples_of(PrimeClass::list({3})), options.seed)},
  };
  for (const auto& [name, S] : sets) {
    const auto F = mertens::periodic_point_table(40, S, ctx);
    for (std::uint64_t n = 1; n <= 40; ++n) {
      BigNat total = 0;
      for (const auto d : arith::divisors(n)) total += BigNat(static_cast<unsigned long>(d)) * mertens::orbit_count(d, F);
      if (total != F[n]) return {false, "S=" + name + ", n=" + std::to_string(n)};
    }
  }
  return {true, "4 sets, n <= 40"};
}

Outcome zsigmondy() {
  Context ctx;
  std::vector<std::uint64_t> empty;
  for (std::uint64_t m = 1; m <= 128; ++m) {
    if (ctx.primitive_primes(m).empty()) empty.push_back(m);
  }
  std::string list;
  for (const auto m : empty) list += (list.empty() ? "" : ",") + std::to_string(m);
  return {empty == std::vector<std::uint64_t>{1, 6}, "no primitive prime for m in {" + list + "}"};
}

Outcome onto(const RunOptions& options) {
  const OrderSet M(OrderSetSpec::multiples_of(PrimeClass::list({3})), options.seed);
  std::vector<std::uint64_t> grid;
  for (int i = 0; i <= 4; ++i) grid.push_back(static_cast<std::uint64_t>(std::llround(std::pow(10.0, 4 + 0.5 * i))));
  const auto series = mertens::dominant_sum(grid, M, options.threads);
  std::vector<double> xs, ys;
  for (const auto& s : series.samples) {
    xs.push_back(std::log(static_cast<double>(s.N)));
    ys.push_back(static_cast<double>(s.value));
  }
  const double slope = fit::fit_linear(xs, ys).slope;
  return {std::abs(slope - 2.0 / 3.0) <= 0.01, "slope " + fmt(slope) + " vs 2/3"};
}

Outcome loglog(const RunOptions& options) {
  const OrderSet M(OrderSetSpec::composite_numbers(), options.seed);
  const auto grid = mertens::geometric_grid(1'000, 10'000'000, 4);
  const auto series = mertens::dominant_sum(grid, M, options.threads);
  std::vector<double> diff;
  for (const auto& s : series.samples) {
    diff.push_back(static_cast<double>(s.value) - std::log(std::log(static_cast<double>(s.N))));
  }
  const auto tail = std::span<const double>(diff).subspan(diff.size() / 2);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  const double oscillation = *hi - *lo;
  const double limit = diff.back();
  const double mertens_constant = 0.26149;
  return {oscillation < 1e-3 && std::abs(limit - mertens_constant) <= 1e-3,
          "tail oscillation " + fmt(oscillation, 3) + ", D(10^7) - loglog 10^7 = " + fmt(limit)};
}

Outcome logdelta(const RunOptions& options) {
  const OrderSet M(OrderSetSpec::squarefree_augmented(OrderSetSpec::multiples_of(PrimeClass::congruence(3, {1}))),
                   options.seed);
  const auto series = mertens::dominant_sum(mertens::geometric_grid(10, 10'000'000, 4), M, options.threads);
  const auto report = fit::classify_growth(series);
  const double delta = report.delta.value_or(0);
  return {report.model == fit::Model::logdelta && delta >= 0.4 && delta <= 0.6,
          "model " + fit::to_string(report.model) + ", delta " + fmt(delta) + ", k " + fmt(report.k)};
}

Outcome zero(const RunOptions& options) {
  Context ctx;
  const auto S = PrimeSetSpec::induced(OrderSetSpec::complement_multiples_of(3), options.seed);
  const auto series = mertens::mertens_exact(120, S, ctx);
  // N <= 120 spans 1.6 decades once N < 3 is dropped.
  const auto report = fit::classify_growth(series, fit::GridRequirement{8, 1.5});
  return {report.model == fit::Model::bounded && report.residual < 1e-2,
          "model " + fit::to_string(report.model) + ", tail Cauchy oscillation " + fmt(report.residual, 4) +
              ", M_S(120) = " + fmt(static_cast<double>(series.samples.back().value), 8)};
}

Outcome transcendental() {
  Context ctx;
  const auto e = constants::transcendental_series(3, 4, ctx);
  const ExactRational c3 = ExactRational(25, 36) + ExactRational(1, 7992);
  const bool convergents = e.convergents.size() == 4 && e.convergents[0] == ExactRational(2, 3) &&
                           e.convergents[1] == ExactRational(25, 36) && e.convergents[2] == c3;
  bool increasing = true;
  for (std::size_t i = 1; i < e.convergents.size(); ++i) increasing = increasing && e.convergents[i - 1] < e.convergents[i];
  const ExactRational two_79(BigNat(1), BigNat(1) << 79);
  const bool tail = e.constant.error_bound && *e.constant.error_bound < two_79;
  return {convergents && increasing && tail,
          "value " + to_decimal(e.constant.value) + ", tail bound " +
              (e.constant.error_bound ? fmt(e.constant.error_bound->get_d(), 3) : std::string("missing"))};
}

Outcome dense() {
  Context ctx;
  std::string detail;
  bool ok = true;
  for (const auto& [target, eps] : {std::pair{ExactRational(9, 10), ExactRational(1, 20)},
                                    std::pair{ExactRational(3, 4), ExactRational(1, 10)}}) {
    const auto trace = constants::greedy_L(target, eps, ctx);
    const bool steps_ok = std::all_of(trace.steps.begin(), trace.steps.end(),
                                      [](const auto& s) { return s.lower_bound_holds; });
    const auto recomputed = constants::k_order_class(trace.chosen, ctx).value;
    const bool window = target <= trace.k_final && trace.k_final < target + eps;
    const bool within_cap = trace.chosen.empty() || trace.chosen.back() <= trace.cap;
    ok = ok && trace.terminal && steps_ok && window && within_cap && recomputed == trace.k_final;
    std::string L;
    for (const auto l : trace.chosen) L += (L.empty() ? "" : ",") + std::to_string(l);
    detail += (detail.empty() ? "" : "; ") + std::string("k=") + to_string(target) + ": L={" + L +
              "}, k_L=" + to_string(trace.k_final);
  }
  return {ok, detail};
}

Outcome section9(const RunOptions& options) {
  recursion::Params p;
  p.delta = ExactRational(1, 2);
  p.Y = 50;
  p.n_max = 40;
  p.seed = options.seed;
  const auto ideal = recursion::rn_recursion(p);
  bool ok = ideal.closed_form_exact && ideal.all_invariants_hold;
  std::string failed;
  p.mode = recursion::Mode::perturbed;
  for (const auto kind : {recursion::Perturbation::plus, recursion::Perturbation::minus,
                          recursion::Perturbation::alternating, recursion::Perturbation::random}) {
    p.perturbation = kind;
    if (!recursion::rn_recursion(p).all_invariants_hold) {
      ok = false;
      failed += " " + recursion::to_string(kind);
    }
  }
  const bool f_ok = recursion::f_bound_holds(40);
  return {ok && f_ok, std::string("idealized closed form ") + (ideal.closed_form_exact ? "exact" : "broken") +
                          ", perturbed " + (failed.empty() ? "all invariants hold" : "failed:" + failed) +
                          ", f bound " + (f_ok ? "holds" : "fails")};
}

Outcome squarefree() {
  const auto s = constants::squarefree_slope(10'000'000);
  const double target = 6.0 / (std::numbers::pi * std::numbers::pi);
  return {std::abs(s.slope - target) <= 0.01, "slope " + fmt(s.slope) + " vs 6/pi^2 = " + fmt(target)};
}

struct Entry {
  const char* name;
  double limit;
  std::function<Outcome(const RunOptions&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table{
      {"exact constant k_{3,7}", 1, [](const RunOptions&) { return exact_constant(); }},
      {"valuation formula oracle", 60, [](const RunOptions&) { return valuation_oracle(); }},
      {"Moebius round trip", 30, moebius_round_trip},
      {"Zsigmondy exceptions", 120, [](const RunOptions&) { return zsigmondy(); }},
      {"onto: slope for multiples of 3", 60, onto},
      {"loglog r=1: composite orders", 120, loglog},
      {"logdelta: L = primes 1 mod 3", 300, logdelta},
      {"zero: S = {p : 3 does not divide m_p}", 300, zero},
      {"transcendental series l=3", 10, [](const RunOptions&) { return transcendental(); }},
      {"dense: greedy L", 300, [](const RunOptions&) { return dense(); }},
      {"r_n recursion", 5, section9},
      {"squarefree constant", 60, [](const RunOptions&) { return squarefree(); }},
  };
  return table;
}

}  // namespace

CriterionResult run_criterion(int id, const RunOptions& options) {
  if (id < 1 || id > kCriterionCount) throw DomainError("criterion id must lie in 1..12");
  const Entry& entry = entries()[static_cast<std::size_t>(id - 1)];
  CriterionResult result;
  result.id = id;
  result.name = entry.name;
  result.time_limit = entry.limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome outcome = entry.run(options);
    result.passed = outcome.passed;
    result.detail = outcome.detail;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.seconds >= result.time_limit) {
    result.passed = false;
    result.detail += " (over the " + fmt(result.time_limit) + " s limit)";
  }
  return result;
}

std::vector<int> criteria_for(const std::string& theorem) {
  if (theorem == "exact") return {1, 2, 3, 4};
  if (theorem == "onto") return {5};
  if (theorem == "loglog") return {6};
  if (theorem == "logdelta") return {7};
  if (theorem == "zero") return {8};
  if (theorem == "transcendental") return {9};
  if (theorem == "dense") return {10};
  if (theorem == "section9") return {11};
  if (theorem == "squarefree") return {12};
  if (theorem == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  throw DomainError("unknown theorem '" + theorem + "'");
}

std::vector<std::string> theorem_names() {
  return {"dense", "onto", "logdelta", "loglog", "zero", "transcendental", "section9", "exact", "squarefree", "all"};
}

std::string format(const CriterionResult& r, bool with_time) {
  std::ostringstream out;
  out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail;
  if (with_time) {
    out << " (" << std::fixed;
    out.precision(3);
    out << r.seconds << " s)";
  }
  return out.str();
}

}  // namespace orbitgrowth::recipes
