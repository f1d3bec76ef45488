#pragma once

// Leading coefficients k_S, their bounds, greedy constructions and special series.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitgrowth/context.hpp"
#include "orbitgrowth/mertens.hpp"
#include "orbitgrowth/numeric.hpp"
#include "orbitgrowth/sets.hpp"

namespace orbitgrowth::constants {

struct ExactConstant {
  ExactRational value;
  std::string provenance;
  /// Present iff `value` is a truncation; bounds |true value - value|.
  std::optional<ExactRational> error_bound;
};

/// Exact slope k with sum_{n <= N} |2^n - 1|_S / n ~ k log N, for the finite S
/// described by `strata`. Sums over the lcm closure of the orders; within each
/// stratum uses inclusion-exclusion over the divisibility-minimal exclusions.
ExactConstant k_from_strata(const std::vector<mertens::Stratum>& strata, std::string provenance = "strata");

/// k_S for an explicit finite S (2 ignored).
ExactConstant k_exact_finite_S(std::span<const std::uint64_t> primes, Context& ctx);

/// k_L for S_L = {p : m_p in L}, L a finite set of orders.
ExactConstant k_order_class(std::span<const std::uint64_t> orders, Context& ctx);

/// 1 - 1/l + 1/(l (2^l - 1)).
ExactRational klapprox_factor(std::uint64_t ell);

struct KBounds {
  ExactRational upper;                          // product of klapprox_factor over L
  std::vector<ExactRational> lower_multipliers;  // 1 - 1/l, one per element of L
};

KBounds k_order_bounds(std::span<const std::uint64_t> ells);

struct GreedyStep {
  std::uint64_t ell = 0;
  bool accepted = false;
  ExactRational k_before;
  ExactRational k_candidate;  // k of L(ell) together with ell
  ExactRational k_after;
  bool lower_bound_holds = false;  // (1 - 1/ell) k_before <= k_candidate
};

struct GreedyTrace {
  ExactRational target;
  ExactRational eps;
  std::uint64_t cap = 0;
  std::uint64_t ell0 = 0;  // least prime > 1 + target/eps
  std::uint64_t ell1 = 0;  // least prime with prod_{ell0 <= l < ell1} factor(l) < target
  std::vector<GreedyStep> steps;
  std::vector<std::uint64_t> chosen;
  ExactRational k_final;
  bool terminal = false;
  std::string diagnosis;

  std::string to_json() const;
};

/// Greedy choice of L among primes <= cap with target <= k_L < target + eps.
/// CapacityError when the cap cannot be certified sufficient in advance.
GreedyTrace greedy_L(const ExactRational& target, const ExactRational& eps, Context& ctx, std::uint64_t cap = 127);

struct SeriesExpansion {
  ExactConstant constant;                 // partial sum with tail bound
  std::vector<ExactRational> terms;       // one per e
  std::vector<ExactRational> convergents; // partial sums
  std::vector<ExactRational> tail_bounds; // tail bound after each convergent
};

/// k_S for S = {p : m_p a power of ell}, as the series over e of
/// (ell - 1) / (ell^{e+1} (2^{ell^e} - 1)) prod_{p | 2^{ell^e} - 1} p/(p+1).
/// The tail after t terms is bounded by twice the first omitted term.
SeriesExpansion transcendental_series(std::uint64_t ell, unsigned terms, Context& ctx);

/// #{n <= x : Omega(n) = r, every prime factor of n in L}.
std::uint64_t landau_count(std::uint64_t x, unsigned r, const sets::PrimeClass& L);
/// delta^r (x / log x) (log log x)^{r-1} / (r-1)!.
double landau_asymptotic(double x, unsigned r, double delta);

struct FErrorPoint {
  std::uint64_t N = 0;
  double f_before = 0;  // f_{S'}(N)
  double f_after = 0;   // f_{S' + p}(N)
};

struct FErrorReport {
  double k_before = 0;
  double k_after = 0;
  double sup_before = 0;  // sup over 2 <= N <= N_max of |f_{S'}(N)|
  double sup_after = 0;
  double A = 0;           // max(4 + 1/1024, sup_before)
  bool holds = false;     // sup_after <= 2A
  std::vector<FErrorPoint> grid;
};

/// f_{S'}(N) = sum_{n <= N} |n|_{S'} / n - k'_{S'} log N with k'_{S'} = prod p/(p+1).
FErrorReport f_error_check(std::span<const std::uint64_t> S_prime, std::uint64_t p, const std::vector<std::uint64_t>& grid);

struct IntervalSum {
  std::uint64_t m = 0;
  std::uint64_t lo = 0;  // exclusive, 2^m
  std::uint64_t hi = 0;  // inclusive, floor(2^{m + delta})
  std::uint64_t prime_count = 0;
  double sum_log_p_over_p = 0;
};

/// Primes in (2^m, 2^{m+delta}] for m_lo <= m <= m_hi with their sums of log p / p.
std::vector<IntervalSum> interval_L(double delta, std::uint64_t m_lo, std::uint64_t m_hi);

struct ProductSubset {
  std::vector<std::uint64_t> chosen;
  ExactRational product;  // prod (1 + 1/p)
  double sum_log_p_over_p = 0;
  bool within_window = false;  // c (1 - eps) < product <= c
};

/// Scans `pool` in ascending order, keeping p while the product stays <= c.
/// DomainError when prod over the pool is < c.
ProductSubset greedy_product_subset(std::vector<std::uint64_t> pool, const ExactRational& c, const ExactRational& eps);

struct SubsequenceResult {
  std::vector<std::uint64_t> selected;
  double final_error = 0;  // |sum_{selected <= x_max} a_n - theta(x_max)|
  double sup_error = 0;    // sup over integer x in [x_start, x_max]
  double bound = 0;        // max(sup a_n, sup |theta(n+1) - theta(n)|)
  bool within_bound = false;
};

/// Includes n iff the running sum plus a_n stays <= theta(n).
SubsequenceResult greedy_subsequence(const std::function<double(std::uint64_t)>& a,
                                     const std::function<double(double)>& theta, std::uint64_t x_max,
                                     std::uint64_t x_start = 1);

struct SquarefreeSlope {
  std::uint64_t N = 0;
  std::uint64_t count = 0;  // squarefree n <= N
  double sum = 0;           // sum of 1/n over squarefree n <= N
  double slope = 0;         // least squares against log N on the dyadic grid
  std::vector<std::uint64_t> grid;
};

/// Grid N/2^9, ..., N/2, N (points below 1 dropped).
SquarefreeSlope squarefree_slope(std::uint64_t N);

struct PartialProduct {
  double x = 0;
  double value = 0;
};

struct ProductMonitor {
  std::vector<PartialProduct> values;
  double drift = 0;  // max relative change over the second half of the grid
};

/// (1/Gamma(delta+1)) prod_{p <= x} (1 - 1/p)^delta prod_{p <= x, p not in L} (1 + 1/p)
/// at each grid point. Truncating both products at the same x is not known to
/// converge; `drift` is reported, not asserted.
ProductMonitor selberg_delange_partial(const sets::PrimeClass& L, double delta, const std::vector<std::uint64_t>& grid);

/// k_m = sum_{d | m} 1/d.
ExactRational k_m(std::uint64_t m);

}  // namespace orbitgrowth::constants
