#include "orbitgrowth/constants.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/fit.hpp"

namespace orbitgrowth::constants {

namespace {

ExactRational reciprocal(const BigNat& n) {
  ExactRational q(BigNat(1), n);
  q.canonicalize();
  return q;
}

BigNat pow_big(const BigNat& base, unsigned long e) {
  BigNat out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

unsigned big_valuation(const BigNat& n, const BigNat& p) {
  if (n < p) return 0;
  return arith::valuation(n, p);
}

/// Keeps the divisibility-minimal elements of a set of positive integers.
std::vector<std::uint64_t> minimal_elements(std::vector<std::uint64_t> d) {
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  std::vector<std::uint64_t> out;
  for (const auto x : d) {
    if (std::none_of(out.begin(), out.end(), [&](std::uint64_t y) { return x % y == 0; })) out.push_back(x);
  }
  return out;
}

std::uint64_t next_prime(std::uint64_t n) {
  for (std::uint64_t c = n + 1;; ++c) {
    if (arith::is_prime_u64(c)) return c;
  }
}

}  // namespace

ExactConstant k_from_strata(const std::vector<mertens::Stratum>& strata, std::string provenance) {
  std::vector<std::uint64_t> orders;
  for (const auto& s : strata) orders.push_back(s.order);
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());

  ExactRational k = 0;
  for (const auto mbar : sets::lcm_closure(orders)) {
    std::vector<mersenne::BigPrimePower> T;
    std::vector<std::uint64_t> D;
    for (const auto& s : strata) {
      if (mbar % s.order == 0) {
        T.insert(T.end(), s.primes.begin(), s.primes.end());
      } else {
        D.push_back(s.order / arith::gcd(s.order, mbar));
      }
    }
    D = minimal_elements(std::move(D));
    if (D.size() > 24) throw CapacityError("inclusion-exclusion over more than 24 exclusions");

    const BigNat mbar_big = static_cast<unsigned long>(mbar);
    BigNat denominator = mbar_big;
    ExactRational k_prime = 1;
    for (const auto& pp : T) {
      denominator *= pow_big(pp.prime, pp.exponent + big_valuation(mbar_big, pp.prime));
      ExactRational factor(pp.prime, pp.prime + 1);
      factor.canonicalize();
      k_prime *= factor;
    }

    ExactRational alternating = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << D.size()); ++mask) {
      BigNat L = 1;
      for (std::size_t i = 0; i < D.size(); ++i) {
        if (mask >> i & 1) {
          const BigNat d = static_cast<unsigned long>(D[i]);
          mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), d.get_mpz_t());
        }
      }
      BigNat scaled = L;  // L / |L|_T
      for (const auto& pp : T) scaled *= pow_big(pp.prime, big_valuation(L, pp.prime));
      const ExactRational piece = reciprocal(scaled);
      if (__builtin_popcountll(mask) % 2 == 0) {
        alternating += piece;
      } else {
        alternating -= piece;
      }
    }
    k += reciprocal(denominator) * k_prime * alternating;
  }
  k.canonicalize();
  return {k, std::move(provenance), std::nullopt};
}

ExactConstant k_exact_finite_S(std::span<const std::uint64_t> primes, Context& ctx) {
  const auto S = sets::PrimeSetSpec::explicit_finite({primes.begin(), primes.end()});
  std::string provenance = "k_S for explicit S = {";
  for (std::size_t i = 0; i < S.primes.size(); ++i) provenance += (i ? "," : "") + std::to_string(S.primes[i]);
  provenance += "}";
  return k_from_strata(mertens::strata(S, 0, ctx), std::move(provenance));
}

ExactConstant k_order_class(std::span<const std::uint64_t> orders, Context& ctx) {
  std::vector<std::uint64_t> sorted(orders.begin(), orders.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<mertens::Stratum> strata;
  std::string provenance = "k_L for S_L, L = {";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] == 0) throw DomainError("orders are positive");
    provenance += (i ? "," : "") + std::to_string(sorted[i]);
    const auto& prim = ctx.primitive_primes(sorted[i]);
    if (!prim.empty()) strata.push_back({sorted[i], prim});
  }
  provenance += "}";
  return k_from_strata(strata, std::move(provenance));
}

ExactRational klapprox_factor(std::uint64_t ell) {
  if (ell < 2) throw DomainError("klapprox_factor needs ell >= 2");
  const BigNat l = static_cast<unsigned long>(ell);
  ExactRational f = ExactRational(1) - reciprocal(l) + reciprocal(l * mersenne_number(ell));
  f.canonicalize();
  return f;
}

KBounds k_order_bounds(std::span<const std::uint64_t> ells) {
  KBounds b;
  b.upper = 1;
  for (const auto ell : ells) {
    if (!arith::is_prime_u64(ell)) throw DomainError("k_order_bounds: " + std::to_string(ell) + " is not prime");
    b.upper *= klapprox_factor(ell);
    ExactRational lower = ExactRational(1) - reciprocal(BigNat(static_cast<unsigned long>(ell)));
    lower.canonicalize();
    b.lower_multipliers.push_back(lower);
  }
  b.upper.canonicalize();
  return b;
}

std::string GreedyTrace::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    steps_json.push_back({{"ell", s.ell},
                          {"accepted", s.accepted},
                          {"k_before", to_string(s.k_before)},
                          {"k_candidate", to_string(s.k_candidate)},
                          {"k_after", to_string(s.k_after)},
                          {"lower_bound_holds", s.lower_bound_holds}});
  }
  nlohmann::json j{{"target", to_string(target)},
                   {"eps", to_string(eps)},
                   {"cap", cap},
                   {"ell0", ell0},
                   {"ell1", ell1},
                   {"steps", steps_json},
                   {"chosen", chosen},
                   {"k_final", to_string(k_final)},
                   {"k_final_decimal", to_decimal(k_final)},
                   {"terminal", terminal},
                   {"diagnosis", diagnosis}};
  return j.dump(2);
}

GreedyTrace greedy_L(const ExactRational& target, const ExactRational& eps, Context& ctx, std::uint64_t cap) {
  if (target <= 0 || target >= 1) throw DomainError("greedy_L: target must lie in (0, 1)");
  if (eps <= 0) throw DomainError("greedy_L: eps must be positive");
  GreedyTrace trace;
  trace.target = target;
  trace.eps = eps;
  trace.cap = cap;

  // Certify in advance that the primes below the cap suffice.
  const ExactRational threshold = 1 + target / eps;
  std::uint64_t ell0 = 2;
  while (ExactRational(static_cast<unsigned long>(ell0)) <= threshold || !arith::is_prime_u64(ell0)) ++ell0;
  trace.ell0 = ell0;
  if (ell0 > cap) {
    throw CapacityError("greedy_L: ell0 = " + std::to_string(ell0) + " exceeds the cap " + std::to_string(cap));
  }
  ExactRational product = 1;
  std::uint64_t last = ell0;
  for (std::uint64_t ell = ell0;; ell = next_prime(ell)) {
    if (ell > cap) {
      throw CapacityError("greedy_L: primes up to the cap " + std::to_string(cap) +
                          " cannot certify the target; the product bound stays >= target");
    }
    product *= klapprox_factor(ell);
    last = ell;
    if (product < target) break;
  }
  trace.ell1 = next_prime(last);

  auto in_window = [&](const ExactRational& k) { return target <= k && k < target + eps; };
  ExactRational k = 1;
  for (std::uint64_t ell = 2; ell <= cap; ell = next_prime(ell)) {
    if (in_window(k)) {
      trace.terminal = true;
      break;
    }
    std::vector<std::uint64_t> candidate = trace.chosen;
    candidate.push_back(ell);
    GreedyStep step;
    step.ell = ell;
    step.k_before = k;
    step.k_candidate = k_order_class(candidate, ctx).value;
    const ExactRational lower = k * (ExactRational(1) - reciprocal(BigNat(static_cast<unsigned long>(ell))));
    step.lower_bound_holds = lower <= step.k_candidate;
    step.accepted = step.k_candidate >= target;
    if (step.accepted) {
      trace.chosen.push_back(ell);
      k = step.k_candidate;
    }
    step.k_after = k;
    trace.steps.push_back(std::move(step));
  }
  if (!trace.terminal && in_window(k)) trace.terminal = true;
  trace.k_final = k;
  if (!trace.terminal) {
    trace.diagnosis = "no termination among primes <= " + std::to_string(cap) + "; k_L = " + to_decimal(k);
  }
  return trace;
}

SeriesExpansion transcendental_series(std::uint64_t ell, unsigned terms, Context& ctx) {
  if (ell < 3 || !arith::is_prime_u64(ell)) throw DomainError("transcendental_series needs an odd prime ell");
  if (terms == 0) throw DomainError("transcendental_series needs at least one term");
  const BigNat l = static_cast<unsigned long>(ell);
  auto bare_term = [&](unsigned e) {
    const auto m = pow_big(l, e);
    if (!m.fits_ulong_p() || m.get_ui() > 4096) throw CapacityError("ell^e too large for the series");
    return ExactRational(l - 1, pow_big(l, e + 1) * mersenne_number(m.get_ui()));
  };

  SeriesExpansion out;
  ExactRational sum = 0;
  for (unsigned e = 0; e < terms; ++e) {
    const std::uint64_t m = pow_big(l, e).get_ui();
    ExactRational product = 1;
    for (const auto& pp : ctx.factorization(m).factors) {
      ExactRational f(pp.prime, pp.prime + 1);
      f.canonicalize();
      product *= f;
    }
    ExactRational term = bare_term(e) * product;
    term.canonicalize();
    sum += term;
    out.terms.push_back(term);
    out.convergents.push_back(sum);
    ExactRational tail = 2 * bare_term(e + 1);
    tail.canonicalize();
    out.tail_bounds.push_back(tail);
  }
  out.constant = {sum,
                  "series for S = {p : m_p a power of " + std::to_string(ell) + "}, " + std::to_string(terms) + " terms",
                  out.tail_bounds.back()};
  return out;
}

std::uint64_t landau_count(std::uint64_t x, unsigned r, const sets::PrimeClass& L) {
  if (x < 2) return (x == 1 && r == 0) ? 1 : 0;
  const auto table = arith::sieve_primes(x);
  std::uint64_t count = r == 0 ? 1 : 0;
  for (std::uint64_t n = 2; n <= x; ++n) {
    unsigned omega = 0;
    bool ok = true;
    for (std::uint64_t rest = n; rest > 1 && ok;) {
      const std::uint32_t p = table.smallest_factor(rest);
      if (!L.contains(p)) ok = false;
      rest /= p;
      if (++omega > r) ok = false;
    }
    if (ok && omega == r) ++count;
  }
  return count;
}

double landau_asymptotic(double x, unsigned r, double delta) {
  if (r == 0 || x <= std::exp(1.0)) throw DomainError("landau_asymptotic needs r >= 1 and x > e");
  const double lx = std::log(x);
  return std::pow(delta, r) * (x / lx) * std::pow(std::log(lx), r - 1) / std::tgamma(static_cast<double>(r));
}

FErrorReport f_error_check(std::span<const std::uint64_t> S_prime, std::uint64_t p, const std::vector<std::uint64_t>& grid) {
  if (!arith::is_prime_u64(p)) throw DomainError("f_error_check: " + std::to_string(p) + " is not prime");
  if (std::find(S_prime.begin(), S_prime.end(), p) != S_prime.end()) {
    throw DomainError("f_error_check: the new prime must lie outside S'");
  }
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) throw DomainError("f_error_check: sorted grid required");
  FErrorReport report;
  long double k_before = 1;
  for (const auto q : S_prime) k_before *= static_cast<long double>(q) / static_cast<long double>(q + 1);
  const long double k_after = k_before * static_cast<long double>(p) / static_cast<long double>(p + 1);
  report.k_before = static_cast<double>(k_before);
  report.k_after = static_cast<double>(k_after);

  long double sum_before = 0, sum_after = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= grid.back(); ++n) {
    long double w = 1.0L / static_cast<long double>(n);
    for (const auto q : S_prime) {
      for (std::uint64_t rest = n; rest % q == 0; rest /= q) w /= static_cast<long double>(q);
    }
    sum_before += w;
    for (std::uint64_t rest = n; rest % p == 0; rest /= p) w /= static_cast<long double>(p);
    sum_after += w;
    const long double log_n = std::log(static_cast<long double>(n));
    const double f_before = static_cast<double>(sum_before - k_before * log_n);
    const double f_after = static_cast<double>(sum_after - k_after * log_n);
    if (n >= 2) {
      report.sup_before = std::max(report.sup_before, std::abs(f_before));
      report.sup_after = std::max(report.sup_after, std::abs(f_after));
    }
    while (next < grid.size() && grid[next] == n) {
      report.grid.push_back({n, f_before, f_after});
      ++next;
    }
  }
  report.A = std::max(4.0 + 1.0 / 1024, report.sup_before);
  report.holds = report.sup_after <= 2 * report.A;
  return report;
}

std::vector<IntervalSum> interval_L(double delta, std::uint64_t m_lo, std::uint64_t m_hi) {
  if (!(delta > 0 && delta <= 1)) throw DomainError("interval_L: delta must lie in (0, 1]");
  if (m_lo > m_hi) throw DomainError("interval_L: empty m range");
  auto upper = [&](std::uint64_t m) {
    return static_cast<std::uint64_t>(std::floor(std::exp2(static_cast<long double>(m) + delta)));
  };
  const std::uint64_t limit = upper(m_hi);
  if (limit > arith::PrimeTable::kDefaultCapacity) throw CapacityError("interval_L: 2^(m+delta) exceeds the sieve capacity");
  const auto table = arith::sieve_primes(std::max<std::uint64_t>(limit, 2));
  const auto primes = table.primes();
  std::vector<IntervalSum> out;
  for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
    IntervalSum s;
    s.m = m;
    s.lo = std::uint64_t{1} << m;
    s.hi = upper(m);
    auto it = std::upper_bound(primes.begin(), primes.end(), s.lo);
    long double sum = 0;
    for (; it != primes.end() && *it <= s.hi; ++it) {
      ++s.prime_count;
      sum += std::log(static_cast<long double>(*it)) / static_cast<long double>(*it);
    }
    s.sum_log_p_over_p = static_cast<double>(sum);
    out.push_back(s);
  }
  return out;
}

ProductSubset greedy_product_subset(std::vector<std::uint64_t> pool, const ExactRational& c, const ExactRational& eps) {
  if (c <= 1) throw DomainError("greedy_product_subset: c must exceed 1");
  if (eps <= 0 || eps >= 1) throw DomainError("greedy_product_subset: eps must lie in (0, 1)");
  for (const auto p : pool) {
    if (!arith::is_prime_u64(p)) throw DomainError("greedy_product_subset: " + std::to_string(p) + " is not prime");
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  auto factor = [](std::uint64_t p) {
    ExactRational f(static_cast<unsigned long>(p + 1), static_cast<unsigned long>(p));
    f.canonicalize();
    return f;
  };
  ExactRational max_product = 1;
  for (const auto p : pool) max_product *= factor(p);
  if (max_product < c) {
    throw DomainError("greedy_product_subset: infeasible, the whole pool only reaches " + to_decimal(max_product));
  }
  ProductSubset out;
  out.product = 1;
  long double sum = 0;
  for (const auto p : pool) {
    const ExactRational next = out.product * factor(p);
    if (next <= c) {
      out.product = next;
      out.chosen.push_back(p);
      sum += std::log(static_cast<long double>(p)) / static_cast<long double>(p);
    }
  }
  out.product.canonicalize();
  out.sum_log_p_over_p = static_cast<double>(sum);
  out.within_window = c * (1 - eps) < out.product && out.product <= c;
  return out;
}

SubsequenceResult greedy_subsequence(const std::function<double(std::uint64_t)>& a,
                                     const std::function<double(double)>& theta, std::uint64_t x_max,
                                     std::uint64_t x_start) {
  if (x_max == 0 || x_start == 0 || x_start > x_max) throw DomainError("greedy_subsequence: need 1 <= x_start <= x_max");
  SubsequenceResult out;
  long double running = 0;
  double sup_a = 0, drift = 0;
  double previous_theta = theta(static_cast<double>(x_start));
  for (std::uint64_t n = 1; n <= x_max; ++n) {
    const double an = a(n);
    if (an < 0) throw DomainError("greedy_subsequence: weights must be non-negative");
    sup_a = std::max(sup_a, an);
    const double th = theta(static_cast<double>(n));
    if (an > 0 && running + an <= th) {
      running += an;
      out.selected.push_back(n);
    }
    if (n >= x_start) {
      out.sup_error = std::max(out.sup_error, static_cast<double>(std::abs(running - th)));
      if (n > x_start) drift = std::max(drift, std::abs(th - previous_theta));
      previous_theta = th;
    }
  }
  out.final_error = static_cast<double>(std::abs(running - theta(static_cast<double>(x_max))));
  out.bound = std::max(sup_a, drift);
  out.within_bound = out.sup_error <= out.bound;
  return out;
}

SquarefreeSlope squarefree_slope(std::uint64_t N) {
  if (N == 0) throw DomainError("squarefree_slope needs N >= 1");
  if (N > arith::PrimeTable::kDefaultCapacity) throw CapacityError("squarefree_slope: N exceeds the sieve capacity");
  std::vector<std::uint8_t> squarefree(N + 1, 1);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(N)));
  if (root >= 2) {
    const auto table = arith::sieve_primes(root);
    for (const auto p : table.primes()) {
      const std::uint64_t q = std::uint64_t{p} * p;
      for (std::uint64_t k = q; k <= N; k += q) squarefree[k] = 0;
    }
  }
  SquarefreeSlope out;
  out.N = N;
  for (int j = 9; j >= 0; --j) {
    const std::uint64_t g = N >> j;
    if (g >= 1 && (out.grid.empty() || g > out.grid.back())) out.grid.push_back(g);
  }
  std::vector<double> xs, ys;
  long double sum = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (squarefree[n]) {
      ++out.count;
      sum += 1.0L / static_cast<long double>(n);
    }
    if (next < out.grid.size() && out.grid[next] == n) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(static_cast<double>(sum));
      ++next;
    }
  }
  out.sum = static_cast<double>(sum);
  if (xs.size() >= 2) out.slope = fit::fit_linear(xs, ys).slope;
  return out;
}

ProductMonitor selberg_delange_partial(const sets::PrimeClass& L, double delta, const std::vector<std::uint64_t>& grid) {
  if (!(delta > 0 && delta <= 1)) throw DomainError("selberg_delange_partial: delta must lie in (0, 1]");
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) || grid.front() < 2) {
    throw DomainError("selberg_delange_partial: sorted grid of values >= 2 required");
  }
  const auto table = arith::sieve_primes(grid.back());
  ProductMonitor out;
  long double log_value = -std::lgamma(static_cast<long double>(delta) + 1.0L);
  std::size_t next = 0;
  for (const auto p : table.primes()) {
    while (next < grid.size() && grid[next] < p) {
      out.values.push_back({static_cast<double>(grid[next]), static_cast<double>(std::exp(log_value))});
      ++next;
    }
    const long double inv = 1.0L / static_cast<long double>(p);
    log_value += delta * std::log1p(-inv);
    if (!L.contains(p)) log_value += std::log1p(inv);
  }
  for (; next < grid.size(); ++next) {
    out.values.push_back({static_cast<double>(grid[next]), static_cast<double>(std::exp(log_value))});
  }
  for (std::size_t i = std::max<std::size_t>(1, out.values.size() / 2); i < out.values.size(); ++i) {
    out.drift = std::max(out.drift, std::abs(out.values[i].value / out.values[i - 1].value - 1.0));
  }
  return out;
}

ExactRational k_m(std::uint64_t m) {
  if (m == 0) throw DomainError("k_m needs m >= 1");
  ExactRational sum = 0;
  for (const auto d : arith::divisors(m)) sum += ExactRational(1, static_cast<unsigned long>(d));
  sum.canonicalize();
  return sum;
}

}  // namespace orbitgrowth::constants
