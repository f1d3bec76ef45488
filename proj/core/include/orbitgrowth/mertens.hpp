#pragma once

// Periodic points F(n), orbit counts O(n), the dynamical Mertens sum
// M_S(N) = sum_{n <= N} O(n) 2^{-n}, its factorization-free dominant part, the
// stratified decomposition by mbar and remainder bounds.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orbitgrowth/context.hpp"
#include "orbitgrowth/numeric.hpp"
#include "orbitgrowth/sets.hpp"

namespace orbitgrowth::mertens {

/// F(n) = (2^n - 1) prod_{p in S} |2^n - 1|_p.
BigNat periodic_points(std::uint64_t n, const sets::PrimeSetSpec& S, Context& ctx);

/// F(1), ..., F(n_max); index 0 is unused.
std::vector<BigNat> periodic_point_table(std::uint64_t n_max, const sets::PrimeSetSpec& S, Context& ctx);

/// O(n) = (1/n) sum_{d|n} mu(n/d) F(d).
BigNat orbit_count(std::uint64_t n, const sets::PrimeSetSpec& S, Context& ctx);
/// Same, from a precomputed periodic_point_table covering n.
BigNat orbit_count(std::uint64_t n, const std::vector<BigNat>& F);

enum class Mode { exact, dominant };
std::string to_string(Mode mode);

struct Sample {
  std::uint64_t N = 0;
  long double value = 0;
  std::optional<ExactRational> exact;  // exact mode only
};

struct MertensSeries {
  Mode mode = Mode::exact;
  std::string set_json;
  std::vector<Sample> samples;  // strictly increasing N

  std::vector<double> xs() const;
  std::vector<double> values() const;
};

constexpr std::uint64_t kExactCeiling = 120;

/// Exact M_S(N) for every N = 1..n_max.
MertensSeries mertens_exact(std::uint64_t n_max, const sets::PrimeSetSpec& S, Context& ctx,
                            std::uint64_t ceiling = kExactCeiling);

constexpr std::uint64_t kDominantCeiling = 100'000'000;

/// D(N) = sum_{n <= N, n not in M} 1/n at each grid point, accumulated in 96-bit
/// fixed point. ContractError unless M is closed under multiplication by N.
MertensSeries dominant_sum(const std::vector<std::uint64_t>& grid, const sets::OrderSet& M, unsigned threads = 1);

/// Roughly `per_decade` geometrically spaced integers from lo to hi, both included.
std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, unsigned per_decade);

/// Orders attained by S, each with the members of S of that order.
struct Stratum {
  std::uint64_t order = 0;
  std::vector<mersenne::BigPrimePower> primes;
};

/// Strata of an explicit S (grouped by m_p) or of S_M with generating orders <= n_max.
std::vector<Stratum> strata(const sets::PrimeSetSpec& S, std::uint64_t n_max, Context& ctx);

struct StratumTerm {
  std::uint64_t mbar = 0;
  std::vector<mersenne::BigPrimePower> S_mbar;
  ExactRational coefficient;  // |2^mbar - 1|_{S_mbar} / mbar
  ExactRational inner;        // sum over k <= N/mbar with mbar_{k mbar} = mbar of |k|_{S_mbar} / k
  std::uint64_t inner_terms = 0;
};

struct Decomposition {
  std::uint64_t N = 0;
  std::vector<StratumTerm> terms;  // ascending mbar
  ExactRational total;             // sum of coefficient * inner
  ExactRational direct;            // sum_{n <= N} |2^n - 1|_S / n from periodic points
};

/// Splits sum_{n <= N} |2^n - 1|_S / n by mbar_n. The direct sum is an independent
/// route through periodic_points; a mismatch raises InvariantViolation.
Decomposition decompose_lcm_closed(std::uint64_t N, const sets::PrimeSetSpec& S, Context& ctx);

/// sum_{n <= N} |2^n - 1|_S / n at each grid point in long double, evaluated
/// stratum by stratum as in decompose_lcm_closed (no big integers).
std::vector<long double> stratified_sum(const std::vector<std::uint64_t>& grid, const std::vector<Stratum>& strata);

struct RemainderBound {
  std::uint64_t N = 0;
  long double bound_R = 0;  // sum_{n >= N} (2^-n + 2^{-n/2})
  long double bound_Q = 0;  // sum_{n >= N} 4 * 2^{-phi(n)}, majorized by an integral tail
};

/// ContractError for N < 6.
RemainderBound remainder_bounds(std::uint64_t N);

/// CSV with columns N,value,mode,bound_R,bound_Q; bounds are blank for N < 6.
void write_csv(std::ostream& out, const MertensSeries& series);

/// Reads the N and value columns of a series CSV ("num/den" values are accepted).
MertensSeries read_csv(std::istream& in);

}  // namespace orbitgrowth::mertens
