#pragma once

// Order sets M, prime sets S and the correspondence S_M = {p : m_p in M}.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/context.hpp"
#include "orbitgrowth/mersenne.hpp"

namespace orbitgrowth::sets {

/// A set of rational primes: everything, a finite list, or a union of residue
/// classes modulo some modulus.
struct PrimeClass {
  enum class Kind { all, list, congruence };

  Kind kind = Kind::all;
  std::vector<std::uint64_t> primes;  // list: ascending, distinct
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> residues;  // congruence: ascending, distinct, < modulus

  static PrimeClass all();
  static PrimeClass list(std::vector<std::uint64_t> primes);
  static PrimeClass congruence(std::uint64_t modulus, std::vector<std::uint64_t> residues);

  /// Membership of a prime p.
  bool contains(std::uint64_t p) const;
  /// Relative density among all primes (Dirichlet); 0 for lists.
  ExactRational density() const;
};

enum class OrderKind {
  explicit_list,
  multiples_of,
  complement_multiples_of,
  composite_numbers,
  prime_numbers,
  prime_list,
  congruence_primes,
  ell_powers,
  squarefree_augmented,
  omega_bounded,
};

std::string to_string(OrderKind kind);

/// Declarative order set. Which fields are meaningful depends on `kind`:
///
/// | kind                    | fields            | n in M iff                                   |
/// |-------------------------|-------------------|----------------------------------------------|
/// | explicit_list           | values            | n in values                                  |
/// | multiples_of            | ells              | some prime of ells divides n                 |
/// | complement_multiples_of | ell               | ell does not divide n                        |
/// | composite_numbers       |                   | n = 1 or n composite                         |
/// | prime_numbers           |                   | n prime                                      |
/// | prime_list              | ells (list)       | n prime and in ells                          |
/// | congruence_primes       | ells (congruence) | n prime and in ells                          |
/// | ell_powers              | ell               | n = ell^e, e >= 0                            |
/// | squarefree_augmented    | base              | n in base or n not squarefree                |
/// | omega_bounded           | r, ells, m        | k = n/gcd(m,n) has Omega(k) > r or a prime   |
/// |                         |                   | factor outside ells                          |
struct OrderSetSpec {
  OrderKind kind = OrderKind::explicit_list;
  std::vector<std::uint64_t> values;
  PrimeClass ells;
  std::uint64_t ell = 0;
  std::shared_ptr<const OrderSetSpec> base;
  unsigned r = 0;
  std::uint64_t m = 1;

  static OrderSetSpec explicit_list(std::vector<std::uint64_t> values);
  static OrderSetSpec multiples_of(PrimeClass ells);
  static OrderSetSpec complement_multiples_of(std::uint64_t ell);
  static OrderSetSpec composite_numbers();
  static OrderSetSpec prime_numbers();
  static OrderSetSpec prime_list(std::vector<std::uint64_t> primes);
  static OrderSetSpec congruence_primes(std::uint64_t modulus, std::vector<std::uint64_t> residues);
  static OrderSetSpec ell_powers(std::uint64_t ell);
  static OrderSetSpec squarefree_augmented(OrderSetSpec base);
  static OrderSetSpec omega_bounded(unsigned r, PrimeClass ells, std::uint64_t m);

  /// Membership given the factorization of n (n >= 1; empty factorization for n = 1).
  bool contains(std::uint64_t n, std::span<const arith::PrimePower> factors) const;
  bool contains(std::uint64_t n) const;
};

struct ClosureFlags {
  bool nat_multiplication = true;
  bool lcm = true;
  /// A pair (a, b) that broke the corresponding closure, when one was found.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> nat_witness;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> lcm_witness;
};

/// An order set together with its closure flags, verified when constructed.
///
/// explicit_list sets are checked exhaustively. All other kinds are checked on
/// `pairs` random pairs drawn from members in [2, range] (orders are never 1).
class OrderSet {
 public:
  static constexpr std::uint64_t kClosureRange = 100'000;
  static constexpr unsigned kClosurePairs = 10'000;

  explicit OrderSet(OrderSetSpec spec, std::uint64_t seed = 0);

  const OrderSetSpec& spec() const noexcept { return spec_; }
  const ClosureFlags& flags() const noexcept { return flags_; }
  bool closed_under_nat_multiplication() const noexcept { return flags_.nat_multiplication; }
  bool closed_under_lcm() const noexcept { return flags_.lcm; }

  bool contains(std::uint64_t n) const { return spec_.contains(n); }

 private:
  OrderSetSpec spec_;
  ClosureFlags flags_;
};

ClosureFlags verify_closure(const OrderSetSpec& spec, std::uint64_t seed = 0,
                            std::uint64_t range = OrderSet::kClosureRange,
                            unsigned pairs = OrderSet::kClosurePairs);

/// S as an explicit finite prime list, or S_M induced by an order set. 2 is never a member.
struct PrimeSetSpec {
  enum class Kind { explicit_finite, induced };

  Kind kind = Kind::explicit_finite;
  std::vector<std::uint64_t> primes;  // explicit_finite: odd primes, ascending
  std::shared_ptr<const OrderSet> order_set;

  /// Drops 2; DomainError for non-primes.
  static PrimeSetSpec explicit_finite(std::vector<std::uint64_t> primes);
  static PrimeSetSpec induced(OrderSetSpec spec, std::uint64_t seed = 0);
  static PrimeSetSpec induced(std::shared_ptr<const OrderSet> set);

  bool contains(std::uint64_t p, const arith::OrderTable& orders) const;
};

bool order_set_contains(const OrderSetSpec& spec, std::uint64_t n);
bool prime_set_contains(const PrimeSetSpec& spec, std::uint64_t p, const arith::OrderTable& orders);

// ---- JSON wire format (documented in docs/set-spec.md) ----

OrderSetSpec order_set_from_json(const std::string& text);
PrimeSetSpec prime_set_from_json(const std::string& text, std::uint64_t seed = 0);
std::string to_json(const OrderSetSpec& spec);
std::string to_json(const PrimeSetSpec& spec);

// ---- Order-set combinatorics ----

/// Sorted distinct orders {m_p : p in primes}.
std::vector<std::uint64_t> orders_of(std::span<const std::uint64_t> primes, const arith::OrderTable& orders);

/// Closure of `generators` under lcm, including the empty lcm 1. CapacityError when
/// the closure would exceed `max_size` elements.
std::vector<std::uint64_t> lcm_closure(std::span<const std::uint64_t> generators, std::size_t max_size = 1 << 16);

/// lcm of {d in generators : d | n} (1 when none divides n).
std::uint64_t mbar_of(std::uint64_t n, std::span<const std::uint64_t> generators);
/// lcm of {d | n : d in M, d not in {1, 6}}, the orders of M attained by some prime.
std::uint64_t mbar_of(std::uint64_t n, const OrderSetSpec& spec);

/// {p in S : m_p | mbar} with e_p, for explicit S.
std::vector<mersenne::BigPrimePower> S_mbar(std::uint64_t mbar, std::span<const std::uint64_t> primes,
                                            const arith::OrderTable& orders);
/// {p : m_p in M, m_p | mbar} with e_p, read from primitive prime divisors.
std::vector<mersenne::BigPrimePower> S_mbar(std::uint64_t mbar, const OrderSetSpec& spec, Context& ctx);

/// (S^o, S-bar) for an explicit finite S: S^o is induced by the orders whose whole
/// primitive class lies in S, S-bar by all orders of S.
std::pair<PrimeSetSpec, PrimeSetSpec> inner_outer(std::span<const std::uint64_t> primes, Context& ctx);

struct DensityEstimate {
  std::uint64_t limit = 0;
  std::uint64_t member_count = 0;
  std::uint64_t total_count = 0;
  double ratio = 0.0;
};

/// Fraction of odd primes p <= limit lying in S.
DensityEstimate estimate_density(const PrimeSetSpec& spec, std::uint64_t limit, const arith::OrderTable& orders);
/// Builds a sufficiently large order table when `orders` is too small.
DensityEstimate estimate_density(const PrimeSetSpec& spec, std::uint64_t limit, Context& ctx);

/// Topological entropy of the S-integer doubling map: log 2 for every S with 2 not in S.
double entropy(const PrimeSetSpec& spec);

/// mask[n] = 1 iff n not in M, for 0 < n <= limit (mask[0] = 0). Parallel over
/// `threads` contiguous blocks; the result does not depend on `threads`.
std::vector<std::uint8_t> complement_mask(const OrderSetSpec& spec, const arith::PrimeTable& table,
                                          std::uint64_t limit, unsigned threads = 1);

}  // namespace orbitgrowth::sets
