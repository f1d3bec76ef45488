#pragma once

// The r_n recursion that tunes the tail intervals (2^{R_n}, 2^{R_n r_n}] of a sparse
// prime set, simulated under an idealized or a perturbed model of
// b_n = sum over the interval of log(1 + 1/p). The intervals themselves are never
// enumerated.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitgrowth/numeric.hpp"

namespace orbitgrowth::recursion {

enum class Mode { idealized, perturbed };
enum class Perturbation { plus, minus, alternating, random };

std::string to_string(Mode mode);
std::string to_string(Perturbation p);
Mode mode_from_string(const std::string& name);
Perturbation perturbation_from_string(const std::string& name);

struct Params {
  ExactRational delta{1, 2};
  std::uint64_t Y = 50;
  /// Defaults to the midpoint of the admissible window.
  std::optional<ExactRational> a_prime;
  unsigned n_max = 40;
  Mode mode = Mode::idealized;
  Perturbation perturbation = Perturbation::plus;
  std::uint64_t seed = 0;
};

/// Admissible a': delta/(5Y) < a' < (4/3) log(1 + delta/Y).
struct Window {
  double lower = 0;
  double upper = 0;
  ExactRational midpoint;
};

Window a_prime_window(const ExactRational& delta, std::uint64_t Y);

/// R_n = floor(2^{n/2} Y), exactly.
std::uint64_t R_of(unsigned n, std::uint64_t Y);

struct Step {
  unsigned n = 0;
  std::uint64_t R = 0;
  std::string r_minus_one;  // decimal renderings of high-precision values
  std::string b;
  std::string partial_sum;
  std::string eta;
  std::string deviation;    // partial_sum - a'(1 - 2^{-n})
  std::string f;
  bool r_in_range = false;      // 1 < r_n < 1 + delta/R_n
  bool sandwich = false;        // a'(1 - 2^{-n} - f(n)) < sum b <= a'(1 - 2^{-n} + f(n))
  bool f_bound = false;         // f(n) < 2^{-(n+2)}
  bool concentration = false;   // R_n (r_n - 1) log 2 <= 2 delta 2^{-n/2}
};

struct RecursionTrace {
  Params params;
  ExactRational a_prime;
  unsigned precision_bits = 0;
  std::vector<Step> steps;
  /// Idealized mode: every partial sum equals a'(1 - 2^{-n}) as an exact rational.
  bool closed_form_exact = false;
  bool all_invariants_hold = false;

  std::string to_json() const;
};

/// Runs the recursion for n = 1..n_max. ContractError when a' lies outside the window.
/// In idealized mode an invariant failure raises InvariantViolation.
RecursionTrace rn_recursion(const Params& params);

/// f(n) = sum_{j=1}^n 100^{-2^{j/4}} 2^{j-n} < 2^{-(n+2)} for n = 1..n_max.
bool f_bound_holds(unsigned n_max);

}  // namespace orbitgrowth::recursion
