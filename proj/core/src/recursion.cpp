#include "orbitgrowth/recursion.hpp"

#include <cmath>
#include <random>

#include <mpfr.h>
#include <nlohmann/json.hpp>

#include "orbitgrowth/errors.hpp"

namespace orbitgrowth::recursion {

namespace {

/// Owning MPFR value with a fixed precision.
class Real {
 public:
  explicit Real(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real& operator=(const Real& other) {
    mpfr_set(v_, other.v_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  std::string str(int digits = 12) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Re", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  mpfr_t v_;
};

void set_q(Real& r, const ExactRational& q) { mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN); }

/// 100^{-2^{n/4}}.
void tiny_term(Real& out, unsigned n) {
  const mpfr_prec_t bits = mpfr_get_prec(out.get());
  Real e(bits), l(bits);
  mpfr_set_ui(e.get(), n, MPFR_RNDN);
  mpfr_div_ui(e.get(), e.get(), 4, MPFR_RNDN);
  mpfr_ui_pow(e.get(), 2, e.get(), MPFR_RNDN);  // 2^{n/4}
  mpfr_set_ui(l.get(), 100, MPFR_RNDN);
  mpfr_log(l.get(), l.get(), MPFR_RNDN);
  mpfr_mul(e.get(), e.get(), l.get(), MPFR_RNDN);
  mpfr_neg(e.get(), e.get(), MPFR_RNDN);
  mpfr_exp(out.get(), e.get(), MPFR_RNDN);
}

mpfr_prec_t precision_for(unsigned n_max) {
  return static_cast<mpfr_prec_t>(std::ceil(std::log2(100.0) * std::exp2(n_max / 4.0))) + 256;
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::idealized ? "idealized" : "perturbed"; }

std::string to_string(Perturbation p) {
  switch (p) {
    case Perturbation::plus: return "plus";
    case Perturbation::minus: return "minus";
    case Perturbation::alternating: return "alternating";
    case Perturbation::random: return "random";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "idealized") return Mode::idealized;
  if (name == "perturbed") return Mode::perturbed;
  throw DomainError("unknown recursion mode '" + name + "'");
}

Perturbation perturbation_from_string(const std::string& name) {
  if (name == "plus") return Perturbation::plus;
  if (name == "minus") return Perturbation::minus;
  if (name == "alternating") return Perturbation::alternating;
  if (name == "random") return Perturbation::random;
  throw DomainError("unknown perturbation '" + name + "'");
}

Window a_prime_window(const ExactRational& delta, std::uint64_t Y) {
  if (delta <= 0 || delta > 1) throw DomainError("delta must lie in (0, 1]");
  if (Y == 0) throw DomainError("Y must be positive");
  Window w;
  const ExactRational ratio = delta / ExactRational(static_cast<unsigned long>(Y));
  w.lower = ExactRational(ratio / 5).get_d();
  w.upper = 4.0 / 3.0 * std::log1p(ratio.get_d());
  w.midpoint = ExactRational((w.lower + w.upper) / 2);
  w.midpoint.canonicalize();
  return w;
}

std::uint64_t R_of(unsigned n, std::uint64_t Y) {
  BigNat v = static_cast<unsigned long>(Y);
  v *= v;
  v <<= n;
  mpz_sqrt(v.get_mpz_t(), v.get_mpz_t());
  if (!v.fits_ulong_p()) throw CapacityError("R_n does not fit in 64 bits");
  return v.get_ui();
}

bool f_bound_holds(unsigned n_max) {
  const mpfr_prec_t bits = precision_for(n_max);
  Real f(bits), term(bits), bound(bits);
  for (unsigned n = 1; n <= n_max; ++n) {
    mpfr_div_ui(f.get(), f.get(), 2, MPFR_RNDN);
    tiny_term(term, n);
    mpfr_add(f.get(), f.get(), term.get(), MPFR_RNDN);
    mpfr_set_ui_2exp(bound.get(), 1, -static_cast<long>(n + 2), MPFR_RNDN);
    if (mpfr_cmp(f.get(), bound.get()) >= 0) return false;
  }
  return true;
}

RecursionTrace rn_recursion(const Params& params) {
  if (params.n_max == 0) throw DomainError("n_max must be positive");
  const Window w = a_prime_window(params.delta, params.Y);
  RecursionTrace trace;
  trace.params = params;
  trace.a_prime = params.a_prime.value_or(w.midpoint);
  const double a_double = trace.a_prime.get_d();
  if (!(w.lower < a_double && a_double < w.upper)) {
    throw ContractError("a' = " + to_decimal(trace.a_prime) + " lies outside the window (" + std::to_string(w.lower) +
                        ", " + std::to_string(w.upper) + ")");
  }

  const mpfr_prec_t bits = precision_for(params.n_max);
  trace.precision_bits = static_cast<unsigned>(bits);
  Real a(bits), delta(bits), sum(bits), f(bits), term(bits), log_r(bits), r(bits), b(bits), eta(bits);
  Real scratch(bits), lower(bits), upper(bits), target(bits), ln2(bits);
  set_q(a, trace.a_prime);
  set_q(delta, params.delta);
  mpfr_const_log2(ln2.get(), MPFR_RNDN);

  ExactRational exact_sum = 0;  // idealized mode only
  trace.closed_form_exact = params.mode == Mode::idealized;
  trace.all_invariants_hold = true;
  std::mt19937_64 rng(params.seed);

  for (unsigned n = 1; n <= params.n_max; ++n) {
    Step step;
    step.n = n;
    step.R = R_of(n, params.Y);

    // log r_n = (a' - (b_1 + ... + b_{n-1})) / 2.
    mpfr_sub(log_r.get(), a.get(), sum.get(), MPFR_RNDN);
    mpfr_div_ui(log_r.get(), log_r.get(), 2, MPFR_RNDN);
    mpfr_exp(r.get(), log_r.get(), MPFR_RNDN);

    mpfr_div_ui(f.get(), f.get(), 2, MPFR_RNDN);
    tiny_term(term, n);
    mpfr_add(f.get(), f.get(), term.get(), MPFR_RNDN);

    if (params.mode == Mode::idealized) {
      mpfr_set_zero(eta.get(), 1);
      const ExactRational half_gap = (trace.a_prime - exact_sum) / 2;
      exact_sum += half_gap;
      exact_sum.canonicalize();
      set_q(sum, exact_sum);
      const ExactRational closed = trace.a_prime * (1 - ExactRational(BigNat(1), BigNat(1) << n));
      if (exact_sum != closed) trace.closed_form_exact = false;
      set_q(b, half_gap);
    } else {
      // |eta_n| < a' 100^{-2^{n/4}}: the amplitude is shrunk by 2^-32 to keep the bound strict.
      mpfr_mul(eta.get(), a.get(), term.get(), MPFR_RNDN);
      mpfr_set_ui_2exp(scratch.get(), 1, -32, MPFR_RNDN);
      mpfr_ui_sub(scratch.get(), 1, scratch.get(), MPFR_RNDN);
      mpfr_mul(eta.get(), eta.get(), scratch.get(), MPFR_RNDN);
      switch (params.perturbation) {
        case Perturbation::plus:
          break;
        case Perturbation::minus:
          mpfr_neg(eta.get(), eta.get(), MPFR_RNDN);
          break;
        case Perturbation::alternating:
          if (n % 2 == 0) mpfr_neg(eta.get(), eta.get(), MPFR_RNDN);
          break;
        case Perturbation::random: {
          const double u = 2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0;
          mpfr_mul_d(eta.get(), eta.get(), u, MPFR_RNDN);
          break;
        }
      }
      mpfr_add(b.get(), log_r.get(), eta.get(), MPFR_RNDN);
      mpfr_add(sum.get(), sum.get(), b.get(), MPFR_RNDN);
    }

    // Invariant 1: 1 < r_n < 1 + delta / R_n.
    mpfr_div_ui(scratch.get(), delta.get(), step.R, MPFR_RNDN);
    mpfr_add_ui(scratch.get(), scratch.get(), 1, MPFR_RNDN);
    step.r_in_range = mpfr_cmp_ui(r.get(), 1) > 0 && mpfr_cmp(r.get(), scratch.get()) < 0;

    // Invariant 2: a'(1 - 2^-n - f) < sum <= a'(1 - 2^-n + f).
    mpfr_set_ui_2exp(target.get(), 1, -static_cast<long>(n), MPFR_RNDN);
    mpfr_ui_sub(target.get(), 1, target.get(), MPFR_RNDN);
    mpfr_sub(lower.get(), target.get(), f.get(), MPFR_RNDN);
    mpfr_mul(lower.get(), lower.get(), a.get(), MPFR_RNDN);
    mpfr_add(upper.get(), target.get(), f.get(), MPFR_RNDN);
    mpfr_mul(upper.get(), upper.get(), a.get(), MPFR_RNDN);
    step.sandwich = mpfr_cmp(lower.get(), sum.get()) < 0 && mpfr_cmp(sum.get(), upper.get()) <= 0;

    // f(n) < 2^{-(n+2)}.
    mpfr_set_ui_2exp(scratch.get(), 1, -static_cast<long>(n + 2), MPFR_RNDN);
    step.f_bound = mpfr_cmp(f.get(), scratch.get()) < 0;

    // Concentration: R_n (r_n - 1) log 2 <= 2 delta 2^{-n/2}.
    Real lhs(bits), rhs(bits);
    mpfr_sub_ui(lhs.get(), r.get(), 1, MPFR_RNDN);
    mpfr_mul_ui(lhs.get(), lhs.get(), step.R, MPFR_RNDN);
    mpfr_mul(lhs.get(), lhs.get(), ln2.get(), MPFR_RNDN);
    mpfr_set_si(rhs.get(), -static_cast<long>(n), MPFR_RNDN);
    mpfr_div_ui(rhs.get(), rhs.get(), 2, MPFR_RNDN);
    mpfr_ui_pow(rhs.get(), 2, rhs.get(), MPFR_RNDN);
    mpfr_mul(rhs.get(), rhs.get(), delta.get(), MPFR_RNDN);
    mpfr_mul_ui(rhs.get(), rhs.get(), 2, MPFR_RNDN);
    step.concentration = mpfr_cmp(lhs.get(), rhs.get()) <= 0;

    mpfr_mul(target.get(), target.get(), a.get(), MPFR_RNDN);
    mpfr_sub(scratch.get(), sum.get(), target.get(), MPFR_RNDN);
    step.deviation = scratch.str();
    mpfr_sub_ui(scratch.get(), r.get(), 1, MPFR_RNDN);
    step.r_minus_one = scratch.str();
    step.b = b.str();
    step.partial_sum = sum.str(20);
    step.eta = eta.str();
    step.f = f.str();

    const bool ok = step.r_in_range && step.sandwich && step.f_bound && step.concentration;
    if (!ok) {
      trace.all_invariants_hold = false;
      if (params.mode == Mode::idealized) {
        throw InvariantViolation("constants", "idealized recursion broke an invariant at n=" + std::to_string(n));
      }
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::string RecursionTrace::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    steps_json.push_back({{"n", s.n},
                          {"R", s.R},
                          {"r_minus_one", s.r_minus_one},
                          {"b", s.b},
                          {"partial_sum", s.partial_sum},
                          {"eta", s.eta},
                          {"deviation", s.deviation},
                          {"f", s.f},
                          {"r_in_range", s.r_in_range},
                          {"sandwich", s.sandwich},
                          {"f_bound", s.f_bound},
                          {"concentration", s.concentration}});
  }
  nlohmann::json j{{"model", "intervals simulated, not enumerated"},
                   {"mode", to_string(params.mode)},
                   {"perturbation", params.mode == Mode::perturbed ? to_string(params.perturbation) : "none"},
                   {"delta", orbitgrowth::to_string(params.delta)},
                   {"Y", params.Y},
                   {"a_prime", orbitgrowth::to_string(a_prime)},
                   {"seed", params.seed},
                   {"precision_bits", precision_bits},
                   {"all_invariants_hold", all_invariants_hold},
                   {"steps", steps_json}};
  if (params.mode == Mode::idealized) j["closed_form_exact"] = closed_form_exact;
  return j.dump(2);
}

}  // namespace orbitgrowth::recursion
