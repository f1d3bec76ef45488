#include "orbitgrowth/mertens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "orbitgrowth/errors.hpp"

namespace orbitgrowth::mertens {

namespace {

unsigned small_valuation(std::uint64_t n, const BigNat& p) {
  if (!p.fits_ulong_p() || p.get_ui() > n) return 0;
  return arith::valuation(n, p.get_ui());
}

void divide_out(BigNat& value, const BigNat& p, unsigned e, std::uint64_t n) {
  BigNat power;
  mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), e);
  if (!mpz_divisible_p(value.get_mpz_t(), power.get_mpz_t())) {
    throw InvariantViolation("mertens-engine", p.get_str() + "^" + std::to_string(e) + " does not divide 2^" +
                                                   std::to_string(n) + "-1");
  }
  mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), power.get_mpz_t());
}

BigNat periodic_points_impl(std::uint64_t n, const sets::PrimeSetSpec& S, Context& ctx) {
  if (n == 0) throw DomainError("periodic_points needs n >= 1");
  BigNat value = mersenne_number(n);
  if (S.kind == sets::PrimeSetSpec::Kind::explicit_finite) {
    for (const auto p : S.primes) {
      const unsigned e = arith::ord_p_mersenne(p, n, ctx.orders());
      if (e > 0) divide_out(value, BigNat(std::to_string(p), 10), e, n);
    }
    return value;
  }
  const auto& M = S.order_set->spec();
  for (const auto d : arith::divisors(n)) {
    if (d == 1 || !M.contains(d)) continue;
    for (const auto& pp : ctx.primitive_primes(d)) {
      divide_out(value, pp.prime, pp.exponent + small_valuation(n, pp.prime), n);
    }
  }
  return value;
}

/// Elements of the lcm closure of `generators` (with 1) that are <= cap.
std::vector<std::uint64_t> capped_closure(const std::vector<std::uint64_t>& generators, std::uint64_t cap) {
  std::set<std::uint64_t> closure{1};
  for (const auto g : generators) {
    if (g > cap) continue;
    std::vector<std::uint64_t> added;
    for (const auto c : closure) {
      const std::uint64_t l = c / arith::gcd(c, g) * g;
      if (l <= cap) added.push_back(l);
    }
    closure.insert(added.begin(), added.end());
  }
  return {closure.begin(), closure.end()};
}

std::vector<std::uint64_t> orders_of(const std::vector<Stratum>& strata) {
  std::vector<std::uint64_t> out;
  for (const auto& s : strata) out.push_back(s.order);
  return out;
}

/// Members of S with m_p | mbar, and the generators not dividing mbar.
struct StratumView {
  std::vector<mersenne::BigPrimePower> primes;
  std::vector<std::uint64_t> excluded;
};

StratumView view_of(std::uint64_t mbar, const std::vector<Stratum>& strata) {
  StratumView v;
  for (const auto& s : strata) {
    if (mbar % s.order == 0) {
      v.primes.insert(v.primes.end(), s.primes.begin(), s.primes.end());
    } else {
      v.excluded.push_back(s.order);
    }
  }
  std::sort(v.primes.begin(), v.primes.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
  return v;
}

bool stays_in_stratum(std::uint64_t n, const StratumView& v) {
  return std::none_of(v.excluded.begin(), v.excluded.end(), [&](std::uint64_t g) { return n % g == 0; });
}

std::string format_long_double(long double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.18Lg", x);
  return buffer;
}

}  // namespace

BigNat periodic_points(std::uint64_t n, const sets::PrimeSetSpec& S, Context& ctx) {
  return periodic_points_impl(n, S, ctx);
}

std::vector<BigNat> periodic_point_table(std::uint64_t n_max, const sets::PrimeSetSpec& S, Context& ctx) {
  std::vector<BigNat> F(n_max + 1);
  for (std::uint64_t n = 1; n <= n_max; ++n) F[n] = periodic_points_impl(n, S, ctx);
  return F;
}

BigNat orbit_count(std::uint64_t n, const std::vector<BigNat>& F) {
  if (n == 0 || n >= F.size()) throw DomainError("orbit_count: n outside the periodic point table");
  BigNat total = 0;
  for (const auto d : arith::divisors(n)) {
    const int mu = arith::moebius(n / d);
    if (mu > 0) total += F[d];
    if (mu < 0) total -= F[d];
  }
  if (total < 0 || !mpz_divisible_ui_p(total.get_mpz_t(), n)) {
    throw InvariantViolation("mertens-engine", "orbit sum for n=" + std::to_string(n) + " is not a non-negative multiple of n");
  }
  mpz_divexact_ui(total.get_mpz_t(), total.get_mpz_t(), n);
  return total;
}

BigNat orbit_count(std::uint64_t n, const sets::PrimeSetSpec& S, Context& ctx) {
  return orbit_count(n, periodic_point_table(n, S, ctx));
}

std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "dominant"; }

std::vector<double> MertensSeries::xs() const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(static_cast<double>(s.N));
  return out;
}

std::vector<double> MertensSeries::values() const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(static_cast<double>(s.value));
  return out;
}

MertensSeries mertens_exact(std::uint64_t n_max, const sets::PrimeSetSpec& S, Context& ctx, std::uint64_t ceiling) {
  if (n_max == 0) throw DomainError("mertens_exact needs N >= 1");
  if (n_max > ceiling) {
    throw CapacityError("exact mode is limited to N <= " + std::to_string(ceiling));
  }
  const auto F = periodic_point_table(n_max, S, ctx);
  MertensSeries series;
  series.mode = Mode::exact;
  series.set_json = sets::to_json(S);
  ExactRational sum = 0;
  BigNat power = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    power <<= 1;
    ExactRational term(orbit_count(n, F), power);
    term.canonicalize();
    sum += term;
    series.samples.push_back({n, to_long_double(sum), sum});
  }
  return series;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, unsigned per_decade) {
  if (lo == 0 || hi < lo || per_decade == 0) throw DomainError("geometric_grid needs 1 <= lo <= hi and per_decade > 0");
  std::vector<std::uint64_t> grid;
  for (unsigned i = 0;; ++i) {
    const long double x = static_cast<long double>(lo) * std::pow(10.0L, static_cast<long double>(i) / per_decade);
    const auto n = static_cast<std::uint64_t>(std::llround(x));
    if (n > hi) break;
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.back() != hi) grid.push_back(hi);
  return grid;
}

MertensSeries dominant_sum(const std::vector<std::uint64_t>& grid, const sets::OrderSet& M, unsigned threads) {
  if (!M.closed_under_nat_multiplication()) {
    throw ContractError("dominant_sum needs an order set closed under multiplication by N; use decompose_lcm_closed");
  }
  if (grid.empty() || grid.front() == 0 || !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw DomainError("dominant_sum grid must be strictly increasing positive integers");
  }
  const std::uint64_t limit = grid.back();
  if (limit > kDominantCeiling) throw CapacityError("dominant_sum is limited to N <= 10^8");

  const arith::PrimeTable table(std::max<std::uint64_t>(limit, 2));
  const auto mask = sets::complement_mask(M.spec(), table, limit, threads);

  threads = std::max(1u, threads);
  const std::uint64_t block = (limit + threads - 1) / threads;
  struct Partial {
    FixedSum total;
    std::map<std::uint64_t, FixedSum> at;  // running sums at grid points in this block
  };
  std::vector<Partial> partials(threads);
  auto work = [&](unsigned t) {
    const std::uint64_t lo = 1 + t * block;
    const std::uint64_t hi = std::min(limit + 1, lo + block);
    auto next = std::lower_bound(grid.begin(), grid.end(), lo);
    Partial& part = partials[t];
    for (std::uint64_t n = lo; n < hi; ++n) {
      if (mask[n]) part.total.add_reciprocal(n);
      if (next != grid.end() && *next == n) {
        part.at.emplace(n, part.total);
        ++next;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back(work, t);
    for (auto& w : workers) w.join();
  }

  MertensSeries series;
  series.mode = Mode::dominant;
  series.set_json = sets::to_json(M.spec());
  FixedSum before;
  for (const auto& part : partials) {
    for (const auto& [n, running] : part.at) {
      FixedSum value = before;
      value += running;
      series.samples.push_back({n, value.to_long_double(), std::nullopt});
    }
    before += part.total;
  }
  return series;
}

std::vector<Stratum> strata(const sets::PrimeSetSpec& S, std::uint64_t n_max, Context& ctx) {
  std::vector<Stratum> out;
  if (S.kind == sets::PrimeSetSpec::Kind::explicit_finite) {
    std::map<std::uint64_t, Stratum> by_order;
    for (const auto p : S.primes) {
      const std::uint64_t m = ctx.orders().order(p);
      const BigNat big(std::to_string(p), 10);
      auto& s = by_order[m];
      s.order = m;
      s.primes.push_back({big, arith::mersenne_base_exponent(big, m)});
    }
    for (auto& [_, s] : by_order) out.push_back(std::move(s));
    return out;
  }
  const auto& M = S.order_set->spec();
  for (std::uint64_t g = 2; g <= n_max; ++g) {
    if (g == 6 || !M.contains(g)) continue;
    out.push_back({g, ctx.primitive_primes(g)});
  }
  return out;
}

Decomposition decompose_lcm_closed(std::uint64_t N, const sets::PrimeSetSpec& S, Context& ctx) {
  if (N == 0) throw DomainError("decompose_lcm_closed needs N >= 1");
  const auto layers = strata(S, N, ctx);
  Decomposition dec;
  dec.N = N;
  dec.total = 0;
  for (const auto mbar : capped_closure(orders_of(layers), N)) {
    const auto view = view_of(mbar, layers);
    StratumTerm term;
    term.mbar = mbar;
    term.S_mbar = view.primes;
    BigNat denominator = mbar;
    for (const auto& pp : view.primes) {
      BigNat power;
      mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent + small_valuation(mbar, pp.prime));
      denominator *= power;
    }
    term.coefficient = ExactRational(BigNat(1), denominator);
    term.inner = 0;
    for (std::uint64_t k = 1; k * mbar <= N; ++k) {
      if (!stays_in_stratum(k * mbar, view)) continue;
      BigNat k_denominator = k;
      for (const auto& pp : view.primes) {
        const unsigned v = small_valuation(k, pp.prime);
        if (v == 0) continue;
        BigNat power;
        mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), v);
        k_denominator *= power;
      }
      ExactRational piece(BigNat(1), k_denominator);
      term.inner += piece;
      ++term.inner_terms;
    }
    dec.total += term.coefficient * term.inner;
    dec.terms.push_back(std::move(term));
  }

  dec.direct = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    ExactRational piece(periodic_points_impl(n, S, ctx), mersenne_number(n) * n);
    piece.canonicalize();
    dec.direct += piece;
  }
  if (dec.total != dec.direct) {
    throw InvariantViolation("mertens-engine", "stratified and direct sums disagree at N=" + std::to_string(N));
  }
  return dec;
}

std::vector<long double> stratified_sum(const std::vector<std::uint64_t>& grid, const std::vector<Stratum>& layers) {
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) throw DomainError("grid must be sorted and non-empty");
  const std::uint64_t limit = grid.back();
  std::vector<long double> per_n(limit + 1, 0.0L);
  for (const auto mbar : capped_closure(orders_of(layers), limit)) {
    const auto view = view_of(mbar, layers);
    long double coefficient = 1.0L / static_cast<long double>(mbar);
    std::vector<std::pair<std::uint64_t, long double>> small_primes;  // (p, 1/p) for p that can divide k
    for (const auto& pp : view.primes) {
      const long double p = to_long_double(ExactRational(pp.prime));
      coefficient *= std::pow(p, -static_cast<long double>(pp.exponent + small_valuation(mbar, pp.prime)));
      if (pp.prime.fits_ulong_p() && pp.prime.get_ui() <= limit) small_primes.emplace_back(pp.prime.get_ui(), 1.0L / p);
    }
    for (std::uint64_t k = 1; k * mbar <= limit; ++k) {
      const std::uint64_t n = k * mbar;
      if (!stays_in_stratum(n, view)) continue;
      long double weight = coefficient / static_cast<long double>(k);
      for (const auto& [p, inverse] : small_primes) {
        for (std::uint64_t rest = k; rest % p == 0; rest /= p) weight *= inverse;
      }
      per_n[n] += weight;
    }
  }
  std::vector<long double> out;
  long double running = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= limit && next < grid.size(); ++n) {
    running += per_n[n];
    while (next < grid.size() && grid[next] == n) {
      out.push_back(running);
      ++next;
    }
  }
  return out;
}

RemainderBound remainder_bounds(std::uint64_t N) {
  if (N < 6) throw ContractError("remainder_bounds needs N >= 6");
  RemainderBound rb;
  rb.N = N;
  const long double n = static_cast<long double>(N);
  rb.bound_R = 2.0L * std::exp2(-n) + std::exp2(-n / 2.0L) / (1.0L - std::sqrt(0.5L));

  // Terms 4 * 2^{-phi(n)} summed exactly up to `stretch`; beyond it phi(n) >= sqrt(n)
  // and the sum is at most the integral of 4 * 2^{-sqrt(x)} from `stretch`.
  const std::uint64_t stretch = N + 4096;
  long double sum = 0;
  for (std::uint64_t k = stretch; k >= N; --k) {
    sum += 4.0L * std::exp2(-static_cast<long double>(arith::euler_phi(k)));
  }
  const long double s = std::sqrt(static_cast<long double>(stretch));
  const long double ln2 = std::log(2.0L);
  rb.bound_Q = sum + 8.0L * std::exp2(-s) * (s / ln2 + 1.0L / (ln2 * ln2));
  return rb;
}

void write_csv(std::ostream& out, const MertensSeries& series) {
  out << "N,value,mode,bound_R,bound_Q\n";
  for (const auto& s : series.samples) {
    out << s.N << ',' << (s.exact ? orbitgrowth::to_string(*s.exact) : format_long_double(s.value)) << ',' << to_string(series.mode)
        << ',';
    if (s.N >= 6) {
      const auto rb = remainder_bounds(s.N);
      out << format_long_double(rb.bound_R) << ',' << format_long_double(rb.bound_Q);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

MertensSeries read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("series CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto col = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DomainError("series CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t n_col = col("N"), v_col = col("value");
  const auto mode_it = std::find(header.begin(), header.end(), "mode");

  MertensSeries series;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() <= std::max(n_col, v_col)) {
      throw DomainError("series CSV line " + std::to_string(line_number) + " has too few columns");
    }
    Sample s;
    s.N = std::stoull(cells[n_col]);
    const ExactRational q = parse_rational(cells[v_col]);
    s.value = to_long_double(q);
    if (cells[v_col].find('/') != std::string::npos) s.exact = q;
    if (!series.samples.empty() && s.N <= series.samples.back().N) {
      throw DomainError("series CSV line " + std::to_string(line_number) + ": N not strictly increasing");
    }
    if (mode_it != header.end()) {
      const auto idx = static_cast<std::size_t>(mode_it - header.begin());
      if (idx < cells.size() && cells[idx] == "dominant") series.mode = Mode::dominant;
    }
    series.samples.push_back(std::move(s));
  }
  return series;
}

}  // namespace orbitgrowth::mertens
