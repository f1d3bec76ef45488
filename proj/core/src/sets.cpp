#include "orbitgrowth/sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "orbitgrowth/errors.hpp"

namespace orbitgrowth::sets {

namespace {

using arith::PrimePower;
using Json = nlohmann::json;

void sort_unique(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_prime(std::uint64_t p, const char* what) {
  if (!arith::is_prime_u64(p)) throw DomainError(std::string(what) + ": " + std::to_string(p) + " is not prime");
}

unsigned big_omega(std::span<const PrimePower> f) {
  unsigned total = 0;
  for (const auto& pp : f) total += pp.exponent;
  return total;
}

/// Factorization of n <= table.limit() into a caller buffer, without allocating.
std::size_t factor_into(std::uint64_t n, const arith::PrimeTable& table, std::array<PrimePower, 16>& out) {
  std::size_t count = 0;
  while (n > 1) {
    const std::uint32_t p = table.smallest_factor(n);
    unsigned e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    out[count++] = {p, e};
  }
  return count;
}

arith::Factorization merge(const arith::Factorization& a, const arith::Factorization& b, bool take_max) {
  arith::Factorization out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].prime < a[i].prime) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].prime, take_max ? std::max(a[i].exponent, b[j].exponent) : a[i].exponent + b[j].exponent});
      ++i;
      ++j;
    }
  }
  return out;
}

std::uint64_t value_of(const arith::Factorization& f) {
  std::uint64_t n = 1;
  for (const auto& pp : f) {
    for (unsigned e = 0; e < pp.exponent; ++e) {
      if (__builtin_mul_overflow(n, pp.prime, &n)) throw CapacityError("closure test product exceeds 64 bits");
    }
  }
  return n;
}

PrimeClass prime_class_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("prime class must be a JSON object");
  const std::string kind = j.at("kind").get<std::string>();
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : j.items()) {
      if (key == "kind") continue;
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        throw DomainError("unknown field '" + key + "' in prime class '" + kind + "'");
      }
    }
  };
  if (kind == "all") {
    allow({});
    return PrimeClass::all();
  }
  if (kind == "list") {
    allow({"primes"});
    return PrimeClass::list(j.at("primes").get<std::vector<std::uint64_t>>());
  }
  if (kind == "congruence") {
    allow({"modulus", "residues"});
    return PrimeClass::congruence(j.at("modulus").get<std::uint64_t>(),
                                  j.at("residues").get<std::vector<std::uint64_t>>());
  }
  throw DomainError("unknown prime class kind '" + kind + "'");
}

Json prime_class_to_json(const PrimeClass& c) {
  switch (c.kind) {
    case PrimeClass::Kind::all:
      return {{"kind", "all"}};
    case PrimeClass::Kind::list:
      return {{"kind", "list"}, {"primes", c.primes}};
    case PrimeClass::Kind::congruence:
      return {{"kind", "congruence"}, {"modulus", c.modulus}, {"residues", c.residues}};
  }
  return {};
}

OrderSetSpec order_set_from(const Json& j) {
  if (!j.is_object()) throw DomainError("order set must be a JSON object");
  const std::string kind = j.at("kind").get<std::string>();
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : j.items()) {
      if (key == "kind") continue;
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        throw DomainError("unknown field '" + key + "' in order set '" + kind + "'");
      }
    }
  };
  // multiples_of and omega_bounded take either "ells" (a list) or "ell_class".
  auto ell_class = [&]() {
    if (j.contains("ells") == j.contains("ell_class")) {
      throw DomainError("order set '" + kind + "' needs exactly one of 'ells' or 'ell_class'");
    }
    return j.contains("ells") ? PrimeClass::list(j.at("ells").get<std::vector<std::uint64_t>>())
                              : prime_class_from_json(j.at("ell_class"));
  };
  if (kind == "explicit_list") {
    allow({"values"});
    return OrderSetSpec::explicit_list(j.at("values").get<std::vector<std::uint64_t>>());
  }
  if (kind == "multiples_of") {
    allow({"ells", "ell_class"});
    return OrderSetSpec::multiples_of(ell_class());
  }
  if (kind == "complement_multiples_of") {
    allow({"ell"});
    return OrderSetSpec::complement_multiples_of(j.at("ell").get<std::uint64_t>());
  }
  if (kind == "composite_numbers") {
    allow({});
    return OrderSetSpec::composite_numbers();
  }
  if (kind == "prime_numbers") {
    allow({});
    return OrderSetSpec::prime_numbers();
  }
  if (kind == "prime_list") {
    allow({"primes"});
    return OrderSetSpec::prime_list(j.at("primes").get<std::vector<std::uint64_t>>());
  }
  if (kind == "congruence_primes") {
    allow({"modulus", "residues"});
    return OrderSetSpec::congruence_primes(j.at("modulus").get<std::uint64_t>(),
                                           j.at("residues").get<std::vector<std::uint64_t>>());
  }
  if (kind == "ell_powers") {
    allow({"ell"});
    return OrderSetSpec::ell_powers(j.at("ell").get<std::uint64_t>());
  }
  if (kind == "squarefree_augmented") {
    allow({"base"});
    return OrderSetSpec::squarefree_augmented(order_set_from(j.at("base")));
  }
  if (kind == "omega_bounded") {
    allow({"r", "ells", "ell_class", "m"});
    return OrderSetSpec::omega_bounded(j.at("r").get<unsigned>(), ell_class(), j.value("m", std::uint64_t{1}));
  }
  throw DomainError("unknown order set kind '" + kind + "'");
}

Json order_set_to(const OrderSetSpec& s) {
  Json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case OrderKind::explicit_list:
      j["values"] = s.values;
      break;
    case OrderKind::multiples_of:
      if (s.ells.kind == PrimeClass::Kind::list) {
        j["ells"] = s.ells.primes;
      } else {
        j["ell_class"] = prime_class_to_json(s.ells);
      }
      break;
    case OrderKind::complement_multiples_of:
    case OrderKind::ell_powers:
      j["ell"] = s.ell;
      break;
    case OrderKind::composite_numbers:
    case OrderKind::prime_numbers:
      break;
    case OrderKind::prime_list:
      j["primes"] = s.ells.primes;
      break;
    case OrderKind::congruence_primes:
      j["modulus"] = s.ells.modulus;
      j["residues"] = s.ells.residues;
      break;
    case OrderKind::squarefree_augmented:
      j["base"] = order_set_to(*s.base);
      break;
    case OrderKind::omega_bounded:
      j["r"] = s.r;
      j["ell_class"] = prime_class_to_json(s.ells);
      j["m"] = s.m;
      break;
  }
  return j;
}

}  // namespace

// ---- PrimeClass ----

PrimeClass PrimeClass::all() { return {}; }

PrimeClass PrimeClass::list(std::vector<std::uint64_t> primes) {
  for (auto p : primes) require_prime(p, "prime class");
  sort_unique(primes);
  PrimeClass c;
  c.kind = Kind::list;
  c.primes = std::move(primes);
  return c;
}

PrimeClass PrimeClass::congruence(std::uint64_t modulus, std::vector<std::uint64_t> residues) {
  if (modulus == 0) throw DomainError("congruence class modulus must be positive");
  for (auto r : residues) {
    if (r >= modulus) throw DomainError("residue " + std::to_string(r) + " not reduced modulo " + std::to_string(modulus));
  }
  sort_unique(residues);
  PrimeClass c;
  c.kind = Kind::congruence;
  c.modulus = modulus;
  c.residues = std::move(residues);
  return c;
}

bool PrimeClass::contains(std::uint64_t p) const {
  switch (kind) {
    case Kind::all:
      return true;
    case Kind::list:
      return std::binary_search(primes.begin(), primes.end(), p);
    case Kind::congruence:
      return std::binary_search(residues.begin(), residues.end(), p % modulus);
  }
  return false;
}

ExactRational PrimeClass::density() const {
  switch (kind) {
    case Kind::all:
      return 1;
    case Kind::list:
      return 0;
    case Kind::congruence: {
      unsigned long hits = 0;
      for (auto r : residues) hits += arith::gcd(r, modulus) == 1 ? 1 : 0;
      ExactRational d(hits, arith::euler_phi(modulus));
      d.canonicalize();
      return d;
    }
  }
  return 0;
}

// ---- OrderSetSpec ----

std::string to_string(OrderKind kind) {
  switch (kind) {
    case OrderKind::explicit_list: return "explicit_list";
    case OrderKind::multiples_of: return "multiples_of";
    case OrderKind::complement_multiples_of: return "complement_multiples_of";
    case OrderKind::composite_numbers: return "composite_numbers";
    case OrderKind::prime_numbers: return "prime_numbers";
    case OrderKind::prime_list: return "prime_list";
    case OrderKind::congruence_primes: return "congruence_primes";
    case OrderKind::ell_powers: return "ell_powers";
    case OrderKind::squarefree_augmented: return "squarefree_augmented";
    case OrderKind::omega_bounded: return "omega_bounded";
  }
  return "unknown";
}

OrderSetSpec OrderSetSpec::explicit_list(std::vector<std::uint64_t> values) {
  for (auto v : values) {
    if (v == 0) throw DomainError("order sets contain positive integers only");
  }
  sort_unique(values);
  OrderSetSpec s;
  s.kind = OrderKind::explicit_list;
  s.values = std::move(values);
  return s;
}

OrderSetSpec OrderSetSpec::multiples_of(PrimeClass ells) {
  OrderSetSpec s;
  s.kind = OrderKind::multiples_of;
  s.ells = std::move(ells);
  return s;
}

OrderSetSpec OrderSetSpec::complement_multiples_of(std::uint64_t ell) {
  require_prime(ell, "complement_multiples_of");
  OrderSetSpec s;
  s.kind = OrderKind::complement_multiples_of;
  s.ell = ell;
  return s;
}

OrderSetSpec OrderSetSpec::composite_numbers() {
  OrderSetSpec s;
  s.kind = OrderKind::composite_numbers;
  return s;
}

OrderSetSpec OrderSetSpec::prime_numbers() {
  OrderSetSpec s;
  s.kind = OrderKind::prime_numbers;
  return s;
}

OrderSetSpec OrderSetSpec::prime_list(std::vector<std::uint64_t> primes) {
  OrderSetSpec s;
  s.kind = OrderKind::prime_list;
  s.ells = PrimeClass::list(std::move(primes));
  return s;
}

OrderSetSpec OrderSetSpec::congruence_primes(std::uint64_t modulus, std::vector<std::uint64_t> residues) {
  OrderSetSpec s;
  s.kind = OrderKind::congruence_primes;
  s.ells = PrimeClass::congruence(modulus, std::move(residues));
  return s;
}

OrderSetSpec OrderSetSpec::ell_powers(std::uint64_t ell) {
  require_prime(ell, "ell_powers");
  OrderSetSpec s;
  s.kind = OrderKind::ell_powers;
  s.ell = ell;
  return s;
}

OrderSetSpec OrderSetSpec::squarefree_augmented(OrderSetSpec base) {
  OrderSetSpec s;
  s.kind = OrderKind::squarefree_augmented;
  s.base = std::make_shared<const OrderSetSpec>(std::move(base));
  return s;
}

OrderSetSpec OrderSetSpec::omega_bounded(unsigned r, PrimeClass ells, std::uint64_t m) {
  if (m == 0) throw DomainError("omega_bounded: m must be positive");
  OrderSetSpec s;
  s.kind = OrderKind::omega_bounded;
  s.r = r;
  s.ells = std::move(ells);
  s.m = m;
  return s;
}

bool OrderSetSpec::contains(std::uint64_t n, std::span<const PrimePower> f) const {
  if (n == 0) throw DomainError("order set membership needs n >= 1");
  switch (kind) {
    case OrderKind::explicit_list:
      return std::binary_search(values.begin(), values.end(), n);
    case OrderKind::multiples_of:
      return std::any_of(f.begin(), f.end(), [&](const PrimePower& pp) { return ells.contains(pp.prime); });
    case OrderKind::complement_multiples_of:
      return n % ell != 0;
    case OrderKind::composite_numbers:
      return big_omega(f) != 1;
    case OrderKind::prime_numbers:
      return big_omega(f) == 1;
    case OrderKind::prime_list:
    case OrderKind::congruence_primes:
      return big_omega(f) == 1 && ells.contains(n);
    case OrderKind::ell_powers:
      return f.empty() || (f.size() == 1 && f[0].prime == ell);
    case OrderKind::squarefree_augmented:
      return std::any_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.exponent > 1; }) ||
             base->contains(n, f);
    case OrderKind::omega_bounded: {
      unsigned omega = 0;
      for (const auto& pp : f) {
        unsigned in_m = 0;
        for (std::uint64_t rest = m; rest % pp.prime == 0; rest /= pp.prime) ++in_m;
        if (pp.exponent <= in_m) continue;
        if (!ells.contains(pp.prime)) return true;
        omega += pp.exponent - in_m;
      }
      return omega > r;
    }
  }
  return false;
}

bool OrderSetSpec::contains(std::uint64_t n) const {
  if (n == 0) throw DomainError("order set membership needs n >= 1");
  if (kind == OrderKind::explicit_list) return std::binary_search(values.begin(), values.end(), n);
  if (kind == OrderKind::complement_multiples_of) return n % ell != 0;
  const auto f = arith::factorize_u64(n);
  return contains(n, f);
}

bool order_set_contains(const OrderSetSpec& spec, std::uint64_t n) { return spec.contains(n); }

// ---- Closure verification ----

ClosureFlags verify_closure(const OrderSetSpec& spec, std::uint64_t seed, std::uint64_t range, unsigned pairs) {
  ClosureFlags flags;
  if (spec.kind == OrderKind::explicit_list) {
    const auto& v = spec.values;
    if (!v.empty()) {
      flags.nat_multiplication = false;
      flags.nat_witness = {v.back(), 2};
    }
    for (std::size_t i = 0; i < v.size() && flags.lcm; ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (!std::binary_search(v.begin(), v.end(), arith::lcm(v[i], v[j]))) {
          flags.lcm = false;
          flags.lcm_witness = {v[i], v[j]};
          break;
        }
      }
    }
    return flags;
  }

  const arith::PrimeTable table(range);
  std::vector<std::uint64_t> members;
  std::vector<arith::Factorization> factorizations(range + 1);
  for (std::uint64_t n = 2; n <= range; ++n) {
    factorizations[n] = table.factorize(n);
    if (spec.contains(n, factorizations[n])) members.push_back(n);
  }
  if (members.empty()) return flags;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_member(0, members.size() - 1);
  std::uniform_int_distribution<std::uint64_t> pick_any(2, range);
  for (unsigned i = 0; i < pairs; ++i) {
    const std::uint64_t a = members[pick_member(rng)];
    const std::uint64_t b = pick_any(rng);
    const std::uint64_t c = members[pick_member(rng)];
    if (flags.nat_multiplication) {
      const auto f = merge(factorizations[a], factorizations[b], false);
      if (!spec.contains(value_of(f), f)) {
        flags.nat_multiplication = false;
        flags.nat_witness = {a, b};
      }
    }
    if (flags.lcm) {
      const auto f = merge(factorizations[a], factorizations[c], true);
      if (!spec.contains(value_of(f), f)) {
        flags.lcm = false;
        flags.lcm_witness = {a, c};
      }
    }
    if (!flags.nat_multiplication && !flags.lcm) break;
  }
  return flags;
}

OrderSet::OrderSet(OrderSetSpec spec, std::uint64_t seed) : spec_(std::move(spec)), flags_(verify_closure(spec_, seed)) {}

// ---- PrimeSetSpec ----

PrimeSetSpec PrimeSetSpec::explicit_finite(std::vector<std::uint64_t> primes) {
  for (auto p : primes) require_prime(p, "explicit prime set");
  std::erase(primes, std::uint64_t{2});
  sort_unique(primes);
  PrimeSetSpec s;
  s.kind = Kind::explicit_finite;
  s.primes = std::move(primes);
  return s;
}

PrimeSetSpec PrimeSetSpec::induced(OrderSetSpec spec, std::uint64_t seed) {
  return induced(std::make_shared<const OrderSet>(std::move(spec), seed));
}

PrimeSetSpec PrimeSetSpec::induced(std::shared_ptr<const OrderSet> set) {
  PrimeSetSpec s;
  s.kind = Kind::induced;
  s.order_set = std::move(set);
  return s;
}

bool PrimeSetSpec::contains(std::uint64_t p, const arith::OrderTable& orders) const {
  if (p == 2) return false;
  if (kind == Kind::explicit_finite) return std::binary_search(primes.begin(), primes.end(), p);
  return order_set->contains(orders.order(p));
}

bool prime_set_contains(const PrimeSetSpec& spec, std::uint64_t p, const arith::OrderTable& orders) {
  return spec.contains(p, orders);
}

// ---- JSON ----

OrderSetSpec order_set_from_json(const std::string& text) {
  try {
    return order_set_from(Json::parse(text));
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed order set JSON: ") + e.what());
  }
}

PrimeSetSpec prime_set_from_json(const std::string& text, std::uint64_t seed) {
  try {
    const auto j = Json::parse(text);
    if (!j.is_object()) throw DomainError("prime set must be a JSON object");
    const std::string kind = j.at("kind").get<std::string>();
    for (const auto& [key, _] : j.items()) {
      const bool ok = key == "kind" || (kind == "explicit_finite" && key == "primes") ||
                      (kind == "induced" && key == "order_set");
      if (!ok) throw DomainError("unknown field '" + key + "' in prime set '" + kind + "'");
    }
    if (kind == "explicit_finite") return PrimeSetSpec::explicit_finite(j.at("primes").get<std::vector<std::uint64_t>>());
    if (kind == "induced") return PrimeSetSpec::induced(order_set_from(j.at("order_set")), seed);
    throw DomainError("unknown prime set kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed prime set JSON: ") + e.what());
  }
}

std::string to_json(const OrderSetSpec& spec) { return order_set_to(spec).dump(); }

std::string to_json(const PrimeSetSpec& spec) {
  if (spec.kind == PrimeSetSpec::Kind::explicit_finite) {
    return Json{{"kind", "explicit_finite"}, {"primes", spec.primes}}.dump();
  }
  return Json{{"kind", "induced"}, {"order_set", order_set_to(spec.order_set->spec())}}.dump();
}

// ---- Combinatorics ----

std::vector<std::uint64_t> orders_of(std::span<const std::uint64_t> primes, const arith::OrderTable& orders) {
  std::vector<std::uint64_t> out;
  for (auto p : primes) {
    if (p != 2) out.push_back(orders.order(p));
  }
  sort_unique(out);
  return out;
}

std::vector<std::uint64_t> lcm_closure(std::span<const std::uint64_t> generators, std::size_t max_size) {
  std::set<std::uint64_t> closure{1};
  for (const auto g : generators) {
    std::vector<std::uint64_t> added;
    for (const auto c : closure) added.push_back(arith::lcm(c, g));
    closure.insert(added.begin(), added.end());
    if (closure.size() > max_size) {
      throw CapacityError("lcm closure exceeds " + std::to_string(max_size) + " elements");
    }
  }
  return {closure.begin(), closure.end()};
}

std::uint64_t mbar_of(std::uint64_t n, std::span<const std::uint64_t> generators) {
  if (n == 0) throw DomainError("mbar_of needs n >= 1");
  std::uint64_t m = 1;
  for (const auto g : generators) {
    if (n % g == 0) m = arith::lcm(m, g);
  }
  return m;
}

std::uint64_t mbar_of(std::uint64_t n, const OrderSetSpec& spec) {
  if (n == 0) throw DomainError("mbar_of needs n >= 1");
  std::uint64_t m = 1;
  for (const auto d : arith::divisors(n)) {
    if (d != 1 && d != 6 && spec.contains(d)) m = arith::lcm(m, d);
  }
  return m;
}

std::vector<mersenne::BigPrimePower> S_mbar(std::uint64_t mbar, std::span<const std::uint64_t> primes,
                                            const arith::OrderTable& orders) {
  std::vector<mersenne::BigPrimePower> out;
  for (const auto p : primes) {
    if (p == 2) continue;
    const auto m = orders.order(p);
    if (mbar % m == 0) {
      out.push_back({BigNat(std::to_string(p), 10), arith::mersenne_base_exponent(BigNat(std::to_string(p), 10), m)});
    }
  }
  return out;
}

std::vector<mersenne::BigPrimePower> S_mbar(std::uint64_t mbar, const OrderSetSpec& spec, Context& ctx) {
  std::vector<mersenne::BigPrimePower> out;
  for (const auto d : arith::divisors(mbar)) {
    if (!spec.contains(d)) continue;
    const auto& prim = ctx.primitive_primes(d);
    out.insert(out.end(), prim.begin(), prim.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
  return out;
}

std::pair<PrimeSetSpec, PrimeSetSpec> inner_outer(std::span<const std::uint64_t> primes, Context& ctx) {
  const auto orders = orders_of(primes, ctx.orders());
  std::vector<std::uint64_t> inner;
  for (const auto m : orders) {
    const auto& prim = ctx.primitive_primes(m);
    const bool complete = std::all_of(prim.begin(), prim.end(), [&](const mersenne::BigPrimePower& pp) {
      return pp.prime.fits_ulong_p() &&
             std::find(primes.begin(), primes.end(), pp.prime.get_ui()) != primes.end();
    });
    if (complete) inner.push_back(m);
  }
  return {PrimeSetSpec::induced(OrderSetSpec::explicit_list(inner)),
          PrimeSetSpec::induced(OrderSetSpec::explicit_list(orders))};
}

// ---- Densities ----

DensityEstimate estimate_density(const PrimeSetSpec& spec, std::uint64_t limit, const arith::OrderTable& orders) {
  if (limit > orders.limit()) {
    throw CapacityError("density limit " + std::to_string(limit) + " exceeds order table limit " +
                        std::to_string(orders.limit()));
  }
  DensityEstimate est;
  est.limit = limit;
  const auto ps = orders.primes();
  const auto ms = orders.orders();
  for (std::size_t i = 0; i < ps.size() && ps[i] <= limit; ++i) {
    ++est.total_count;
    const bool member = spec.kind == PrimeSetSpec::Kind::explicit_finite
                            ? std::binary_search(spec.primes.begin(), spec.primes.end(), std::uint64_t{ps[i]})
                            : spec.order_set->contains(ms[i]);
    if (member) ++est.member_count;
  }
  est.ratio = est.total_count ? static_cast<double>(est.member_count) / static_cast<double>(est.total_count) : 0.0;
  return est;
}

DensityEstimate estimate_density(const PrimeSetSpec& spec, std::uint64_t limit, Context& ctx) {
  if (limit <= ctx.orders().limit()) return estimate_density(spec, limit, ctx.orders());
  const arith::OrderTable larger(limit);
  return estimate_density(spec, limit, larger);
}

double entropy(const PrimeSetSpec&) { return std::log(2.0); }

std::vector<std::uint8_t> complement_mask(const OrderSetSpec& spec, const arith::PrimeTable& table,
                                          std::uint64_t limit, unsigned threads) {
  if (limit > table.limit()) {
    throw CapacityError("mask limit " + std::to_string(limit) + " exceeds sieve limit " + std::to_string(table.limit()));
  }
  std::vector<std::uint8_t> mask(limit + 1, 0);
  auto fill = [&](std::uint64_t lo, std::uint64_t hi) {
    std::array<PrimePower, 16> buffer;
    for (std::uint64_t n = lo; n < hi; ++n) {
      const std::size_t count = n == 1 ? 0 : factor_into(n, table, buffer);
      mask[n] = spec.contains(n, std::span<const PrimePower>(buffer.data(), count)) ? 0 : 1;
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || limit < 1'000'000) {
    fill(1, limit + 1);
    return mask;
  }
  std::vector<std::thread> workers;
  const std::uint64_t block = (limit + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = 1 + t * block;
    const std::uint64_t hi = std::min(limit + 1, lo + block);
    if (lo < hi) workers.emplace_back(fill, lo, hi);
  }
  for (auto& w : workers) w.join();
  return mask;
}

}  // namespace orbitgrowth::sets
