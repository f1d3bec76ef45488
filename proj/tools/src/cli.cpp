#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/constants.hpp"
#include "orbitgrowth/context.hpp"
#include "orbitgrowth/errors.hpp"
#include "orbitgrowth/fit.hpp"
#include "orbitgrowth/mersenne.hpp"
#include "orbitgrowth/mertens.hpp"
#include "orbitgrowth/recipes.hpp"
#include "orbitgrowth/recursion.hpp"
#include "orbitgrowth/sets.hpp"

namespace orbitgrowth::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  unsigned threads = 1;
  std::uint64_t seed = 0;

  std::uint64_t limit = 0;
  std::uint64_t prime = 0;
  std::uint64_t exponent = 0;
  std::optional<double> budget;
  std::string spec_path;
  std::uint64_t n_max = 0;
  std::string mode;
  unsigned per_decade = 8;
  std::string in_path;
  std::string out_path;
  std::string format = "csv";
  std::string model = "auto";
  std::string set;
  std::string orders;
  std::string target;
  std::string eps;
  std::uint64_t cap = 127;
  std::string trace_path;
  std::uint64_t ell = 0;
  unsigned terms = 0;
  std::string delta = "1/2";
  std::uint64_t y = 50;
  std::optional<std::string> a_prime;
  std::string perturbation = "plus";
  std::string theorem;
  bool timing = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes `text` to `path`, or to `out` when path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw DomainError("cannot write '" + path + "'");
  file << text;
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw DomainError("'" + item + "' is not a natural number");
    values.push_back(v);
  }
  return values;
}

/// A prime-set document, or an order-set document standing for the induced S_M.
sets::PrimeSetSpec load_prime_set(const std::string& path, std::uint64_t seed) {
  const std::string text = read_file(path);
  std::string kind;
  try {
    kind = Json::parse(text).at("kind").get<std::string>();
  } catch (const Json::exception& e) {
    throw DomainError("malformed set JSON in '" + path + "': " + e.what());
  }
  if (kind == "explicit_finite" || kind == "induced") return sets::prime_set_from_json(text, seed);
  return sets::PrimeSetSpec::induced(sets::order_set_from_json(text), seed);
}

ContextOptions context_options(const RunConfig& cfg) {
  ContextOptions options;
  options.threads = cfg.threads;
  if (cfg.budget) {
    mersenne::Budget b;
    b.limit = std::chrono::duration<double>(*cfg.budget);
    options.budget = b;
  }
  return options;
}

int run_sieve(const RunConfig& cfg, std::ostream& out) {
  const auto table = arith::sieve_primes(cfg.limit);
  if (cfg.out_path.empty()) {
    out << table.prime_count() << '\n';
    return kOk;
  }
  std::ostringstream csv;
  csv << "p\n";
  for (const auto p : table.primes()) csv << p << '\n';
  emit(cfg.out_path, csv.str(), out);
  return kOk;
}

int run_order(const RunConfig& cfg, std::ostream& out) {
  out << arith::mult_order(cfg.prime) << '\n';
  return kOk;
}

int run_factor(const RunConfig& cfg, std::ostream& out) {
  RunConfig with_budget = cfg;
  if (!with_budget.budget) with_budget.budget = 10.0;
  Context ctx(context_options(with_budget));
  out << ctx.factorization(cfg.exponent).to_json_line() << '\n';
  return kOk;
}

int run_set_density(const RunConfig& cfg, std::ostream& out) {
  Context ctx(context_options(cfg));
  const auto S = load_prime_set(cfg.spec_path, cfg.seed);
  const auto d = sets::estimate_density(S, cfg.limit, ctx);
  Json j{{"limit", d.limit}, {"members", d.member_count}, {"odd_primes", d.total_count}, {"density", d.ratio}};
  if (S.kind == sets::PrimeSetSpec::Kind::induced) {
    const auto& flags = S.order_set->flags();
    j["closed_under_nat_multiplication"] = flags.nat_multiplication;
    j["closed_under_lcm"] = flags.lcm;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int run_series(const RunConfig& cfg, std::ostream& out) {
  const auto S = load_prime_set(cfg.spec_path, cfg.seed);
  mertens::MertensSeries series;
  if (cfg.mode == "exact") {
    Context ctx(context_options(cfg));
    series = mertens::mertens_exact(cfg.n_max, S, ctx);
  } else {
    if (S.kind != sets::PrimeSetSpec::Kind::induced) {
      throw ContractError("dominant mode needs an order set (induced prime set)");
    }
    series = mertens::dominant_sum(mertens::geometric_grid(1, cfg.n_max, cfg.per_decade), *S.order_set, cfg.threads);
  }
  std::ostringstream text;
  if (cfg.format == "csv") {
    mertens::write_csv(text, series);
  } else {
    Json rows = Json::array();
    for (const auto& s : series.samples) {
      Json row{{"N", s.N}, {"value", s.exact ? orbitgrowth::to_string(*s.exact) : ""}};
      if (!s.exact) {
        std::ostringstream v;
        v.precision(18);
        v << s.value;
        row["value"] = v.str();
      }
      rows.push_back(row);
    }
    text << Json{{"mode", mertens::to_string(series.mode)}, {"set", Json::parse(series.set_json)}, {"samples", rows}}
                .dump(2)
         << '\n';
  }
  emit(cfg.out_path, text.str(), out);
  return kOk;
}

int run_fit(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.in_path);
  if (!in) throw DomainError("cannot open '" + cfg.in_path + "'");
  const auto series = mertens::read_csv(in);
  const auto report =
      cfg.model == "auto" ? fit::classify_growth(series) : fit::fit_model(series, fit::model_from_string(cfg.model));
  emit(cfg.out_path, report.to_json() + "\n", out);
  return kOk;
}

int run_k_exact(const RunConfig& cfg, std::ostream& out) {
  Context ctx(context_options(cfg));
  if (!cfg.set.empty() && !cfg.orders.empty()) throw DomainError("--set and --orders are exclusive");
  if (cfg.set.empty() && cfg.orders.empty()) throw DomainError("one of --set or --orders is required");
  const auto values = parse_list(cfg.set.empty() ? cfg.orders : cfg.set);
  const auto k = cfg.set.empty() ? constants::k_order_class(values, ctx) : constants::k_exact_finite_S(values, ctx);
  out << orbitgrowth::to_string(k.value) << '\n';
  return kOk;
}

int run_greedy(const RunConfig& cfg, std::ostream& out) {
  Context ctx(context_options(cfg));
  const auto trace = constants::greedy_L(parse_rational(cfg.target), parse_rational(cfg.eps), ctx, cfg.cap);
  if (!cfg.trace_path.empty()) emit(cfg.trace_path, trace.to_json() + "\n", out);
  std::string L;
  for (const auto l : trace.chosen) L += (L.empty() ? "" : ",") + std::to_string(l);
  out << "L = {" << L << "}\n"
      << "k_L = " << orbitgrowth::to_string(trace.k_final) << " = " << to_decimal(trace.k_final) << '\n';
  return trace.terminal ? kOk : kFailure;
}

int run_transcendental(const RunConfig& cfg, std::ostream& out) {
  Context ctx(context_options(cfg));
  const auto e = constants::transcendental_series(cfg.ell, cfg.terms, ctx);
  out << orbitgrowth::to_string(e.constant.value) << '\n'
      << to_decimal(e.constant.value, 30) << '\n'
      << "tail <= " << (e.constant.error_bound ? to_decimal(*e.constant.error_bound, 6) : "0") << '\n';
  return kOk;
}

int run_construct_rn(const RunConfig& cfg, std::ostream& out) {
  recursion::Params p;
  p.delta = parse_rational(cfg.delta);
  p.Y = cfg.y;
  p.n_max = static_cast<unsigned>(cfg.n_max);
  p.mode = recursion::mode_from_string(cfg.mode);
  p.perturbation = recursion::perturbation_from_string(cfg.perturbation);
  p.seed = cfg.seed;
  if (cfg.a_prime) p.a_prime = parse_rational(*cfg.a_prime);
  const auto trace = recursion::rn_recursion(p);
  emit(cfg.out_path, trace.to_json() + "\n", out);
  if (!trace.all_invariants_hold) {
    throw InvariantViolation("constants", "perturbed recursion broke an invariant");
  }
  return kOk;
}

int run_reproduce(const RunConfig& cfg, std::ostream& out) {
  recipes::RunOptions options;
  options.threads = cfg.threads;
  options.seed = cfg.seed;
  bool all = true;
  for (const int id : recipes::criteria_for(cfg.theorem)) {
    const auto result = recipes::run_criterion(id, options);
    out << recipes::format(result, cfg.timing) << '\n';
    all = all && result.passed;
  }
  return all ? kOk : kFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Periodic orbits and dynamical Mertens sums of S-integer doubling maps", "orbitgrowth"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", cfg.seed, "Seed for all randomness");

  auto* sieve = app.add_subcommand("sieve", "Count primes up to --limit; --out writes them as CSV");
  sieve->add_option("--limit", cfg.limit)->required()->check(CLI::Range(std::uint64_t{2}, arith::PrimeTable::kDefaultCapacity));
  sieve->add_option("--out", cfg.out_path);

  auto* order = app.add_subcommand("order", "Multiplicative order of 2 modulo an odd prime");
  order->add_option("--prime", cfg.prime)->required()->check(CLI::PositiveNumber);

  auto* factor = app.add_subcommand("factor", "Factor 2^M - 1 (cached; new results go to ORBITGROWTH_CACHE)");
  factor->add_option("--exponent", cfg.exponent)->required()->check(CLI::PositiveNumber);
  factor->add_option("--budget", cfg.budget, "Seconds (default 10)")->check(CLI::PositiveNumber);

  auto* density = app.add_subcommand("set-density", "Fraction of odd primes up to --limit in the set");
  density->add_option("--spec", cfg.spec_path)->required()->check(CLI::ExistingFile);
  density->add_option("--limit", cfg.limit)->required()->check(CLI::Range(std::uint64_t{3}, arith::PrimeTable::kDefaultCapacity));
  density->add_option("--budget", cfg.budget)->check(CLI::PositiveNumber);

  auto* series = app.add_subcommand("series", "Mertens sums M_S(N) (exact) or D(N) (dominant)");
  series->add_option("--spec", cfg.spec_path)->required()->check(CLI::ExistingFile);
  series->add_option("--n-max", cfg.n_max)->required()->check(CLI::PositiveNumber);
  series->add_option("--mode", cfg.mode)->required()->check(CLI::IsMember({"exact", "dominant"}));
  series->add_option("--grid", cfg.per_decade, "Dominant mode: grid points per decade")->check(CLI::Range(1u, 1000u));
  series->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  series->add_option("--out", cfg.out_path);
  series->add_option("--budget", cfg.budget, "Factor missing exponents within this many seconds each")
      ->check(CLI::PositiveNumber);

  auto* fit_cmd = app.add_subcommand("fit", "Fit a series CSV against the growth models");
  fit_cmd->add_option("--in", cfg.in_path)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--model", cfg.model)->check(CLI::IsMember({"auto", "klog", "logdelta", "loglogr", "bounded"}));
  fit_cmd->add_option("--out", cfg.out_path);

  auto* k_exact = app.add_subcommand("k-exact", "Exact k_S for a finite prime set, or k_L for a set of orders");
  k_exact->add_option("--set", cfg.set, "Comma-separated primes");
  k_exact->add_option("--orders", cfg.orders, "Comma-separated orders L");

  auto* greedy = app.add_subcommand("greedy", "Greedy L with target <= k_L < target + eps");
  greedy->add_option("--target", cfg.target)->required();
  greedy->add_option("--eps", cfg.eps)->required();
  greedy->add_option("--cap", cfg.cap)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1000}));
  greedy->add_option("--trace", cfg.trace_path, "Write the step trace as JSON");

  auto* transcendental = app.add_subcommand("series-transcendental", "Series for k_S, S = {p : m_p a power of ell}");
  transcendental->add_option("--ell", cfg.ell)->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{127}));
  transcendental->add_option("--terms", cfg.terms)->required()->check(CLI::Range(1u, 16u));

  auto* construct = app.add_subcommand("construct", "Constructions");
  construct->require_subcommand(1);
  auto* rn = construct->add_subcommand("rn", "Simulate the r_n recursion");
  rn->add_option("--delta", cfg.delta);
  rn->add_option("--y", cfg.y)->check(CLI::PositiveNumber);
  rn->add_option("--n-max", cfg.n_max)->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{64}));
  rn->add_option("--mode", cfg.mode)->required()->check(CLI::IsMember({"idealized", "perturbed"}));
  rn->add_option("--perturbation", cfg.perturbation)->check(CLI::IsMember({"plus", "minus", "alternating", "random"}));
  rn->add_option("--a-prime", cfg.a_prime, "Defaults to the midpoint of the admissible window");
  rn->add_option("--out", cfg.out_path);

  auto* reproduce = app.add_subcommand("reproduce", "Run acceptance recipes and report pass/fail");
  reproduce->add_option("--theorem", cfg.theorem)->required()->check(CLI::IsMember(recipes::theorem_names()));
  reproduce->add_flag("--timing", cfg.timing, "Append wall-clock time to each line");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  for (auto* sub : app.get_subcommands()) {
    for (auto* nested : sub->get_subcommands()) {
      if (nested->get_help_ptr() && nested->get_help_ptr()->count() > 0) {
        out << nested->help();
        return kOk;
      }
    }
  }

  try {
    if (*sieve) return run_sieve(cfg, out);
    if (*order) return run_order(cfg, out);
    if (*factor) return run_factor(cfg, out);
    if (*density) return run_set_density(cfg, out);
    if (*series) return run_series(cfg, out);
    if (*fit_cmd) return run_fit(cfg, out);
    if (*k_exact) return run_k_exact(cfg, out);
    if (*greedy) return run_greedy(cfg, out);
    if (*transcendental) return run_transcendental(cfg, out);
    if (*rn) return run_construct_rn(cfg, out);
    if (*reproduce) return run_reproduce(cfg, out);
  } catch (const CacheMiss& e) {
    err << "cache miss: " << e.what() << '\n';
    return kCacheMiss;
  } catch (const BudgetExhausted& e) {
    err << "budget exhausted: " << e.what() << " (cofactor " << e.cofactor() << ")\n";
    return kBudget;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace orbitgrowth::cli
