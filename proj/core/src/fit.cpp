#include "orbitgrowth/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "orbitgrowth/errors.hpp"

namespace orbitgrowth::fit {

namespace {

struct Points {
  std::vector<double> N;
  std::vector<double> v;
};

Points growth_points(const mertens::MertensSeries& series, const GridRequirement& req) {
  Points pts;
  for (const auto& s : series.samples) {
    if (s.N < 3) continue;
    pts.N.push_back(static_cast<double>(s.N));
    pts.v.push_back(static_cast<double>(s.value));
  }
  if (pts.N.size() < req.min_samples) {
    throw ContractError("growth fits need at least " + std::to_string(req.min_samples) + " samples with N >= 3, got " +
                        std::to_string(pts.N.size()));
  }
  const double decades = std::log10(pts.N.back() / pts.N.front());
  if (decades + 1e-9 < req.min_decades) {
    throw ContractError("growth fits need a grid spanning " + std::to_string(req.min_decades) + " decades");
  }
  return pts;
}

struct Profile {
  LinearFit fit;
  std::vector<double> g;
};

/// Least squares over the tail half; g is evaluated on the whole grid.
Profile profile(const Points& pts, const std::function<double(double)>& g) {
  Profile p;
  for (const double n : pts.N) p.g.push_back(g(n));
  const std::size_t half = pts.N.size() / 2;
  p.fit = fit_linear(std::span<const double>(p.g).subspan(half), std::span<const double>(pts.v).subspan(half));
  return p;
}

double tail_residual(const Points& pts, const Profile& p) {
  double sup = 0;
  for (std::size_t i = pts.N.size() / 2; i < pts.N.size(); ++i) {
    sup = std::max(sup, std::abs(pts.v[i] - (p.fit.intercept + p.fit.slope * p.g[i])));
  }
  return sup;
}

int growth_rank(const FitReport& r) {
  switch (r.model) {
    case Model::bounded: return 0;
    case Model::loglogr: return 1 + static_cast<int>(r.r.value_or(1));
    case Model::logdelta: return 10;
    case Model::klog: return 20;
  }
  return 30;
}

}  // namespace

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("fit_linear: x and y sizes differ");
  if (xs.size() < 2) throw DomainError("fit_linear: at least two points required");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw DomainError("fit_linear: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    f.sum_squares += e * e;
    f.residual_sup = std::max(f.residual_sup, std::abs(e));
  }
  return f;
}

std::string to_string(Model model) {
  switch (model) {
    case Model::klog: return "klog";
    case Model::logdelta: return "logdelta";
    case Model::loglogr: return "loglogr";
    case Model::bounded: return "bounded";
  }
  return "unknown";
}

Model model_from_string(const std::string& name) {
  if (name == "klog") return Model::klog;
  if (name == "logdelta") return Model::logdelta;
  if (name == "loglogr") return Model::loglogr;
  if (name == "bounded") return Model::bounded;
  throw DomainError("unknown model '" + name + "'");
}

std::string FitReport::to_json() const {
  nlohmann::json j{{"model", fit::to_string(model)},
                   {"k", k},
                   {"delta", nullptr},
                   {"r", nullptr},
                   {"residual", residual},
                   {"n_samples", n_samples}};
  if (delta) j["delta"] = *delta;
  if (r) j["r"] = *r;
  return j.dump(2);
}

FitReport fit_model(const mertens::MertensSeries& series, Model model, std::optional<double> fixed_exponent,
                    GridRequirement requirement) {
  FitReport report;
  report.model = model;

  if (model == Model::bounded) {
    if (series.samples.size() < 2) throw ContractError("bounded model needs at least two samples");
    const std::size_t half = series.samples.size() / 2;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = half; i < series.samples.size(); ++i) {
      const double v = static_cast<double>(series.samples[i].value);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    report.residual = hi - lo;
    report.intercept = static_cast<double>(series.samples.back().value);
    report.n_samples = series.samples.size();
    report.score = report.residual;
    return report;
  }

  const Points pts = growth_points(series, requirement);
  report.n_samples = pts.N.size();
  Profile best;
  int extra_parameters = 0;

  switch (model) {
    case Model::klog:
      best = profile(pts, [](double n) { return std::log(n); });
      break;
    case Model::loglogr: {
      auto with_r = [&](unsigned r) {
        return profile(pts, [r](double n) { return std::pow(std::log(std::log(n)), static_cast<double>(r)); });
      };
      if (fixed_exponent) {
        const double r = *fixed_exponent;
        if (r != std::floor(r) || r < 1 || r > 3) throw DomainError("loglogr: r must be 1, 2 or 3");
        report.r = static_cast<unsigned>(r);
        best = with_r(*report.r);
      } else {
        extra_parameters = 1;
        for (unsigned r = 1; r <= 3; ++r) {
          auto candidate = with_r(r);
          if (!report.r || candidate.fit.sum_squares < best.fit.sum_squares) {
            best = std::move(candidate);
            report.r = r;
          }
        }
      }
      break;
    }
    case Model::logdelta: {
      auto with_delta = [&](double d) { return profile(pts, [d](double n) { return std::pow(std::log(n), d); }); };
      if (fixed_exponent) {
        if (!(*fixed_exponent > 0 && *fixed_exponent <= 1)) throw DomainError("logdelta: delta must lie in (0, 1]");
        report.delta = *fixed_exponent;
      } else {
        extra_parameters = 1;
        // Golden-section search of the profiled sum of squares on [0.05, 1].
        const double phi = (std::sqrt(5.0) - 1) / 2;
        double a = 0.05, b = 1.0;
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = with_delta(c).fit.sum_squares, fd = with_delta(d).fit.sum_squares;
        while (b - a > 1e-7) {
          if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = with_delta(c).fit.sum_squares;
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = with_delta(d).fit.sum_squares;
          }
        }
        report.delta = (a + b) / 2;
      }
      best = with_delta(*report.delta);
      break;
    }
    case Model::bounded:
      break;
  }
  report.k = best.fit.slope;
  report.intercept = best.fit.intercept;
  report.residual = tail_residual(pts, best);
  report.score = report.residual * std::pow(2.0, 1 + extra_parameters);
  return report;
}

FitReport classify_growth(const mertens::MertensSeries& series, GridRequirement requirement) {
  std::vector<FitReport> candidates;
  candidates.push_back(fit_model(series, Model::bounded, std::nullopt, requirement));
  for (const Model m : {Model::loglogr, Model::logdelta, Model::klog}) {
    auto report = fit_model(series, m, std::nullopt, requirement);
    if (report.k > 0) candidates.push_back(std::move(report));
  }
  const FitReport* best = &candidates.front();
  for (const auto& c : candidates) {
    const double tolerance = 1e-9 * std::max(std::abs(c.score), std::abs(best->score));
    if (c.score < best->score - tolerance) {
      best = &c;
    } else if (std::abs(c.score - best->score) <= tolerance && growth_rank(c) < growth_rank(*best)) {
      best = &c;
    }
  }
  FitReport chosen = *best;
  for (const auto& c : candidates) {
    if (&c != best && std::abs(c.score - chosen.score) <= 1e-9 * std::max(std::abs(c.score), std::abs(chosen.score))) {
      chosen.note = "tie with " + to_string(c.model) + " resolved toward slower growth";
    }
  }
  return chosen;
}

}  // namespace orbitgrowth::fit
