#pragma once

// Fitting Mertens series against the growth regimes k log N, k (log N)^delta,
// k (log log N)^r and bounded.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitgrowth/mertens.hpp"

namespace orbitgrowth::fit {

struct LinearFit {
  double intercept = 0;
  double slope = 0;
  double sum_squares = 0;   // residual sum of squares
  double residual_sup = 0;  // max |y - fit| over all points
};

/// Ordinary least squares y ~ intercept + slope x. DomainError for fewer than two
/// distinct x values.
LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

enum class Model { klog, logdelta, loglogr, bounded };

std::string to_string(Model model);
Model model_from_string(const std::string& name);

struct FitReport {
  Model model = Model::klog;
  double k = 0;
  std::optional<double> delta;
  std::optional<unsigned> r;
  double intercept = 0;
  /// Growth models: sup |v - fit| over the tail half. bounded: max |v_i - v_j| over
  /// the tail half.
  double residual = 0;
  std::size_t n_samples = 0;
  /// Residual times 2 per free parameter beyond the bounded model's one.
  double score = 0;
  std::string note;

  /// {"model","k","delta","r","residual","n_samples"}; absent parameters are null.
  std::string to_json() const;
};

struct GridRequirement {
  std::size_t min_samples = 8;
  double min_decades = 2.0;
};

/// Fits `model`. Growth models use samples with N >= 3 and need `requirement`;
/// `fixed_exponent` pins delta (logdelta) or r (loglogr).
FitReport fit_model(const mertens::MertensSeries& series, Model model,
                    std::optional<double> fixed_exponent = std::nullopt, GridRequirement requirement = {});

/// Lowest score among the four models; growth models need k > 0; ties within a
/// relative 1e-9 go to the slower-growing model.
FitReport classify_growth(const mertens::MertensSeries& series, GridRequirement requirement = {});

}  // namespace orbitgrowth::fit
