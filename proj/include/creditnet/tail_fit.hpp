#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "creditnet/error.hpp"

namespace creditnet {

/// Maximum-likelihood (Hill) estimate of a power-law tail. mu_hat is the
/// exponent of the CUMULATIVE distribution P>(x) ~ x^-mu; the density
/// exponent is mu_hat + 1.
struct TailFit {
  double mu_hat{0.0};
  double std_error{0.0};
  double cutoff{0.0};
  std::size_t tail_count{0};
};

inline TailFit hill_fit(std::span<const double> values, double cutoff) {
  if (cutoff <= 0.0) throw InvalidArgument("hill_fit: cutoff must be positive");
  double log_sum = 0.0;
  std::size_t tail = 0;
  for (double v : values) {
    if (v <= 0.0)
      throw InvalidArgument("hill_fit: nonpositive sample value");
    if (v >= cutoff) {
      log_sum += std::log(v / cutoff);
      ++tail;
    }
  }
  if (tail < 2)
    throw InvalidArgument("hill_fit: fewer than 2 samples at or above cutoff");
  if (log_sum <= 0.0)
    throw InvalidArgument("hill_fit: degenerate tail (all samples at cutoff)");
  TailFit fit;
  fit.tail_count = tail;
  fit.cutoff = cutoff;
  fit.mu_hat = static_cast<double>(tail) / log_sum;
  fit.std_error = fit.mu_hat / std::sqrt(static_cast<double>(tail));
  return fit;
}

/// Cutoff selection: an explicit value, or the empirical q-quantile by the
/// nearest-rank convention (sorted ascending, element ceil(q*n) - 1; for
/// {1..100} at q=0.5 this picks 50).
struct FixedQuantile {
  double q{0.5};
};
struct Explicit {
  double x{0.0};
};
using CutoffStrategy = std::variant<FixedQuantile, Explicit>;

inline double select_cutoff(std::span<const double> values,
                            const CutoffStrategy& strategy) {
  if (values.empty()) throw InvalidArgument("select_cutoff: empty sample");
  if (const auto* ex = std::get_if<Explicit>(&strategy)) {
    if (ex->x <= 0.0)
      throw InvalidArgument("select_cutoff: explicit cutoff must be positive");
    return ex->x;
  }
  double q = std::get<FixedQuantile>(strategy).q;
  if (!(q > 0.0 && q < 1.0))
    throw InvalidArgument("select_cutoff: quantile must lie in (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  if (rank == 0) rank = 1;
  return sorted[rank - 1];
}

}  // namespace creditnet
