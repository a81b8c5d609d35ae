#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "creditnet/bipartite_graph.hpp"
#include "creditnet/error.hpp"

namespace creditnet {

/// Empirical survival function P>(x) = (# samples >= x) / N, evaluated at
/// every distinct sample value, values ascending. The fraction at the minimum
/// is exactly 1, so every point is plottable on log-log axes.
struct CumulativePoint {
  double value{0.0};
  double fraction{0.0};
};

struct CumulativeDistribution {
  std::vector<CumulativePoint> points;
  std::size_t sample_count{0};
};

inline CumulativeDistribution cumulative_distribution(std::span<const double> values) {
  if (values.empty())
    throw InvalidArgument("cumulative_distribution: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  CumulativeDistribution dist;
  dist.sample_count = sorted.size();
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    dist.points.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    i = j;
  }
  return dist;
}

/// Correlation coefficient plus its significance. Pearson results carry a
/// two-sided p_value; Kendall results carry sigma_multiple, the tau estimate
/// expressed in multiples of the no-association null standard deviation.
struct CorrelationResult {
  double coefficient{0.0};
  std::optional<double> p_value;
  std::optional<double> sigma_multiple;
  std::size_t sample_count{0};
};

struct RegressionResult {
  double slope{0.0};
  double intercept{0.0};
  double correlation_r{0.0};
};

/// Concentration of a node's loan portfolio: sum over incident edges of
/// (w / s)^2. Equals 1 for a single link and 1/k when all k links are equal.
inline double participation_ratio(const BipartiteGraph& g, NodeRef n,
                                  Term term = Term::Total) {
  auto incident = g.incident_edges(n);
  if (incident.empty())
    throw InvalidArgument("participation_ratio: isolated node");
  double s = g.strength(n, term);
  if (s <= 0.0)
    throw InvalidArgument("participation_ratio: zero strength for requested term");
  double y = 0.0;
  for (std::uint32_t e : incident) {
    if (auto c = g.edges()[e].weight.component(term)) {
      double share = *c / s;
      y += share * share;
    }
  }
  return y;
}

/// Mean degree of a node's neighbors.
inline double assortativity(const BipartiteGraph& g, NodeRef n) {
  auto incident = g.incident_edges(n);
  if (incident.empty())
    throw InvalidArgument("assortativity: isolated node");
  double sum = 0.0;
  for (std::uint32_t e : incident)
    sum += static_cast<double>(g.degree(g.counterparty(n, e)));
  return sum / static_cast<double>(incident.size());
}

namespace detail {

struct Moments {
  double mean_x, mean_y, sxx, syy, sxy;
};

inline Moments moments(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  Moments m{0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m.mean_x += xs[i];
    m.mean_y += ys[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - m.mean_x;
    double dy = ys[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

/// Strict inversions of `ys` counted by merge sort.
inline std::uint64_t count_inversions(std::vector<double>& ys) {
  std::vector<double> buffer(ys.size());
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < ys.size(); width *= 2) {
    for (std::size_t lo = 0; lo + width < ys.size(); lo += 2 * width) {
      std::size_t mid = lo + width;
      std::size_t hi = std::min(mid + width, ys.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[j] < ys[i]) {
          inversions += mid - i;
          buffer[k++] = ys[j++];
        } else {
          buffer[k++] = ys[i++];
        }
      }
      while (i < mid) buffer[k++] = ys[i++];
      while (j < hi) buffer[k++] = ys[j++];
      std::copy(buffer.begin() + lo, buffer.begin() + hi, ys.begin() + lo);
    }
  }
  return inversions;
}

}  // namespace detail

/// Sample Pearson correlation with a two-sided p-value from the t-statistic
/// t = r sqrt((N-2)/(1-r^2)) against Student-t with N-2 degrees of freedom.
inline CorrelationResult pearson(std::span<const double> xs,
                                 std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw InvalidArgument("pearson: length mismatch");
  if (xs.size() < 3)
    throw InvalidArgument("pearson: need at least 3 samples");
  auto m = detail::moments(xs, ys);
  if (m.sxx == 0.0 || m.syy == 0.0)
    throw InvalidArgument("pearson: constant input, correlation undefined");
  CorrelationResult result;
  result.sample_count = xs.size();
  result.coefficient = m.sxy / std::sqrt(m.sxx * m.syy);
  result.coefficient = std::clamp(result.coefficient, -1.0, 1.0);
  double r2 = result.coefficient * result.coefficient;
  if (r2 >= 1.0) {
    result.p_value = 0.0;
    return result;
  }
  double dof = static_cast<double>(xs.size() - 2);
  double t = result.coefficient * std::sqrt(dof / (1.0 - r2));
  boost::math::students_t_distribution<double> dist(dof);
  result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return result;
}

/// Kendall rank correlation, tau-b (tie-corrected), computed with Knight's
/// merge-sort algorithm. The significance uses the classical no-ties null
/// variance: sigma_multiple = tau / sqrt(2(2n+5) / (9n(n-1))).
inline CorrelationResult kendall_tau(std::span<const double> xs,
                                     std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw InvalidArgument("kendall_tau: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2)
    throw InvalidArgument("kendall_tau: need at least 2 samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (xs[a] != xs[b]) return xs[a] < xs[b];
    return ys[a] < ys[b];
  });

  // Tie corrections over x-groups and joint (x, y) groups.
  std::uint64_t n1 = 0, n3 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && xs[order[j]] == xs[order[i]]) ++j;
    std::uint64_t t = j - i;
    n1 += t * (t - 1) / 2;
    for (std::size_t a = i; a < j;) {
      std::size_t b = a;
      while (b < j && ys[order[b]] == ys[order[a]]) ++b;
      std::uint64_t u = b - a;
      n3 += u * (u - 1) / 2;
      a = b;
    }
    i = j;
  }
  std::uint64_t n2 = 0;
  {
    std::vector<double> sorted_y(ys.begin(), ys.end());
    std::sort(sorted_y.begin(), sorted_y.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && sorted_y[j] == sorted_y[i]) ++j;
      std::uint64_t t = j - i;
      n2 += t * (t - 1) / 2;
      i = j;
    }
  }

  std::vector<double> y_in_x_order(n);
  for (std::size_t i = 0; i < n; ++i) y_in_x_order[i] = ys[order[i]];
  std::uint64_t swaps = detail::count_inversions(y_in_x_order);

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (n0 == n1 || n0 == n2)
    throw InvalidArgument("kendall_tau: all-tied input, tau undefined");

  double concordant_minus_discordant =
      static_cast<double>(n0) - static_cast<double>(n1) -
      static_cast<double>(n2) + static_cast<double>(n3) -
      2.0 * static_cast<double>(swaps);
  double denom = std::sqrt(static_cast<double>(n0 - n1) *
                           static_cast<double>(n0 - n2));

  CorrelationResult result;
  result.sample_count = n;
  result.coefficient = std::clamp(concordant_minus_discordant / denom, -1.0, 1.0);
  double null_sd = std::sqrt(2.0 * (2.0 * n + 5.0) /
                             (9.0 * static_cast<double>(n) * (n - 1.0)));
  result.sigma_multiple = result.coefficient / null_sd;
  return result;
}

struct TermShare {
  double short_share{0.0};
  double long_share{0.0};
};

/// Short and long borrowing as fractions of the firm's total, over the edges
/// that carry a term split (split-less edges are skipped, so the shares sum
/// to exactly 1).
inline TermShare term_share(const BipartiteGraph& g, NodeRef firm) {
  if (firm.mode != Mode::Firm)
    throw InvalidArgument("term_share: expects a firm node");
  double s = g.strength(firm, Term::Short);
  double l = g.strength(firm, Term::Long);
  double total = s + l;
  if (total <= 0.0)
    throw InvalidArgument("term_share: no positive split borrowing for firm " +
                          g.node_id(firm));
  return {s / total, l / total};
}

/// Splits values into k classes of near-equal population (sizes differ by at
/// most one). Class c covers sorted positions [floor(c*n/k), floor((c+1)*n/k));
/// ties are broken by stable input order. Returns the class of each value.
inline std::vector<std::size_t> quantile_classes(std::span<const double> values,
                                                 std::size_t k) {
  if (k < 1) throw InvalidArgument("quantile_classes: k must be >= 1");
  if (k > values.size())
    throw InvalidArgument("quantile_classes: more classes than values");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> cls(values.size());
  const std::size_t n = values.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t lo = c * n / k;
    std::size_t hi = (c + 1) * n / k;
    for (std::size_t pos = lo; pos < hi; ++pos) cls[order[pos]] = c;
  }
  return cls;
}

constexpr std::size_t kNoClass = std::numeric_limits<std::size_t>::max();

/// One firm-degree survival distribution per class. `firm_class[f]` holds the
/// class of firm f or kNoClass for excluded firms; every borrowing firm must
/// be covered and no class may end up empty.
inline std::vector<CumulativeDistribution> conditional_degree_distributions(
    const BipartiteGraph& g, const std::vector<std::size_t>& firm_class,
    std::size_t class_count) {
  if (firm_class.size() != g.firm_count())
    throw InvalidArgument("conditional_degree_distributions: class vector size mismatch");
  std::vector<std::vector<double>> degrees(class_count);
  for (std::size_t f = 0; f < g.firm_count(); ++f) {
    std::size_t c = firm_class[f];
    std::size_t k = g.degree(firm_ref(f));
    if (c == kNoClass) {
      if (k > 0)
        throw InvalidArgument("conditional_degree_distributions: borrowing firm " +
                              g.firm_id(f) + " has no class");
      continue;
    }
    if (c >= class_count)
      throw InvalidArgument("conditional_degree_distributions: class out of range");
    degrees[c].push_back(static_cast<double>(k));
  }
  std::vector<CumulativeDistribution> out;
  out.reserve(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    if (degrees[c].empty())
      throw InvalidArgument("conditional_degree_distributions: class " +
                            std::to_string(c) + " is empty");
    out.push_back(cumulative_distribution(degrees[c]));
  }
  return out;
}

/// Ordinary least squares fit y = slope * x + intercept; correlation_r is the
/// Pearson coefficient of the same data.
inline RegressionResult linear_regression(std::span<const double> xs,
                                          std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw InvalidArgument("linear_regression: length mismatch");
  if (xs.size() < 3)
    throw InvalidArgument("linear_regression: need at least 3 samples");
  auto m = detail::moments(xs, ys);
  if (m.sxx == 0.0)
    throw InvalidArgument("linear_regression: x has zero variance");
  if (m.syy == 0.0)
    throw InvalidArgument("linear_regression: y has zero variance, r undefined");
  RegressionResult r;
  r.slope = m.sxy / m.sxx;
  r.intercept = m.mean_y - r.slope * m.mean_x;
  r.correlation_r = m.sxy / std::sqrt(m.sxx * m.syy);
  return r;
}

}  // namespace creditnet
