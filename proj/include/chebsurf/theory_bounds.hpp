#pragma once

#include <optional>
#include <utility>

namespace chebsurf {

/// Probability bounds and parameter relations of the multivariate Chebyshev
/// growth criterion for an image of M pixels with N features each.
struct BoundReport {
  int n_features = 0;
  long m_pixels = 0;
  std::optional<double> epsilon;
  std::optional<double> tail_bound;         ///< min(1, N / eps)
  std::optional<double> lower_bound;        ///< max(0, 1 - N / eps)
  std::optional<double> expected_surfaces;  ///< M / eps
  /// eps^2 / (eps - N); present only when eps > N.
  std::optional<double> equal_likelihood_pixels;
  /// Open interval (N, M) for eps; absent when M <= N.
  std::optional<std::pair<double, double>> epsilon_interval;
  double max_order = 0.0;  ///< sqrt(M)
  /// eps given and outside (N, M).
  bool epsilon_out_of_range = false;
};

/// P{D >= eps} <= N / eps, capped at 1.
double tail_bound(int n_features, double epsilon);

/// P{D < eps} >= 1 - N / eps, floored at 0.
double surface_lower_bound(int n_features, double epsilon);

/// Pixel count at which M / eps equally likely surfaces, each with
/// probability 1 - N / eps, exhaust the image: eps^2 / (eps - N).
/// Throws DomainError when eps <= N.
double equal_likelihood_sample_size(double epsilon, int n_features);

/// Admissible range (N, M) for eps. Throws DomainError when M <= N.
std::pair<double, double> epsilon_interval(int n_features, long m_pixels);

/// sqrt(M): order of the largest usable eps and N.
double max_parameter_order(long m_pixels);

/// M / eps.
double expected_surface_count(long m_pixels, double epsilon);

BoundReport make_bound_report(int n_features, long m_pixels, std::optional<double> epsilon);

}  // namespace chebsurf
