#include "chebsurf/theory_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chebsurf/errors.hpp"

namespace chebsurf {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ArgumentError("epsilon must be > 0, got " + std::to_string(epsilon));
  }
}

void check_features(int n_features) {
  if (n_features < 1) {
    throw ArgumentError("feature count must be >= 1, got " + std::to_string(n_features));
  }
}

}  // namespace

double tail_bound(int n_features, double epsilon) {
  check_features(n_features);
  check_epsilon(epsilon);
  return std::min(1.0, static_cast<double>(n_features) / epsilon);
}

double surface_lower_bound(int n_features, double epsilon) {
  check_features(n_features);
  check_epsilon(epsilon);
  return std::max(0.0, 1.0 - static_cast<double>(n_features) / epsilon);
}

double equal_likelihood_sample_size(double epsilon, int n_features) {
  check_features(n_features);
  const auto n = static_cast<double>(n_features);
  if (!(epsilon > n)) {
    throw DomainError("equal-likelihood sample size requires epsilon > N (epsilon = " +
                      std::to_string(epsilon) + ", N = " + std::to_string(n_features) +
                      "); epsilon must lie in the open interval (N, M)");
  }
  return epsilon * epsilon / (epsilon - n);
}

std::pair<double, double> epsilon_interval(int n_features, long m_pixels) {
  check_features(n_features);
  if (m_pixels <= n_features) {
    throw DomainError("epsilon interval (N, M) is empty: M = " + std::to_string(m_pixels) +
                      " must exceed N = " + std::to_string(n_features));
  }
  return {static_cast<double>(n_features), static_cast<double>(m_pixels)};
}

double max_parameter_order(long m_pixels) {
  if (m_pixels < 1) {
    throw ArgumentError("pixel count must be >= 1");
  }
  return std::sqrt(static_cast<double>(m_pixels));
}

double expected_surface_count(long m_pixels, double epsilon) {
  check_epsilon(epsilon);
  if (m_pixels < 1) {
    throw ArgumentError("pixel count must be >= 1");
  }
  return static_cast<double>(m_pixels) / epsilon;
}

BoundReport make_bound_report(int n_features, long m_pixels, std::optional<double> epsilon) {
  check_features(n_features);
  BoundReport r;
  r.n_features = n_features;
  r.m_pixels = m_pixels;
  r.max_order = max_parameter_order(m_pixels);
  if (m_pixels > n_features) {
    r.epsilon_interval = epsilon_interval(n_features, m_pixels);
  }
  if (epsilon) {
    const double eps = *epsilon;
    r.epsilon = eps;
    r.tail_bound = tail_bound(n_features, eps);
    r.lower_bound = surface_lower_bound(n_features, eps);
    r.expected_surfaces = expected_surface_count(m_pixels, eps);
    if (eps > n_features) {
      r.equal_likelihood_pixels = equal_likelihood_sample_size(eps, n_features);
    }
    r.epsilon_out_of_range = !r.epsilon_interval || eps <= r.epsilon_interval->first ||
                             eps >= r.epsilon_interval->second;
  }
  return r;
}

}  // namespace chebsurf
