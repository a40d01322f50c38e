#include "chebsurf/surface_decomposer.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "chebsurf/errors.hpp"
#include "chebsurf/hilbert_curve.hpp"

namespace chebsurf {

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::kMultivariate: return "multivariate";
    case Formulation::kUnivariate:   return "univariate";
  }
  return "multivariate";
}

Formulation parse_formulation(std::string_view name) {
  if (name == "multivariate") {
    return Formulation::kMultivariate;
  }
  if (name == "univariate") {
    return Formulation::kUnivariate;
  }
  throw ArgumentError("unknown formulation '" + std::string(name) +
                      "' (expected multivariate or univariate)");
}

void validate(const DecomposeParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw ArgumentError("epsilon must be a finite value > 0, got " + std::to_string(params.epsilon));
  }
  if (!(params.npar >= 0.0 && params.npar <= 1.0)) {
    throw ArgumentError("npar must lie in [0, 1], got " + std::to_string(params.npar));
  }
  if (!(params.zero_variance_tol >= 0.0) || !(params.zero_variance_abs_tol >= 0.0)) {
    throw ArgumentError("zero-variance tolerances must be non-negative");
  }
}

SurfaceStats SurfaceStats::from_surface(const Surface& surface) {
  SurfaceStats stats(static_cast<int>(surface.features.rows()));
  for (Eigen::Index j = 0; j < surface.features.cols(); ++j) {
    stats.add(surface.features.col(j));
  }
  return stats;
}

bool initialize_pair(const Eigen::Ref<const Eigen::VectorXd>& u,
                     const Eigen::Ref<const Eigen::VectorXd>& v, double npar) {
  return std::abs(cosine_similarity(u, v)) >= npar;
}

namespace {

void require_growable(const SurfaceStats& stats, Eigen::Index candidate_size) {
  if (stats.count() < 2) {
    throw ArgumentError("growth test needs a surface of at least 2 pixels, got " +
                        std::to_string(stats.count()));
  }
  if (candidate_size != stats.n_features()) {
    throw ArgumentError("candidate has " + std::to_string(candidate_size) + " features, surface has " +
                        std::to_string(stats.n_features()));
  }
}

}  // namespace

bool accept_multivariate(const SurfaceStats& stats, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                         double epsilon, const DecomposeParams& params) {
  require_growable(stats, candidate.size());
  const FeatureVector dev = candidate - stats.mean();
  const SquareMatrix cov = stats.covariance();
  if (params.degenerate_fallback && cov.trace() <= params.zero_variance_tol) {
    return dev.lpNorm<Eigen::Infinity>() <= params.zero_variance_abs_tol;
  }
  return mahalanobis_sq(dev, svd_pseudoinverse(cov)) < epsilon;
}

bool accept_multivariate(const Surface& surface, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                         double epsilon, const DecomposeParams& params) {
  return accept_multivariate(SurfaceStats::from_surface(surface), candidate, epsilon, params);
}

bool accept_univariate(const SurfaceStats& stats, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                       double epsilon, const DecomposeParams& params) {
  require_growable(stats, candidate.size());
  const SquareMatrix cov = stats.covariance();
  const int n = stats.n_features();
  int yes = 0;
  for (int j = 0; j < n; ++j) {
    const double dev = std::abs(candidate(j) - stats.mean()(j));
    const double var = cov(j, j);
    if (params.degenerate_fallback && var <= params.zero_variance_tol) {
      yes += dev <= params.zero_variance_abs_tol ? 1 : 0;
    } else {
      yes += dev < epsilon * std::sqrt(std::max(var, 0.0)) ? 1 : 0;
    }
  }
  return 2 * yes > n;
}

bool accept_univariate(const Surface& surface, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                       double epsilon, const DecomposeParams& params) {
  return accept_univariate(SurfaceStats::from_surface(surface), candidate, epsilon, params);
}

bool accept_candidate(const SurfaceStats& stats, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                      const DecomposeParams& params) {
  switch (params.formulation) {
    case Formulation::kMultivariate:
      return accept_multivariate(stats, candidate, params.epsilon, params);
    case Formulation::kUnivariate:
      return accept_univariate(stats, candidate, params.epsilon, params);
  }
  return false;
}

Surface make_surface(int id, std::vector<PixelLoc> locs, const ImageTensor& image) {
  if (locs.empty()) {
    throw ArgumentError("make_surface: empty pixel list");
  }
  Surface s;
  s.id = id;
  s.features.resize(image.n_features(), static_cast<Eigen::Index>(locs.size()));
  for (std::size_t j = 0; j < locs.size(); ++j) {
    s.features.col(static_cast<Eigen::Index>(j)) = image.pixel(locs[j]);
  }
  s.pixel_locs = std::move(locs);
  s.mean_feature = column_mean(s.features);
  return s;
}

Decomposition decompose(const ImageTensor& image, const DecomposeParams& params) {
  validate(params);
  if (image.empty()) {
    throw ArgumentError("decompose: empty image");
  }
  const int n = image.n_features();
  if (params.epsilon <= static_cast<double>(n)) {
    spdlog::warn("epsilon {} is not above the feature count {}; the Chebyshev lower bound is vacuous",
                 params.epsilon, n);
  }

  const CurveCoords curve = curve_for_image(image.height(), image.width());
  const std::size_t len = curve.size();

  Decomposition d;
  d.params = params;
  d.height = image.height();
  d.width = image.width();
  d.n_features = n;

  auto emit = [&](std::size_t begin, std::size_t end) {
    std::vector<PixelLoc> locs(curve.begin() + static_cast<long>(begin),
                               curve.begin() + static_cast<long>(end));
    d.surfaces.push_back(make_surface(static_cast<int>(d.surfaces.size()), std::move(locs), image));
  };

  std::size_t start = 0;
  while (start + 1 < len) {
    const auto u = image.pixel(curve[start]);
    const auto v = image.pixel(curve[start + 1]);
    if (!initialize_pair(u, v, params.npar)) {
      emit(start, start + 1);
      ++start;
      continue;
    }
    SurfaceStats stats(n);
    stats.add(u);
    stats.add(v);
    std::size_t end = start + 2;
    while (end < len) {
      const auto candidate = image.pixel(curve[end]);
      if (!accept_candidate(stats, candidate, params)) {
        break;
      }
      stats.add(candidate);
      ++end;
    }
    emit(start, end);
    start = end;
  }
  if (start < len) {
    emit(start, len);
  }
  return d;
}

FeatureMatrix surface_features(const Decomposition& d) {
  FeatureMatrix out(d.n_features, static_cast<Eigen::Index>(d.surfaces.size()));
  for (std::size_t i = 0; i < d.surfaces.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = d.surfaces[i].mean_feature;
  }
  return out;
}

void validate(const Decomposition& d) {
  if (d.height < 1 || d.width < 1 || d.n_features < 1) {
    throw ValidationError("decomposition has invalid dimensions");
  }
  const CurveCoords curve = curve_for_image(d.height, d.width);
  std::vector<char> seen(d.pixel_count(), 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < d.surfaces.size(); ++i) {
    const Surface& s = d.surfaces[i];
    const std::string where = "surface " + std::to_string(i);
    if (s.id != static_cast<int>(i)) {
      throw ValidationError(where + ": id " + std::to_string(s.id) + " out of sequence");
    }
    if (s.pixel_locs.empty()) {
      throw ValidationError(where + ": no pixels");
    }
    if (s.mean_feature.size() != d.n_features) {
      throw ValidationError(where + ": mean has wrong dimension");
    }
    for (const PixelLoc& p : s.pixel_locs) {
      if (p.row < 0 || p.row >= d.height || p.col < 0 || p.col >= d.width) {
        throw ValidationError(where + ": pixel (" + std::to_string(p.row) + "," +
                              std::to_string(p.col) + ") out of bounds");
      }
      char& mark = seen[static_cast<std::size_t>(p.row) * static_cast<std::size_t>(d.width) +
                        static_cast<std::size_t>(p.col)];
      if (mark) {
        throw ValidationError(where + ": pixel (" + std::to_string(p.row) + "," +
                              std::to_string(p.col) + ") already belongs to another surface");
      }
      mark = 1;
      if (pos >= curve.size() || !(curve[pos] == p)) {
        throw ValidationError(where + ": pixels do not follow the curve order");
      }
      ++pos;
    }
    if (s.features.size() > 0) {
      if (s.features.rows() != d.n_features ||
          s.features.cols() != static_cast<Eigen::Index>(s.pixel_locs.size())) {
        throw ValidationError(where + ": feature matrix shape mismatch");
      }
      if (!(column_mean(s.features) - s.mean_feature).isZero(1e-9 * (1.0 + s.mean_feature.norm()))) {
        throw ValidationError(where + ": mean does not match features");
      }
    }
  }
  if (pos != curve.size()) {
    throw ValidationError("surfaces cover " + std::to_string(pos) + " of " +
                          std::to_string(curve.size()) + " pixels");
  }
}

}  // namespace chebsurf
