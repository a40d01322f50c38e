#pragma once

#include <string_view>
#include <vector>

#include "chebsurf/image.hpp"
#include "chebsurf/numerics.hpp"

namespace chebsurf {

enum class Formulation { kMultivariate, kUnivariate };

std::string_view to_string(Formulation f);
/// Accepts "multivariate" or "univariate"; throws ArgumentError otherwise.
Formulation parse_formulation(std::string_view name);

struct DecomposeParams {
  double epsilon = 4.0;  ///< Chebyshev parameter, > 0
  double npar = 0.95;    ///< cosine nearness threshold in [0, 1]
  Formulation formulation = Formulation::kMultivariate;
  /// A surface whose covariance trace is at or below this is treated as
  /// degenerate (no spread).
  double zero_variance_tol = 1e-9;
  /// Largest per-channel deviation a degenerate surface still accepts.
  double zero_variance_abs_tol = 1e-6;
  /// When false the growth test is the bare quadratic form, which accepts
  /// any candidate against a zero-covariance surface.
  bool degenerate_fallback = true;

  friend bool operator==(const DecomposeParams&, const DecomposeParams&) = default;
};

/// Throws ArgumentError unless epsilon > 0 (finite), 0 <= npar <= 1 and both
/// tolerances are non-negative.
void validate(const DecomposeParams& params);

/// A contiguous run of curve pixels. `features` holds one column per pixel
/// in curve order and `mean_feature` is its column mean.
struct Surface {
  int id = 0;
  std::vector<PixelLoc> pixel_locs;
  FeatureMatrix features;
  FeatureVector mean_feature;

  std::size_t size() const { return pixel_locs.size(); }
};

/// Surface statistics the growth tests read. Built by feeding pixels in
/// curve order, so the decomposer and any later replay agree bit for bit.
class SurfaceStats {
 public:
  explicit SurfaceStats(int n_features) : moments_(n_features) {}
  static SurfaceStats from_surface(const Surface& surface);

  void add(const Eigen::Ref<const Eigen::VectorXd>& feature) { moments_.add(feature); }
  long count() const { return moments_.count(); }
  int n_features() const { return moments_.dims(); }
  const FeatureVector& mean() const { return moments_.mean(); }
  SquareMatrix covariance() const { return moments_.covariance(); }

 private:
  RunningMoments moments_;
};

struct Decomposition {
  std::vector<Surface> surfaces;
  DecomposeParams params;
  int height = 0;
  int width = 0;
  int n_features = 0;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
};

/// True iff |cos(u, v)| >= npar.
bool initialize_pair(const Eigen::Ref<const Eigen::VectorXd>& u,
                     const Eigen::Ref<const Eigen::VectorXd>& v, double npar);

// Growth tests. The surface must already hold at least two pixels.
//
// Multivariate: with dev = candidate - mean and C the sample covariance,
// accept iff dev^T pinv(C) dev < epsilon. A degenerate C (trace at or below
// zero_variance_tol) instead requires |dev|_inf <= zero_variance_abs_tol,
// unless params.degenerate_fallback is off.
//
// Univariate: each channel votes yes iff |dev_j| < epsilon * sigma_j, and a
// zero-spread channel votes yes iff |dev_j| <= zero_variance_abs_tol.
// Accept on a strict majority of yes votes.
bool accept_multivariate(const SurfaceStats& stats, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                         double epsilon, const DecomposeParams& params);
bool accept_multivariate(const Surface& surface, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                         double epsilon, const DecomposeParams& params);
bool accept_univariate(const SurfaceStats& stats, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                       double epsilon, const DecomposeParams& params);
bool accept_univariate(const Surface& surface, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                       double epsilon, const DecomposeParams& params);

/// Dispatches on params.formulation.
bool accept_candidate(const SurfaceStats& stats, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                      const DecomposeParams& params);

/// Walks the Hilbert curve over the image and partitions it into bounded
/// surfaces. Concatenating the surfaces' pixel lists reproduces the curve.
Decomposition decompose(const ImageTensor& image, const DecomposeParams& params);

/// One column per surface: its mean feature, in surface order.
FeatureMatrix surface_features(const Decomposition& d);

/// Builds a Surface from image pixels, filling features and mean.
Surface make_surface(int id, std::vector<PixelLoc> locs, const ImageTensor& image);

/// Checks disjoint cover of the image grid, curve order, contiguous ids,
/// and (when features are present) feature/mean consistency. Throws
/// ValidationError describing the first violation.
void validate(const Decomposition& d);

}  // namespace chebsurf
