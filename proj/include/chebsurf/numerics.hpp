#pragma once

#include <Eigen/Core>

namespace chebsurf {

// Feature matrices follow the rows = dimensions, cols = pixels convention.
using FeatureVector = Eigen::VectorXd;
using FeatureMatrix = Eigen::MatrixXd;
using SquareMatrix = Eigen::MatrixXd;

/// <a,b> / (|a| |b|). Both-zero vectors give 1, exactly one zero vector gives 0.
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

FeatureVector column_mean(const Eigen::Ref<const FeatureMatrix>& m);

/// Unbiased (n-1) covariance across columns; a single column yields zeros.
SquareMatrix sample_covariance(const Eigen::Ref<const FeatureMatrix>& m);

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// N * sigma_max * 2^-40 are treated as zero.
SquareMatrix svd_pseudoinverse(const Eigen::Ref<const SquareMatrix>& m);

/// dev^T * pinv_cov * dev, with results in [-1e-9, 0) clamped to zero.
double mahalanobis_sq(const Eigen::Ref<const Eigen::VectorXd>& dev,
                      const Eigen::Ref<const SquareMatrix>& pinv_cov);

/// Streaming mean and co-moment accumulator (Welford). Adding the same
/// columns in the same order always produces bit-identical statistics.
class RunningMoments {
 public:
  explicit RunningMoments(int dims);

  void add(const Eigen::Ref<const Eigen::VectorXd>& x);

  int dims() const { return static_cast<int>(mean_.size()); }
  long count() const { return count_; }
  const FeatureVector& mean() const { return mean_; }
  /// Unbiased covariance; zero matrix while count < 2.
  SquareMatrix covariance() const;

 private:
  long count_ = 0;
  FeatureVector mean_;
  SquareMatrix comoment_;
};

}  // namespace chebsurf
