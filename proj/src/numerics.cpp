#include "chebsurf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "chebsurf/errors.hpp"

namespace chebsurf {

namespace {

void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw ArgumentError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                        std::to_string(b) + ")");
  }
}

}  // namespace

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  require_same_size(a.size(), b.size(), "cosine_similarity");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 && nb == 0.0) {
    return 1.0;
  }
  if (na == 0.0 || nb == 0.0) {
    return 0.0;
  }
  const double c = a.dot(b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

FeatureVector column_mean(const Eigen::Ref<const FeatureMatrix>& m) {
  if (m.cols() == 0 || m.rows() == 0) {
    throw ArgumentError("column_mean: empty matrix");
  }
  return m.rowwise().sum() / static_cast<double>(m.cols());
}

SquareMatrix sample_covariance(const Eigen::Ref<const FeatureMatrix>& m) {
  if (m.cols() == 0 || m.rows() == 0) {
    throw ArgumentError("sample_covariance: empty matrix");
  }
  const Eigen::Index n = m.cols();
  if (n == 1) {
    return SquareMatrix::Zero(m.rows(), m.rows());
  }
  const FeatureMatrix centered = m.colwise() - column_mean(m);
  SquareMatrix cov = centered * centered.transpose() / static_cast<double>(n - 1);
  // Symmetrize exactly; the product above can differ in the last ulp.
  return (cov + cov.transpose()) * 0.5;
}

SquareMatrix svd_pseudoinverse(const Eigen::Ref<const SquareMatrix>& m) {
  if (!m.allFinite()) {
    throw ArgumentError("svd_pseudoinverse: non-finite entry");
  }
  if (m.size() == 0) {
    return SquareMatrix(m.cols(), m.rows());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol =
      static_cast<double>(std::max(m.rows(), m.cols())) * sigma_max * std::ldexp(1.0, -40);

  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) {
      inv(i) = 1.0 / sigma(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double mahalanobis_sq(const Eigen::Ref<const Eigen::VectorXd>& dev,
                      const Eigen::Ref<const SquareMatrix>& pinv_cov) {
  require_same_size(pinv_cov.rows(), pinv_cov.cols(), "mahalanobis_sq (matrix not square)");
  require_same_size(dev.size(), pinv_cov.rows(), "mahalanobis_sq");
  const double q = dev.dot(pinv_cov * dev);
  if (q < 0.0 && q >= -1e-9) {
    return 0.0;
  }
  return q;
}

RunningMoments::RunningMoments(int dims)
    : mean_(FeatureVector::Zero(dims)), comoment_(SquareMatrix::Zero(dims, dims)) {
  if (dims < 1) {
    throw ArgumentError("RunningMoments: dims must be >= 1");
  }
}

void RunningMoments::add(const Eigen::Ref<const Eigen::VectorXd>& x) {
  require_same_size(x.size(), mean_.size(), "RunningMoments::add");
  ++count_;
  const FeatureVector delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  const FeatureVector delta2 = x - mean_;
  comoment_.noalias() += delta * delta2.transpose();
}

SquareMatrix RunningMoments::covariance() const {
  if (count_ < 2) {
    return SquareMatrix::Zero(mean_.size(), mean_.size());
  }
  const SquareMatrix cov = comoment_ / static_cast<double>(count_ - 1);
  return (cov + cov.transpose()) * 0.5;
}

}  // namespace chebsurf
