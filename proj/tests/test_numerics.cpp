#include <doctest.h>

#include <cmath>
#include <random>

#include "chebsurf/errors.hpp"
#include "chebsurf/numerics.hpp"
#include "oracles.hpp"

using namespace chebsurf;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    out(i++) = x;
  }
  return out;
}

FeatureMatrix columns(std::initializer_list<std::initializer_list<double>> cols) {
  const auto rows = static_cast<Eigen::Index>(cols.begin()->size());
  FeatureMatrix m(rows, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const auto& c : cols) {
    m.col(j++) = vec(c);
  }
  return m;
}

std::vector<oracle::Vec> to_points(const FeatureMatrix& m) {
  std::vector<oracle::Vec> pts;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    pts.emplace_back(m.col(j).data(), m.col(j).data() + m.rows());
  }
  return pts;
}

// Random n x n matrix of the requested rank (rank 0 gives zeros).
Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int n, int rank) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < rank; ++r) {
    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u(i) = g(rng);
      v(i) = g(rng);
    }
    a += std::pow(10.0, scale(rng)) * u * v.transpose();
  }
  return a;
}

}  // namespace

TEST_CASE("cosine_similarity") {
  CHECK(cosine_similarity(vec({1, 0, 0}), vec({2, 0, 0})) == doctest::Approx(1.0));
  CHECK(cosine_similarity(vec({1, 0, 0}), vec({0, 1, 0})) == doctest::Approx(0.0));
  CHECK(cosine_similarity(vec({1, 1, 0}), vec({1, 0, 0})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK(cosine_similarity(vec({0, 0, 0}), vec({0, 0, 0})) == 1.0);
  CHECK(cosine_similarity(vec({0, 0, 0}), vec({1, 2, 3})) == 0.0);
  CHECK(cosine_similarity(vec({4, 5, 6}), vec({0, 0, 0})) == 0.0);
  CHECK_THROWS_AS(cosine_similarity(vec({1, 2}), vec({1, 2, 3})), ArgumentError);
}

TEST_CASE("cosine_similarity properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_real_distribution<double> s(0.01, 50.0);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a(i) = u(rng);
      b(i) = u(rng);
    }
    const double ab = cosine_similarity(a, b);
    CHECK(ab == cosine_similarity(b, a));
    CHECK(std::abs(ab) <= 1.0 + 1e-12);
    CHECK(cosine_similarity(s(rng) * a, b) == doctest::Approx(ab).epsilon(1e-12));
  }
}

TEST_CASE("column_mean") {
  CHECK(column_mean(columns({{1, 1}, {3, 3}})) == vec({2, 2}));
  CHECK(column_mean(columns({{5, 7}})) == vec({5, 7}));
  CHECK(column_mean(columns({{0, 0}, {0, 0}, {6, 3}})) == vec({2, 1}));
  CHECK_THROWS_AS(column_mean(FeatureMatrix(3, 0)), ArgumentError);
}

TEST_CASE("sample_covariance") {
  CHECK(sample_covariance(columns({{0}, {2}}))(0, 0) == doctest::Approx(2.0));
  CHECK(sample_covariance(columns({{4, 5, 6}, {4, 5, 6}, {4, 5, 6}})).isZero(0.0));
  CHECK(sample_covariance(columns({{4, 5, 6}})).isZero(0.0));

  const FeatureMatrix square = columns({{0, 0}, {2, 0}, {0, 2}, {2, 2}});
  const oracle::Mat expected = oracle::covariance(to_points(square));
  const SquareMatrix cov = sample_covariance(square);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      CHECK(cov(a, b) == doctest::Approx(expected[a][b]).epsilon(1e-12));
    }
  }
  CHECK(cov(0, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(cov(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("sample_covariance is symmetric PSD on random data") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int dims = 1 + t % 6;
    const int n = 1 + t % 9;
    FeatureMatrix m(dims, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = u(rng);
    }
    const SquareMatrix c = sample_covariance(m);
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    for (int p = 0; p < 10; ++p) {
      Eigen::VectorXd probe(dims);
      for (int i = 0; i < dims; ++i) {
        probe(i) = g(rng);
      }
      CHECK(probe.dot(c * probe) >= -1e-9 * (1.0 + c.norm()));
    }
  }
}

TEST_CASE("running moments agree with the two-pass statistics") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  FeatureMatrix m(3, 40);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = u(rng);
  }
  RunningMoments rm(3);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    rm.add(m.col(j));
  }
  CHECK((rm.mean() - column_mean(m)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((rm.covariance() - sample_covariance(m)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(RunningMoments(2).covariance().isZero(0.0));
  CHECK_THROWS_AS(RunningMoments(0), ArgumentError);
}

TEST_CASE("svd_pseudoinverse fixed cases") {
  CHECK(svd_pseudoinverse(Eigen::MatrixXd::Identity(3, 3)).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
  CHECK(svd_pseudoinverse(Eigen::MatrixXd::Zero(3, 3)).isZero(0.0));

  Eigen::MatrixXd rank1(2, 2);
  rank1 << 2, 0, 0, 0;
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0, 0, 0;
  CHECK((svd_pseudoinverse(rank1) - expected).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(svd_pseudoinverse(bad), ArgumentError);
  bad(0, 1) = INFINITY;
  CHECK_THROWS_AS(svd_pseudoinverse(bad), ArgumentError);
}

TEST_CASE("svd_pseudoinverse satisfies the Moore-Penrose conditions") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + t % 6;
    const int rank = t % (n + 1);
    const Eigen::MatrixXd a = random_matrix(rng, n, rank);
    const Eigen::MatrixXd p = svd_pseudoinverse(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double pscale = std::max(1.0, p.cwiseAbs().maxCoeff());
    CAPTURE(n);
    CAPTURE(rank);
    CHECK((a * p * a - a).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    CHECK((p * a * p - p).cwiseAbs().maxCoeff() <= 1e-8 * pscale);
    const Eigen::MatrixXd ap = a * p;
    const Eigen::MatrixXd pa = p * a;
    CHECK((ap - ap.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((pa - pa.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("mahalanobis_sq") {
  CHECK(mahalanobis_sq(vec({0, 0, 0}), Eigen::MatrixXd::Random(3, 3)) == 0.0);
  CHECK(mahalanobis_sq(vec({1, 2, 2}), Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(9.0));
  CHECK_THROWS_AS(mahalanobis_sq(vec({1, 2}), Eigen::MatrixXd::Identity(3, 3)), ArgumentError);

  // Tiny negative values from round-off clamp to zero.
  Eigen::MatrixXd neg = -1e-12 * Eigen::MatrixXd::Identity(1, 1);
  CHECK(mahalanobis_sq(vec({1}), neg) == 0.0);

  const FeatureMatrix pts = columns({{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}});
  const auto inv = oracle::inverse(oracle::covariance(to_points(pts)));
  REQUIRE(inv.has_value());
  const double expected = oracle::quadratic_form({3, 3, 3}, *inv);
  CHECK(expected == doctest::Approx(81.0));
  const double got = mahalanobis_sq(vec({3, 3, 3}), svd_pseudoinverse(sample_covariance(pts)));
  CHECK(got == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("mahalanobis_sq with a PSD pseudoinverse is non-negative") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (int t = 0; t < 200; ++t) {
    FeatureMatrix m(3, 2 + t % 5);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = u(rng);
    }
    const SquareMatrix pinv = svd_pseudoinverse(sample_covariance(m));
    Eigen::VectorXd dev(3);
    for (int i = 0; i < 3; ++i) {
      dev(i) = u(rng) - 128.0;
    }
    CHECK(mahalanobis_sq(dev, pinv) >= 0.0);
  }
}
