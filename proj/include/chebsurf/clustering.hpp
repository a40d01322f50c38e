#pragma once

#include <cstdint>
#include <vector>

#include "chebsurf/image.hpp"
#include "chebsurf/numerics.hpp"
#include "chebsurf/surface_decomposer.hpp"

namespace chebsurf {

struct ClusterParams {
  int k = 5;
  int replicates = 100;
  int max_iterations = 1000;
  std::uint64_t seed = 0;
  /// Worker threads for replicates; 0 picks the hardware concurrency.
  /// The result does not depend on this value.
  int threads = 0;
};

struct ClusterResult {
  std::vector<int> assignments;         ///< one label in [0, k) per column
  std::vector<FeatureVector> centroids;
  double cost = 0.0;                    ///< sum of L1 distances to assigned centroids
  int winning_replicate = 0;
  int iterations = 0;                   ///< iterations used by the winning replicate
};

/// One Lloyd-style run under the L1 metric. The centroid update is the
/// component-wise (lower) median. `cost_history`, when given, receives the
/// cost after every centroid update.
ClusterResult kmeans_l1_single(const Eigen::Ref<const FeatureMatrix>& features, int k,
                               int max_iterations, std::uint64_t rng_seed,
                               std::vector<double>* cost_history = nullptr);

/// Best of `replicates` single runs; replicate r is seeded with seed + r.
/// Ties on cost go to the lowest replicate index.
ClusterResult kmeans_l1(const Eigen::Ref<const FeatureMatrix>& features, const ClusterParams& params);

/// sum_i |x_i - centroid(assignment_i)|_1
double l1_cost(const Eigen::Ref<const FeatureMatrix>& features, const std::vector<int>& assignments,
               const std::vector<FeatureVector>& centroids);

/// Every pixel takes the label of the surface it belongs to.
LabelMap paint_labels(const Decomposition& d, const ClusterResult& r);

}  // namespace chebsurf
