#include "chebsurf/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "chebsurf/errors.hpp"

namespace chebsurf {

namespace {

double l1_distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  return (a - b).cwiseAbs().sum();
}

// Lower median: element (n-1)/2 of the sorted values.
double lower_median(std::vector<double>& values) {
  const auto mid = values.begin() + static_cast<long>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

int nearest_centroid(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<FeatureVector>& centroids) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double dist = l1_distance(x, centroids[c]);
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// Moves the point farthest from its centroid into each empty cluster. Only
// points from clusters with more than one member are eligible.
void repair_empty_clusters(const Eigen::Ref<const FeatureMatrix>& x, std::vector<int>& assign,
                           std::vector<FeatureVector>& centroids) {
  const int k = static_cast<int>(centroids.size());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int a : assign) {
    ++sizes[static_cast<std::size_t>(a)];
  }
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) {
      continue;
    }
    Eigen::Index far = -1;
    double far_dist = -1.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      const int a = assign[static_cast<std::size_t>(i)];
      if (sizes[static_cast<std::size_t>(a)] < 2) {
        continue;
      }
      const double dist = l1_distance(x.col(i), centroids[static_cast<std::size_t>(a)]);
      if (dist > far_dist) {
        far_dist = dist;
        far = i;
      }
    }
    // columns >= k guarantees a donor exists
    const int donor = assign[static_cast<std::size_t>(far)];
    --sizes[static_cast<std::size_t>(donor)];
    ++sizes[static_cast<std::size_t>(c)];
    assign[static_cast<std::size_t>(far)] = c;
    centroids[static_cast<std::size_t>(c)] = x.col(far);
  }
}

void update_centroids(const Eigen::Ref<const FeatureMatrix>& x, const std::vector<int>& assign,
                      std::vector<FeatureVector>& centroids) {
  const std::size_t k = centroids.size();
  std::vector<std::vector<Eigen::Index>> members(k);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    members[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])].push_back(i);
  }
  std::vector<double> values;
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c].empty()) {
      continue;
    }
    for (Eigen::Index d = 0; d < x.rows(); ++d) {
      values.clear();
      for (Eigen::Index i : members[c]) {
        values.push_back(x(d, i));
      }
      centroids[c](d) = lower_median(values);
    }
  }
}

void check_inputs(const Eigen::Ref<const FeatureMatrix>& features, int k) {
  if (k < 1) {
    throw ArgumentError("k must be >= 1, got " + std::to_string(k));
  }
  if (features.rows() < 1) {
    throw ArgumentError("features must have at least one dimension");
  }
  if (k > features.cols()) {
    throw ArgumentError("k = " + std::to_string(k) + " exceeds the number of points (" +
                        std::to_string(features.cols()) + ")");
  }
}

}  // namespace

double l1_cost(const Eigen::Ref<const FeatureMatrix>& features, const std::vector<int>& assignments,
               const std::vector<FeatureVector>& centroids) {
  if (assignments.size() != static_cast<std::size_t>(features.cols())) {
    throw ArgumentError("l1_cost: one assignment per column required");
  }
  double cost = 0.0;
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    cost += l1_distance(features.col(i), centroids.at(static_cast<std::size_t>(assignments[static_cast<std::size_t>(i)])));
  }
  return cost;
}

ClusterResult kmeans_l1_single(const Eigen::Ref<const FeatureMatrix>& features, int k,
                               int max_iterations, std::uint64_t rng_seed,
                               std::vector<double>* cost_history) {
  check_inputs(features, k);
  if (max_iterations < 1) {
    throw ArgumentError("max_iterations must be >= 1");
  }
  const Eigen::Index n = features.cols();

  std::mt19937_64 rng(rng_seed);
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  std::vector<Eigen::Index> picks;
  picks.reserve(static_cast<std::size_t>(k));
  std::sample(all.begin(), all.end(), std::back_inserter(picks), k, rng);

  ClusterResult r;
  for (Eigen::Index p : picks) {
    r.centroids.push_back(features.col(p));
  }
  r.assignments.assign(static_cast<std::size_t>(n), -1);

  std::vector<int> next(static_cast<std::size_t>(n));
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      next[static_cast<std::size_t>(i)] = nearest_centroid(features.col(i), r.centroids);
    }
    if (next == r.assignments) {
      break;
    }
    r.assignments = next;
    repair_empty_clusters(features, r.assignments, r.centroids);
    update_centroids(features, r.assignments, r.centroids);
    r.iterations = iter + 1;
    if (cost_history != nullptr) {
      cost_history->push_back(l1_cost(features, r.assignments, r.centroids));
    }
  }
  r.cost = l1_cost(features, r.assignments, r.centroids);
  return r;
}

ClusterResult kmeans_l1(const Eigen::Ref<const FeatureMatrix>& features, const ClusterParams& params) {
  check_inputs(features, params.k);
  if (params.replicates < 1) {
    throw ArgumentError("replicates must be >= 1");
  }
  if (params.max_iterations < 1) {
    throw ArgumentError("max_iterations must be >= 1");
  }

  const auto replicates = static_cast<std::size_t>(params.replicates);
  std::vector<ClusterResult> runs(replicates);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < replicates; r = next++) {
      runs[r] = kmeans_l1_single(features, params.k, params.max_iterations, params.seed + r);
      runs[r].winning_replicate = static_cast<int>(r);
    }
  };

  unsigned threads = params.threads > 0 ? static_cast<unsigned>(params.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(replicates));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < replicates; ++r) {
    if (runs[r].cost < runs[best].cost) {
      best = r;
    }
  }
  return std::move(runs[best]);
}

LabelMap paint_labels(const Decomposition& d, const ClusterResult& r) {
  if (r.assignments.size() != d.surfaces.size()) {
    throw ArgumentError("paint_labels: " + std::to_string(r.assignments.size()) + " assignments for " +
                        std::to_string(d.surfaces.size()) + " surfaces");
  }
  LabelMap labels(d.height, d.width, 0);
  for (std::size_t i = 0; i < d.surfaces.size(); ++i) {
    for (const PixelLoc& p : d.surfaces[i].pixel_locs) {
      labels.at(p) = r.assignments[i];
    }
  }
  return labels;
}

}  // namespace chebsurf
