#include "chebsurf/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "chebsurf/errors.hpp"

namespace chebsurf {

std::size_t BoundaryMap::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

BoundaryMap boundary_map(const LabelMap& labels) {
  BoundaryMap out(labels.height(), labels.width());
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const int v = labels.at(r, c);
      const bool right = c + 1 < labels.width() && labels.at(r, c + 1) != v;
      const bool down = r + 1 < labels.height() && labels.at(r + 1, c) != v;
      out.set(r, c, right || down);
    }
  }
  return out;
}

namespace {

// Boundary pixels of `from` that have a partner in `to` within tol.
std::size_t count_matched(const BoundaryMap& from, const BoundaryMap& to, int tol) {
  const int h = from.height();
  const int w = from.width();
  // Prefix sums over `to` turn each window query into O(1).
  std::vector<long> sums(static_cast<std::size_t>(h + 1) * static_cast<std::size_t>(w + 1), 0);
  const auto at = [&](int r, int c) -> long& {
    return sums[static_cast<std::size_t>(r) * static_cast<std::size_t>(w + 1) + static_cast<std::size_t>(c)];
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      at(r + 1, c + 1) = at(r, c + 1) + at(r + 1, c) - at(r, c) + (to.at(r, c) ? 1 : 0);
    }
  }
  std::size_t matched = 0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!from.at(r, c)) {
        continue;
      }
      const int r0 = std::max(0, r - tol);
      const int r1 = std::min(h, r + tol + 1);
      const int c0 = std::max(0, c - tol);
      const int c1 = std::min(w, c + tol + 1);
      if (at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0) > 0) {
        ++matched;
      }
    }
  }
  return matched;
}

}  // namespace

PRFScore boundary_fscore(const BoundaryMap& pred, const BoundaryMap& truth, int tol_px) {
  if (pred.height() != truth.height() || pred.width() != truth.width()) {
    throw ArgumentError("boundary maps differ in size: " + std::to_string(pred.height()) + "x" +
                        std::to_string(pred.width()) + " vs " + std::to_string(truth.height()) + "x" +
                        std::to_string(truth.width()));
  }
  if (tol_px < 0) {
    throw ArgumentError("tolerance must be non-negative");
  }
  PRFScore s;
  s.pred_count = pred.count();
  s.truth_count = truth.count();
  s.matched_pred = count_matched(pred, truth, tol_px);
  s.matched_truth = count_matched(truth, pred, tol_px);
  s.precision = s.pred_count == 0 ? 1.0 : static_cast<double>(s.matched_pred) / static_cast<double>(s.pred_count);
  s.recall = s.truth_count == 0 ? 1.0 : static_cast<double>(s.matched_truth) / static_cast<double>(s.truth_count);
  s.f_score = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

double pixel_accuracy(const LabelMap& pred, const LabelMap& truth) {
  if (pred.height() != truth.height() || pred.width() != truth.width()) {
    throw ArgumentError("label maps differ in size");
  }
  const std::size_t n = pred.labels().size();
  if (n == 0) {
    return 1.0;
  }
  // Greedy matching on the confusion table, largest overlaps first.
  std::map<std::pair<int, int>, std::size_t> overlap;
  for (std::size_t i = 0; i < n; ++i) {
    ++overlap[{pred.labels()[i], truth.labels()[i]}];
  }
  std::vector<std::pair<std::size_t, std::pair<int, int>>> cells;
  for (const auto& [key, count] : overlap) {
    cells.push_back({count, key});
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::map<int, int> used_pred;
  std::map<int, int> used_truth;
  std::size_t correct = 0;
  for (const auto& [count, key] : cells) {
    if (used_pred.count(key.first) || used_truth.count(key.second)) {
      continue;
    }
    used_pred[key.first] = key.second;
    used_truth[key.second] = key.first;
    correct += count;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace chebsurf
