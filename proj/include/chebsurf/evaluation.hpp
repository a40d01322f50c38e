#pragma once

#include <cstdint>
#include <vector>

#include "chebsurf/image.hpp"

namespace chebsurf {

class BoundaryMap {
 public:
  BoundaryMap() = default;
  BoundaryMap(int height, int width) : height_(height), width_(width),
      cells_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0) {}

  int height() const { return height_; }
  int width() const { return width_; }
  bool at(int row, int col) const { return cells_[index(row, col)] != 0; }
  void set(int row, int col, bool value) { cells_[index(row, col)] = value ? 1 : 0; }
  std::size_t count() const;

  friend bool operator==(const BoundaryMap&, const BoundaryMap&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct PRFScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  std::size_t matched_pred = 0;
  std::size_t pred_count = 0;
  std::size_t matched_truth = 0;
  std::size_t truth_count = 0;
};

/// A pixel is a boundary iff its right or lower neighbour exists and
/// carries a different label.
BoundaryMap boundary_map(const LabelMap& labels);

/// Tolerance matching: a predicted boundary pixel is matched when a truth
/// boundary pixel lies within Chebyshev distance tol_px, and vice versa for
/// recall. An empty side scores 1 on its own ratio.
PRFScore boundary_fscore(const BoundaryMap& pred, const BoundaryMap& truth, int tol_px);

/// Fraction of pixels whose predicted label equals the truth after a
/// one-to-one relabelling of the predicted labels, matched greedily by
/// largest overlap. Exact for two labels.
double pixel_accuracy(const LabelMap& pred, const LabelMap& truth);

}  // namespace chebsurf
