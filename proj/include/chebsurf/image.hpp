#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace chebsurf {

struct PixelLoc {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelLoc&, const PixelLoc&) = default;
};

/// H x W grid of N-dimensional feature vectors, stored row-major with the
/// channels of a pixel contiguous. Values are raw intensities (0-255 scale).
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(int height, int width, int n_features, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  int n_features() const { return n_features_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  bool empty() const { return pixel_count() == 0; }

  double& at(int row, int col, int channel) {
    return data_[offset(row, col) + static_cast<std::size_t>(channel)];
  }
  double at(int row, int col, int channel) const {
    return data_[offset(row, col) + static_cast<std::size_t>(channel)];
  }

  Eigen::Map<const Eigen::VectorXd> pixel(int row, int col) const {
    return {data_.data() + offset(row, col), n_features_};
  }
  Eigen::Map<const Eigen::VectorXd> pixel(PixelLoc loc) const {
    return pixel(loc.row, loc.col);
  }
  void set_pixel(int row, int col, const Eigen::Ref<const Eigen::VectorXd>& value);

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) *
           static_cast<std::size_t>(n_features_);
  }

  int height_ = 0;
  int width_ = 0;
  int n_features_ = 0;
  std::vector<double> data_;
};

/// H x W grid of integer labels (segmentation output).
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int height, int width, int fill = 0);

  int height() const { return height_; }
  int width() const { return width_; }

  int& at(int row, int col) { return labels_[index(row, col)]; }
  int at(int row, int col) const { return labels_[index(row, col)]; }
  int& at(PixelLoc loc) { return at(loc.row, loc.col); }
  int at(PixelLoc loc) const { return at(loc.row, loc.col); }

  const std::vector<int>& labels() const { return labels_; }
  int max_label() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<int> labels_;
};

}  // namespace chebsurf
