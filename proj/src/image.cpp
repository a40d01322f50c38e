#include "chebsurf/image.hpp"

#include <algorithm>
#include <string>

#include "chebsurf/errors.hpp"

namespace chebsurf {

ImageTensor::ImageTensor(int height, int width, int n_features, double fill)
    : height_(height), width_(width), n_features_(n_features) {
  if (height < 0 || width < 0 || n_features < 1) {
    throw ArgumentError("invalid image shape " + std::to_string(height) + "x" +
                        std::to_string(width) + "x" + std::to_string(n_features));
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(n_features), fill);
}

void ImageTensor::set_pixel(int row, int col, const Eigen::Ref<const Eigen::VectorXd>& value) {
  if (value.size() != n_features_) {
    throw ArgumentError("pixel value has " + std::to_string(value.size()) + " components, expected " +
                        std::to_string(n_features_));
  }
  std::copy(value.data(), value.data() + n_features_, data_.begin() + static_cast<long>(offset(row, col)));
}

LabelMap::LabelMap(int height, int width, int fill) : height_(height), width_(width) {
  if (height < 0 || width < 0) {
    throw ArgumentError("invalid label map shape " + std::to_string(height) + "x" +
                        std::to_string(width));
  }
  labels_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

int LabelMap::max_label() const {
  if (labels_.empty()) {
    return -1;
  }
  return *std::max_element(labels_.begin(), labels_.end());
}

}  // namespace chebsurf
