#include "chebsurf/hilbert_curve.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "chebsurf/errors.hpp"

namespace chebsurf {

namespace {

void check_order(int order) {
  if (order < 1) {
    throw ArgumentError("curve order must be >= 1, got " + std::to_string(order));
  }
  if (order > kMaxCurveOrder) {
    throw CapacityError("curve order " + std::to_string(order) + " exceeds the supported maximum " +
                        std::to_string(kMaxCurveOrder));
  }
}

}  // namespace

PixelLoc hilbert_index_to_cell(int order, std::uint64_t index) {
  check_order(order);
  const std::uint64_t side = std::uint64_t{1} << order;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t t = index;
  for (std::uint64_t s = 1; s < side; s *= 2) {
    const std::uint64_t rx = 1 & (t / 2);
    const std::uint64_t ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  // x runs along columns, y along rows.
  return {static_cast<int>(y), static_cast<int>(x)};
}

CurveCoords generate_curve(int order) {
  check_order(order);
  const std::uint64_t count = std::uint64_t{1} << (2 * order);
  CurveCoords points;
  points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    points.push_back(hilbert_index_to_cell(order, i));
  }
  return points;
}

int curve_order_for(int height, int width) {
  if (height < 1 || width < 1) {
    throw ArgumentError("image dimensions must be positive, got " + std::to_string(height) + "x" +
                        std::to_string(width));
  }
  const auto side = static_cast<unsigned>(std::max(height, width));
  const int order = std::bit_width(side - 1);
  return std::max(order, 1);
}

CurveCoords curve_for_image(int height, int width) {
  const int order = curve_order_for(height, width);
  check_order(order);
  const std::uint64_t count = std::uint64_t{1} << (2 * order);
  CurveCoords points;
  points.reserve(static_cast<std::size_t>(height) * static_cast<std::size_t>(width));
  for (std::uint64_t i = 0; i < count; ++i) {
    const PixelLoc cell = hilbert_index_to_cell(order, i);
    if (cell.row < height && cell.col < width) {
      points.push_back(cell);
    }
  }
  return points;
}

}  // namespace chebsurf
