#pragma once

#include <vector>

#include "chebsurf/image.hpp"

namespace chebsurf {

using CurveCoords = std::vector<PixelLoc>;

/// Largest supported recursion depth (grid side 2^15).
inline constexpr int kMaxCurveOrder = 15;

/// Maps a curve index in [0, 4^order) to its grid cell. The canonical
/// orientation starts at (0,0), steps down the rows first, and ends at
/// (0, 2^order - 1).
PixelLoc hilbert_index_to_cell(int order, std::uint64_t index);

/// All 4^order cells of the 2^order x 2^order grid in curve order.
/// Throws ArgumentError for order < 1, CapacityError above kMaxCurveOrder.
CurveCoords generate_curve(int order);

/// Smallest order whose grid covers a height x width image (at least 1).
int curve_order_for(int height, int width);

/// Curve for a rectangular image: the covering power-of-two curve with
/// out-of-bounds cells removed, relative order preserved.
CurveCoords curve_for_image(int height, int width);

}  // namespace chebsurf
