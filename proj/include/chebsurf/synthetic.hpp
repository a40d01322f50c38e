#pragma once

#include <cstdint>
#include <string_view>

#include "chebsurf/image.hpp"

namespace chebsurf {

enum class SyntheticKind { kConstant, kHalfSplit, kQuad, kNoisyGradient, kTwoRegionCurve };

std::string_view to_string(SyntheticKind kind);
SyntheticKind parse_synthetic_kind(std::string_view name);

struct SyntheticImage {
  ImageTensor image;  ///< size x size x 3, integer-valued intensities
  LabelMap truth;     ///< generating regions
};

/// Deterministic test images:
///   constant          every pixel [100, 100, 100]
///   half_split        left half [50, 50, 50], right half [200, 50, 50]
///   quad              four quadrants of clearly different hue
///   noisy_gradient    smooth positive RGB ramp plus seeded noise, one region
///   two_region_curve  a sinusoidal boundary between two noisy colours
/// Throws ArgumentError for size < 2.
SyntheticImage make_synthetic(SyntheticKind kind, int size, std::uint64_t seed = 0);

}  // namespace chebsurf
