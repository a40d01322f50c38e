#include "chebsurf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "chebsurf/errors.hpp"

namespace chebsurf {

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kConstant:       return "constant";
    case SyntheticKind::kHalfSplit:      return "half_split";
    case SyntheticKind::kQuad:           return "quad";
    case SyntheticKind::kNoisyGradient:  return "noisy_gradient";
    case SyntheticKind::kTwoRegionCurve: return "two_region_curve";
  }
  return "constant";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  for (auto kind : {SyntheticKind::kConstant, SyntheticKind::kHalfSplit, SyntheticKind::kQuad,
                    SyntheticKind::kNoisyGradient, SyntheticKind::kTwoRegionCurve}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw ArgumentError("unknown synthetic kind '" + std::string(name) +
                      "' (expected constant, half_split, quad, noisy_gradient or two_region_curve)");
}

namespace {

// Noise is drawn from a fixed-size Box-Muller transform over raw 64-bit
// words so the output does not depend on the standard library's
// distribution implementations.
class Noise {
 public:
  explicit Noise(std::uint64_t seed) : rng_(seed) {}

  double gaussian() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

double quantize(double v) { return std::clamp(std::round(v), 0.0, 255.0); }

void fill(SyntheticImage& out, int r, int c, double red, double green, double blue) {
  out.image.at(r, c, 0) = quantize(red);
  out.image.at(r, c, 1) = quantize(green);
  out.image.at(r, c, 2) = quantize(blue);
}

}  // namespace

SyntheticImage make_synthetic(SyntheticKind kind, int size, std::uint64_t seed) {
  if (size < 2) {
    throw ArgumentError("synthetic image size must be >= 2, got " + std::to_string(size));
  }
  SyntheticImage out{ImageTensor(size, size, 3), LabelMap(size, size, 0)};
  Noise noise(seed);
  const double span = static_cast<double>(size - 1);
  const int half = size / 2;

  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      switch (kind) {
        case SyntheticKind::kConstant:
          fill(out, r, c, 100, 100, 100);
          break;
        case SyntheticKind::kHalfSplit:
          if (c < half) {
            fill(out, r, c, 50, 50, 50);
          } else {
            fill(out, r, c, 200, 50, 50);
            out.truth.at(r, c) = 1;
          }
          break;
        case SyntheticKind::kQuad: {
          const int q = (r < half ? 0 : 2) + (c < half ? 0 : 1);
          static constexpr double kColors[4][3] = {
              {200, 50, 50}, {50, 200, 50}, {50, 50, 200}, {200, 200, 50}};
          fill(out, r, c, kColors[q][0], kColors[q][1], kColors[q][2]);
          out.truth.at(r, c) = q;
          break;
        }
        case SyntheticKind::kNoisyGradient: {
          const double x = c / span;
          const double y = r / span;
          fill(out, r, c, 40 + 150 * x + 6 * noise.gaussian(), 40 + 150 * y + 6 * noise.gaussian(),
               120 + 60 * (x - y) + 6 * noise.gaussian());
          break;
        }
        case SyntheticKind::kTwoRegionCurve: {
          const double boundary = span * (0.5 + 0.2 * std::sin(2.0 * std::numbers::pi * c / span));
          if (r < boundary) {
            fill(out, r, c, 60 + 4 * noise.gaussian(), 120 + 4 * noise.gaussian(), 60 + 4 * noise.gaussian());
          } else {
            fill(out, r, c, 200 + 4 * noise.gaussian(), 80 + 4 * noise.gaussian(), 160 + 4 * noise.gaussian());
            out.truth.at(r, c) = 1;
          }
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace chebsurf
