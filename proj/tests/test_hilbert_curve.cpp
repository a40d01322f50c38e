#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <set>

#include "chebsurf/errors.hpp"
#include "chebsurf/hilbert_curve.hpp"

using namespace chebsurf;

namespace {

int manhattan(PixelLoc a, PixelLoc b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

// Relative order of `sub` matches `parent`.
bool is_subsequence(const CurveCoords& sub, const CurveCoords& parent) {
  std::size_t j = 0;
  for (const PixelLoc& p : parent) {
    if (j < sub.size() && sub[j] == p) {
      ++j;
    }
  }
  return j == sub.size();
}

}  // namespace

TEST_CASE("order 1 is the canonical U shape") {
  const CurveCoords expected = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(generate_curve(1) == expected);
}

TEST_CASE("curves are unit-step bijections onto the grid") {
  for (int order = 1; order <= 6; ++order) {
    CAPTURE(order);
    const CurveCoords curve = generate_curve(order);
    const int side = 1 << order;
    REQUIRE(curve.size() == static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
    std::vector<char> seen(curve.size(), 0);
    for (const PixelLoc& p : curve) {
      REQUIRE(p.row >= 0);
      REQUIRE(p.row < side);
      REQUIRE(p.col >= 0);
      REQUIRE(p.col < side);
      char& s = seen[static_cast<std::size_t>(p.row * side + p.col)];
      REQUIRE(s == 0);
      s = 1;
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
      REQUIRE(manhattan(curve[i - 1], curve[i]) == 1);
    }
    CHECK(curve.front() == PixelLoc{0, 0});
    CHECK(curve.back() == PixelLoc{0, side - 1});
  }
}

TEST_CASE("each quarter of the curve fills one quadrant") {
  for (int order = 2; order <= 6; ++order) {
    const CurveCoords curve = generate_curve(order);
    const int half = 1 << (order - 1);
    const std::size_t quarter = curve.size() / 4;
    for (std::size_t q = 0; q < 4; ++q) {
      const int qr = curve[q * quarter].row / half;
      const int qc = curve[q * quarter].col / half;
      for (std::size_t i = q * quarter; i < (q + 1) * quarter; ++i) {
        REQUIRE(curve[i].row / half == qr);
        REQUIRE(curve[i].col / half == qc);
      }
    }
  }
}

TEST_CASE("order bounds") {
  CHECK_THROWS_AS(generate_curve(0), ArgumentError);
  CHECK_THROWS_AS(generate_curve(kMaxCurveOrder + 1), CapacityError);
  const std::uint64_t last = (std::uint64_t{1} << (2 * kMaxCurveOrder)) - 1;
  CHECK(hilbert_index_to_cell(kMaxCurveOrder, last) == PixelLoc{0, (1 << kMaxCurveOrder) - 1});
}

TEST_CASE("curve_for_image") {
  SUBCASE("power-of-two square equals the full curve") {
    CHECK(curve_for_image(4, 4) == generate_curve(2));
  }
  SUBCASE("single pixel") {
    CHECK(curve_for_image(1, 1) == CurveCoords{{0, 0}});
  }
  SUBCASE("3x5 is the in-bounds part of the order-3 curve") {
    CurveCoords expected;
    for (const PixelLoc& p : generate_curve(3)) {
      if (p.row < 3 && p.col < 5) {
        expected.push_back(p);
      }
    }
    const CurveCoords curve = curve_for_image(3, 5);
    CHECK(curve.size() == 15);
    CHECK(curve == expected);
  }
  SUBCASE("zero dimension") {
    CHECK_THROWS_AS(curve_for_image(0, 3), ArgumentError);
    CHECK_THROWS_AS(curve_for_image(3, 0), ArgumentError);
  }
}

TEST_CASE("curve_for_image covers every rectangle up to 32x32") {
  for (int h = 1; h <= 32; ++h) {
    for (int w = 1; w <= 32; ++w) {
      const CurveCoords curve = curve_for_image(h, w);
      REQUIRE(curve.size() == static_cast<std::size_t>(h * w));
      std::set<std::pair<int, int>> cells;
      for (const PixelLoc& p : curve) {
        REQUIRE(p.row < h);
        REQUIRE(p.col < w);
        cells.insert({p.row, p.col});
      }
      REQUIRE(cells.size() == curve.size());
      if ((h % 7 == 0) || (w % 5 == 0)) {
        REQUIRE(is_subsequence(curve, generate_curve(curve_order_for(h, w))));
      }
    }
  }
}
