#include <doctest.h>

#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "chebsurf/errors.hpp"
#include "chebsurf/image_io.hpp"
#include "chebsurf/pipeline.hpp"
#include "chebsurf/synthetic.hpp"
#include "temp_dir.hpp"

using namespace chebsurf;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

BoundaryMap vertical_line(int h, int w, int col) {
  BoundaryMap b(h, w);
  for (int r = 0; r < h; ++r) {
    b.set(r, col, true);
  }
  return b;
}

// Direct O(n^2) evaluation of the tolerance matcher.
std::size_t matched_brute(const BoundaryMap& from, const BoundaryMap& to, int tol) {
  std::size_t matched = 0;
  for (int r = 0; r < from.height(); ++r) {
    for (int c = 0; c < from.width(); ++c) {
      if (!from.at(r, c)) {
        continue;
      }
      bool found = false;
      for (int r2 = 0; r2 < to.height() && !found; ++r2) {
        for (int c2 = 0; c2 < to.width() && !found; ++c2) {
          found = to.at(r2, c2) && std::abs(r - r2) <= tol && std::abs(c - c2) <= tol;
        }
      }
      matched += found ? 1 : 0;
    }
  }
  return matched;
}

RunConfig segment_config(const fs::path& input, int k) {
  RunConfig cfg;
  cfg.input = input;
  cfg.decompose.epsilon = 4.0;
  cfg.decompose.npar = 0.95;
  ClusterParams cp;
  cp.k = k;
  cp.replicates = 10;
  cp.max_iterations = 1000;
  cp.seed = 7;
  cfg.cluster = cp;
  return cfg;
}

}  // namespace

TEST_CASE("boundary_map") {
  CHECK(boundary_map(LabelMap(5, 5, 2)).count() == 0);

  LabelMap split(3, 4, 0);
  for (int r = 0; r < 3; ++r) {
    split.at(r, 2) = 1;
    split.at(r, 3) = 1;
  }
  CHECK(boundary_map(split) == vertical_line(3, 4, 1));

  LabelMap checker(2, 2, 0);
  checker.at(0, 1) = 1;
  checker.at(1, 0) = 1;
  const BoundaryMap b = boundary_map(checker);
  CHECK(b.count() == 3);
  CHECK_FALSE(b.at(1, 1));
}

TEST_CASE("boundary_fscore") {
  const BoundaryMap line = vertical_line(20, 20, 10);
  SUBCASE("identical maps") {
    for (int tol : {0, 1, 3}) {
      const PRFScore s = boundary_fscore(line, line, tol);
      CHECK(s.precision == 1.0);
      CHECK(s.recall == 1.0);
      CHECK(s.f_score == 1.0);
    }
  }
  SUBCASE("empty prediction") {
    const PRFScore s = boundary_fscore(BoundaryMap(20, 20), line, 2);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f_score == 0.0);
  }
  SUBCASE("both empty") {
    const PRFScore s = boundary_fscore(BoundaryMap(4, 4), BoundaryMap(4, 4), 0);
    CHECK(s.f_score == 1.0);
  }
  SUBCASE("shifted line") {
    const BoundaryMap shifted = vertical_line(20, 20, 11);
    CHECK(boundary_fscore(shifted, line, 2).f_score == 1.0);
    CHECK(boundary_fscore(shifted, line, 1).f_score == 1.0);
    CHECK(boundary_fscore(shifted, line, 0).f_score == 0.0);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(boundary_fscore(BoundaryMap(3, 3), BoundaryMap(3, 4), 1), ArgumentError);
    CHECK_THROWS_AS(boundary_fscore(line, line, -1), ArgumentError);
  }
}

TEST_CASE("boundary_fscore agrees with brute force and is symmetric") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const int h = 2 + static_cast<int>(rng() % 15);
    const int w = 2 + static_cast<int>(rng() % 15);
    BoundaryMap a(h, w), b(h, w);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        a.set(r, c, rng() % 5 == 0);
        b.set(r, c, rng() % 7 == 0);
      }
    }
    const int tol = static_cast<int>(rng() % 3);
    const PRFScore ab = boundary_fscore(a, b, tol);
    const PRFScore ba = boundary_fscore(b, a, tol);
    CHECK(ab.matched_pred == matched_brute(a, b, tol));
    CHECK(ab.matched_truth == matched_brute(b, a, tol));
    CHECK(ab.precision == ba.recall);
    CHECK(ab.recall == ba.precision);
    CHECK(ab.f_score == doctest::Approx(ba.f_score));
  }
}

TEST_CASE("pixel_accuracy is permutation invariant") {
  const LabelMap truth = make_synthetic(SyntheticKind::kHalfSplit, 8).truth;
  LabelMap swapped = truth;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      swapped.at(r, c) = 5 - 4 * truth.at(r, c);
    }
  }
  CHECK(pixel_accuracy(swapped, truth) == 1.0);
  CHECK(pixel_accuracy(LabelMap(8, 8, 0), truth) == 0.5);
}

TEST_CASE("synthetic images") {
  const SyntheticImage constant = make_synthetic(SyntheticKind::kConstant, 8);
  CHECK(constant.truth == LabelMap(8, 8, 0));
  CHECK(constant.image == ImageTensor(8, 8, 3, 100.0));

  const SyntheticImage split = make_synthetic(SyntheticKind::kHalfSplit, 8);
  CHECK(split.image.pixel(3, 3) == Eigen::Vector3d(50, 50, 50));
  CHECK(split.image.pixel(3, 4) == Eigen::Vector3d(200, 50, 50));
  CHECK(split.truth.at(0, 3) == 0);
  CHECK(split.truth.at(0, 4) == 1);

  TempDir tmp;
  write_image_png(make_synthetic(SyntheticKind::kNoisyGradient, 64, 7).image, tmp / "a.png");
  write_image_png(make_synthetic(SyntheticKind::kNoisyGradient, 64, 7).image, tmp / "b.png");
  CHECK(read_bytes(tmp / "a.png") == read_bytes(tmp / "b.png"));
  CHECK_FALSE(make_synthetic(SyntheticKind::kNoisyGradient, 16, 1).image ==
              make_synthetic(SyntheticKind::kNoisyGradient, 16, 2).image);

  const SyntheticImage quad = make_synthetic(SyntheticKind::kQuad, 10);
  CHECK(quad.truth.max_label() == 3);
  CHECK(make_synthetic(SyntheticKind::kTwoRegionCurve, 32, 1).truth.max_label() == 1);

  CHECK_THROWS_AS(make_synthetic(SyntheticKind::kConstant, 1), ArgumentError);
  CHECK(parse_synthetic_kind("two_region_curve") == SyntheticKind::kTwoRegionCurve);
  CHECK_THROWS_AS(parse_synthetic_kind("stripes"), ArgumentError);
}

TEST_CASE("run_segment") {
  TempDir tmp;
  SUBCASE("constant image") {
    write_image_png(make_synthetic(SyntheticKind::kConstant, 64).image, tmp / "c.png");
    RunConfig cfg = segment_config(tmp / "c.png", 1);
    cfg.out_labels = tmp / "labels.png";
    const SegmentOutput out = run_segment(cfg);
    CHECK(out.report.surface_count == 1);
    CHECK(out.report.reduction_factor == 4096.0);
    CHECK(load_label_map(tmp / "labels.png") == LabelMap(64, 64, 0));
  }
  SUBCASE("half split recovers the halves") {
    const SyntheticImage s = make_synthetic(SyntheticKind::kHalfSplit, 64);
    write_image_png(s.image, tmp / "h.png");
    RunConfig cfg = segment_config(tmp / "h.png", 2);
    cfg.out_labels = tmp / "labels.png";
    run_segment(cfg);
    CHECK(pixel_accuracy(load_label_map(tmp / "labels.png"), s.truth) == 1.0);
  }
  SUBCASE("artifacts are byte-identical across runs") {
    write_image_png(make_synthetic(SyntheticKind::kTwoRegionCurve, 48, 3).image, tmp / "t.png");
    for (const char* tag : {"1", "2"}) {
      RunConfig cfg = segment_config(tmp / "t.png", 3);
      cfg.out_labels = tmp / (std::string("l") + tag + ".png");
      cfg.out_overlay = tmp / (std::string("o") + tag + ".png");
      cfg.out_json = tmp / (std::string("d") + tag + ".json");
      run_segment(cfg);
    }
    CHECK(read_bytes(tmp / "l1.png") == read_bytes(tmp / "l2.png"));
    CHECK(read_bytes(tmp / "o1.png") == read_bytes(tmp / "o2.png"));
    CHECK(read_bytes(tmp / "d1.json") == read_bytes(tmp / "d2.json"));
  }
  SUBCASE("report") {
    write_image_png(make_synthetic(SyntheticKind::kQuad, 32).image, tmp / "q.png");
    RunConfig cfg = segment_config(tmp / "q.png", 4);
    cfg.out_labels = tmp / "labels.png";
    cfg.out_report = tmp / "report.json";
    const SegmentOutput out = run_segment(cfg);
    CHECK(out.report.surface_count <= 32 * 32);
    const std::string text = read_bytes(tmp / "report.json");
    CHECK(text.find("\"reduction_factor\"") != std::string::npos);
    CHECK(text.find("\"expected_surfaces\": 256.0") != std::string::npos);
    std::vector<std::string> stages;
    for (const StageTiming& t : out.report.timings) {
      stages.push_back(t.stage);
    }
    CHECK(stages == std::vector<std::string>{"load", "decompose", "cluster", "paint", "write", "report"});
  }
  SUBCASE("decompose only") {
    write_image_png(make_synthetic(SyntheticKind::kHalfSplit, 16).image, tmp / "h.png");
    RunConfig cfg = segment_config(tmp / "h.png", 2);
    cfg.cluster.reset();
    cfg.out_json = tmp / "d.json";
    const SegmentOutput out = run_segment(cfg);
    CHECK_FALSE(out.labels.has_value());
    CHECK(import_decomposition(tmp / "d.json").surfaces.size() == 2);
  }
  SUBCASE("missing input names the load stage") {
    RunConfig cfg = segment_config(tmp / "nope.png", 2);
    cfg.out_labels = tmp / "labels.png";
    try {
      run_segment(cfg);
      FAIL("expected an IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).rfind("load: ", 0) == 0);
    }
  }
  SUBCASE("config errors") {
    RunConfig cfg = segment_config(tmp / "x.png", 2);
    CHECK_THROWS_AS(run_segment(cfg), ArgumentError);  // no outputs
    cfg.out_labels = tmp / "l.png";
    cfg.cluster.reset();
    CHECK_THROWS_AS(run_segment(cfg), ArgumentError);  // labels without clustering
    cfg = segment_config(tmp / "x.png", 300);
    cfg.out_labels = tmp / "l.png";
    CHECK_THROWS_AS(run_segment(cfg), ArgumentError);
  }
  SUBCASE("k above the surface count") {
    write_image_png(make_synthetic(SyntheticKind::kConstant, 8).image, tmp / "c.png");
    RunConfig cfg = segment_config(tmp / "c.png", 2);
    cfg.out_labels = tmp / "labels.png";
    CHECK_THROWS_AS(run_segment(cfg), ArgumentError);
  }
}
