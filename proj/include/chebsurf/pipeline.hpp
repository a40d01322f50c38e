#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chebsurf/clustering.hpp"
#include "chebsurf/evaluation.hpp"
#include "chebsurf/surface_decomposer.hpp"
#include "chebsurf/theory_bounds.hpp"

namespace chebsurf {

struct RunConfig {
  std::filesystem::path input;
  DecomposeParams decompose;
  std::optional<ClusterParams> cluster;  ///< absent: decompose only
  std::optional<std::filesystem::path> out_labels;
  std::optional<std::filesystem::path> out_overlay;
  std::optional<std::filesystem::path> out_json;
  std::optional<std::filesystem::path> out_report;
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct SegmentReport {
  std::string input;
  int height = 0;
  int width = 0;
  int n_features = 0;
  std::size_t pixel_count = 0;
  std::size_t surface_count = 0;
  double reduction_factor = 0.0;  ///< pixels per surface, M / l
  BoundReport bounds;
  std::optional<ClusterResult> cluster;
  std::vector<StageTiming> timings;
  std::vector<std::string> warnings;
};

struct SegmentOutput {
  Decomposition decomposition;
  std::optional<LabelMap> labels;
  SegmentReport report;
};

/// Checks the config shape: an input path, at least one output, labels
/// requested iff clustering is requested, valid parameters.
void validate(const RunConfig& config);

/// load -> decompose -> (cluster -> paint) -> write. Errors carry the name of
/// the failing stage as a prefix and keep their original type.
SegmentOutput run_segment(const RunConfig& config);

/// Same pipeline on an in-memory image; nothing is loaded or written.
SegmentOutput segment_image(const ImageTensor& image, const DecomposeParams& decompose,
                            const std::optional<ClusterParams>& cluster);

std::string to_json(const BoundReport& report);
std::string to_json(const PRFScore& score);
std::string to_json(const SegmentReport& report);

}  // namespace chebsurf
