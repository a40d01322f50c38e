#include "chebsurf/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <type_traits>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "chebsurf/errors.hpp"
#include "chebsurf/image_io.hpp"

namespace chebsurf {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

template <typename Fn>
auto run_stage(const char* stage, std::vector<StageTiming>& timings, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    timings.push_back({stage, elapsed.count()});
  };
  const std::string prefix = std::string(stage) + ": ";
  try {
    if constexpr (std::is_void_v<std::invoke_result_t<Fn>>) {
      fn();
      record();
    } else {
      auto result = fn();
      record();
      return result;
    }
  } catch (const ArgumentError& e) {
    throw ArgumentError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const CapacityError& e) {
    throw CapacityError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  }
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json bounds_json(const BoundReport& r) {
  ordered_json j;
  j["n_features"] = r.n_features;
  j["epsilon"] = optional_number(r.epsilon);
  j["m_pixels"] = r.m_pixels;
  j["tail_bound"] = optional_number(r.tail_bound);
  j["lower_bound"] = optional_number(r.lower_bound);
  j["expected_surfaces"] = optional_number(r.expected_surfaces);
  j["equal_likelihood_pixels"] = optional_number(r.equal_likelihood_pixels);
  j["epsilon_interval"] = r.epsilon_interval
                              ? ordered_json::array({r.epsilon_interval->first, r.epsilon_interval->second})
                              : ordered_json(nullptr);
  j["max_order"] = r.max_order;
  j["epsilon_out_of_range"] = r.epsilon_out_of_range;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text)) {
    throw IoError("cannot write '" + path.string() + "'");
  }
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.input.empty()) {
    throw ArgumentError("no input image given");
  }
  if (!config.out_labels && !config.out_overlay && !config.out_json && !config.out_report) {
    throw ArgumentError("no output requested");
  }
  if (config.out_labels && !config.cluster) {
    throw ArgumentError("a label map needs clustering parameters");
  }
  validate(config.decompose);
  if (config.cluster) {
    if (config.cluster->k < 1 || config.cluster->k > 256) {
      throw ArgumentError("cluster count must lie in [1, 256], got " + std::to_string(config.cluster->k));
    }
    if (config.cluster->replicates < 1 || config.cluster->max_iterations < 1) {
      throw ArgumentError("replicates and iterations must be >= 1");
    }
  }
}

SegmentOutput segment_image(const ImageTensor& image, const DecomposeParams& decompose_params,
                            const std::optional<ClusterParams>& cluster) {
  SegmentOutput out;
  SegmentReport& rep = out.report;
  out.decomposition = run_stage("decompose", rep.timings, [&] { return decompose(image, decompose_params); });

  rep.height = image.height();
  rep.width = image.width();
  rep.n_features = image.n_features();
  rep.pixel_count = image.pixel_count();
  rep.surface_count = out.decomposition.surfaces.size();
  rep.reduction_factor = static_cast<double>(rep.pixel_count) / static_cast<double>(rep.surface_count);
  rep.bounds = make_bound_report(rep.n_features, static_cast<long>(rep.pixel_count), decompose_params.epsilon);
  if (rep.bounds.epsilon_out_of_range) {
    rep.warnings.push_back("epsilon outside the interval (N, M)");
    spdlog::warn("epsilon {} lies outside (N, M) = ({}, {})", decompose_params.epsilon, rep.n_features,
                 rep.pixel_count);
  }

  if (cluster) {
    const FeatureMatrix features = surface_features(out.decomposition);
    if (cluster->k > features.cols()) {
      throw ArgumentError("cluster: k = " + std::to_string(cluster->k) + " exceeds the surface count " +
                          std::to_string(features.cols()));
    }
    rep.cluster = run_stage("cluster", rep.timings, [&] { return kmeans_l1(features, *cluster); });
    out.labels = run_stage("paint", rep.timings, [&] { return paint_labels(out.decomposition, *rep.cluster); });
  }
  spdlog::info("{} pixels -> {} surfaces (reduction {:.2f})", rep.pixel_count, rep.surface_count,
               rep.reduction_factor);
  return out;
}

SegmentOutput run_segment(const RunConfig& config) {
  validate(config);
  std::vector<StageTiming> load_timing;
  const ImageTensor image = run_stage("load", load_timing, [&] { return load_image(config.input); });

  SegmentOutput out = segment_image(image, config.decompose, config.cluster);
  SegmentReport& rep = out.report;
  rep.input = config.input.string();
  rep.timings.insert(rep.timings.begin(), load_timing.begin(), load_timing.end());

  run_stage("write", rep.timings, [&] {
    if (config.out_labels) {
      write_label_map(*out.labels, *config.out_labels);
    }
    if (config.out_overlay) {
      write_surface_overlay(out.decomposition, *config.out_overlay);
    }
    if (config.out_json) {
      export_decomposition(out.decomposition, *config.out_json);
    }
  });
  if (config.out_report) {
    run_stage("report", rep.timings, [&] { write_text(*config.out_report, to_json(rep)); });
  }
  return out;
}

std::string to_json(const BoundReport& report) { return bounds_json(report).dump(2) + "\n"; }

std::string to_json(const PRFScore& score) {
  ordered_json j;
  j["precision"] = score.precision;
  j["recall"] = score.recall;
  j["f_score"] = score.f_score;
  j["matched_pred"] = score.matched_pred;
  j["pred_count"] = score.pred_count;
  j["matched_truth"] = score.matched_truth;
  j["truth_count"] = score.truth_count;
  return j.dump(2) + "\n";
}

std::string to_json(const SegmentReport& report) {
  ordered_json j;
  j["input"] = report.input;
  j["height"] = report.height;
  j["width"] = report.width;
  j["n_features"] = report.n_features;
  j["pixel_count"] = report.pixel_count;
  j["surface_count"] = report.surface_count;
  j["reduction_factor"] = report.reduction_factor;
  j["bounds"] = bounds_json(report.bounds);
  if (report.cluster) {
    ordered_json c;
    c["k"] = report.cluster->centroids.size();
    c["cost"] = report.cluster->cost;
    c["winning_replicate"] = report.cluster->winning_replicate;
    c["iterations"] = report.cluster->iterations;
    j["cluster"] = c;
  } else {
    j["cluster"] = nullptr;
  }
  ordered_json t = ordered_json::object();
  for (const StageTiming& s : report.timings) {
    t[s.stage] = s.milliseconds;
  }
  j["timings_ms"] = t;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

}  // namespace chebsurf
