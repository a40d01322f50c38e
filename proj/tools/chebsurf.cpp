// chebsurf: decompose images into Chebyshev-bounded surfaces along a Hilbert
// curve and segment them by L1 k-means.
//
// Exit codes: 0 success, 2 argument error, 3 I/O error, 4 invariant violation.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "chebsurf/errors.hpp"
#include "chebsurf/hilbert_curve.hpp"
#include "chebsurf/image_io.hpp"
#include "chebsurf/pipeline.hpp"
#include "chebsurf/synthetic.hpp"

namespace fs = std::filesystem;
using namespace chebsurf;

namespace {

constexpr int kExitArgument = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvariant = 4;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("chebsurf");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CHEBSURF_LOG")) {
    static const std::map<std::string, spdlog::level::level_enum> kLevels = {
        {"error", spdlog::level::err},
        {"warn", spdlog::level::warn},
        {"info", spdlog::level::info},
        {"debug", spdlog::level::debug}};
    if (auto it = kLevels.find(env); it != kLevels.end()) {
      spdlog::set_level(it->second);
    } else {
      spdlog::warn("ignoring CHEBSURF_LOG='{}' (expected error, warn, info or debug)", env);
    }
  }
}

struct DecomposeOptions {
  std::string input;
  double epsilon = 0.0;
  double npar = 0.0;
  std::string formulation = "multivariate";
  bool strict_paper = false;
  double zero_variance_tol = 1e-9;
  double zero_variance_abs_tol = 1e-6;

  DecomposeParams params() const {
    DecomposeParams p;
    p.epsilon = epsilon;
    p.npar = npar;
    p.formulation = parse_formulation(formulation);
    p.degenerate_fallback = !strict_paper;
    p.zero_variance_tol = zero_variance_tol;
    p.zero_variance_abs_tol = zero_variance_abs_tol;
    return p;
  }
};

void add_decompose_flags(CLI::App* cmd, DecomposeOptions& o, bool input_required) {
  auto* in = cmd->add_option("--input", o.input, "Input image (PNG, PGM or PPM)");
  if (input_required) {
    in->required();
  }
  cmd->add_option("--epsilon", o.epsilon, "Chebyshev parameter (> 0)")->required();
  cmd->add_option("--npar", o.npar, "Cosine nearness threshold in [0, 1]")->required();
  cmd->add_option("--formulation", o.formulation, "multivariate or univariate")
      ->check(CLI::IsMember({"multivariate", "univariate"}));
  cmd->add_flag("--strict-paper", o.strict_paper,
                "Use the bare quadratic-form test, without the zero-variance fallback");
  cmd->add_option("--zero-variance-tol", o.zero_variance_tol, "Covariance trace treated as no spread");
  cmd->add_option("--zero-variance-abs-tol", o.zero_variance_abs_tol,
                  "Largest deviation a zero-spread surface accepts");
}

std::optional<fs::path> opt_path(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<fs::path>(s);
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("'" + dir.string() + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && (ext == ".png" || ext == ".pgm" || ext == ".ppm")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Runs every file of a directory through the pipeline. Files are processed
// concurrently; the summary is ordered by file name.
int run_batch(const fs::path& input_dir, const fs::path& out_dir, const RunConfig& base, bool overlays) {
  const std::vector<fs::path> files = list_images(input_dir);
  fs::create_directories(out_dir);
  std::vector<nlohmann::ordered_json> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      RunConfig cfg = base;
      const std::string stem = files[i].stem().string();
      cfg.input = files[i];
      cfg.out_labels = out_dir / (stem + "_labels.png");
      cfg.out_report = out_dir / (stem + "_report.json");
      if (overlays) {
        cfg.out_overlay = out_dir / (stem + "_overlay.png");
      }
      nlohmann::ordered_json row;
      row["file"] = files[i].filename().string();
      try {
        const SegmentOutput out = run_segment(cfg);
        row["surface_count"] = out.report.surface_count;
        row["reduction_factor"] = out.report.reduction_factor;
        row["cost"] = out.report.cluster->cost;
      } catch (const std::exception& e) {
        row["error"] = e.what();
      }
      rows[i] = std::move(row);
    }
  };
  const unsigned threads = std::clamp<unsigned>(std::thread::hardware_concurrency(), 1u,
                                                static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  bool failed = false;
  for (const auto& row : rows) {
    failed = failed || row.contains("error");
  }
  std::cout << nlohmann::ordered_json(rows).dump(2) << "\n";
  return failed ? kExitIo : 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Chebyshev-bounded surface decomposition along a Hilbert curve"};
  app.require_subcommand(1);

  // decompose
  DecomposeOptions dec;
  std::string dec_json;
  std::string dec_overlay;
  auto* decompose_cmd = app.add_subcommand("decompose", "Decompose an image into bounded surfaces");
  add_decompose_flags(decompose_cmd, dec, true);
  decompose_cmd->add_option("--out-json", dec_json, "Decomposition JSON output");
  decompose_cmd->add_option("--out-overlay", dec_overlay, "Surface overlay PNG output");

  // segment
  DecomposeOptions seg;
  ClusterParams cluster;
  std::string seg_labels;
  std::string seg_overlay;
  std::string seg_report;
  std::string seg_input_dir;
  std::string seg_out_dir;
  bool seg_batch_overlays = false;
  auto* segment_cmd = app.add_subcommand("segment", "Decompose and cluster surfaces into a label map");
  add_decompose_flags(segment_cmd, seg, false);
  segment_cmd->add_option("--clusters", cluster.k, "Number of clusters k")->required();
  segment_cmd->add_option("--replicates", cluster.replicates, "k-means replicates")->capture_default_str();
  segment_cmd->add_option("--iterations", cluster.max_iterations, "k-means iteration cap")->capture_default_str();
  segment_cmd->add_option("--seed", cluster.seed, "Random seed")->capture_default_str();
  segment_cmd->add_option("--threads", cluster.threads, "Replicate worker threads (0 = auto)");
  auto* out_labels_opt = segment_cmd->add_option("--out-labels", seg_labels, "Label map PNG output");
  segment_cmd->add_option("--out-overlay", seg_overlay, "Surface overlay PNG output");
  segment_cmd->add_option("--report", seg_report, "Run report JSON output");
  auto* input_dir_opt = segment_cmd->add_option("--input-dir", seg_input_dir, "Batch mode: segment every image here");
  auto* out_dir_opt = segment_cmd->add_option("--out-dir", seg_out_dir, "Batch mode output directory");
  segment_cmd->add_flag("--batch-overlays", seg_batch_overlays, "Batch mode: also write overlays");
  input_dir_opt->needs(out_dir_opt);
  out_dir_opt->needs(input_dir_opt);
  input_dir_opt->excludes(out_labels_opt);

  // bounds
  long pixels = 0;
  int features = 0;
  std::optional<double> bound_epsilon;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print the probability bounds for M pixels and N features");
  bounds_cmd->add_option("--pixels", pixels, "Pixel count M")->required()->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--features", features, "Feature count N")->required()->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--epsilon", bound_epsilon, "Chebyshev parameter");

  // curve
  int curve_h = 0;
  int curve_w = 0;
  auto* curve_cmd = app.add_subcommand("curve", "Print the Hilbert traversal of an image grid as CSV");
  curve_cmd->add_option("--height", curve_h, "Rows")->required();
  curve_cmd->add_option("--width", curve_w, "Columns")->required();

  // eval
  std::string pred_path;
  std::string truth_path;
  std::string pred_dir;
  std::string truth_dir;
  int tolerance = 2;
  auto* eval_cmd = app.add_subcommand("eval", "Boundary precision/recall/F of a label map against truth");
  auto* pred_opt = eval_cmd->add_option("--pred", pred_path, "Predicted label PNG");
  auto* truth_opt = eval_cmd->add_option("--truth", truth_path, "Ground-truth label PNG");
  auto* pred_dir_opt = eval_cmd->add_option("--pred-dir", pred_dir, "Directory of predicted label PNGs");
  auto* truth_dir_opt = eval_cmd->add_option("--truth-dir", truth_dir, "Directory of truth PNGs (same names)");
  eval_cmd->add_option("--tolerance", tolerance, "Match distance in pixels")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  pred_opt->needs(truth_opt);
  truth_opt->needs(pred_opt);
  pred_dir_opt->needs(truth_dir_opt);
  truth_dir_opt->needs(pred_dir_opt);
  pred_opt->excludes(pred_dir_opt);

  // synth
  std::string kind;
  int size = 0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  std::string synth_truth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic test image and its truth labels");
  synth_cmd->add_option("--kind", kind, "constant, half_split, quad, noisy_gradient or two_region_curve")
      ->required();
  synth_cmd->add_option("--size", size, "Side length")->required();
  synth_cmd->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Image PNG output")->required();
  synth_cmd->add_option("--out-truth", synth_truth, "Truth label PNG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitArgument;
  }

  try {
    if (*decompose_cmd) {
      RunConfig cfg;
      cfg.input = dec.input;
      cfg.decompose = dec.params();
      cfg.out_json = opt_path(dec_json);
      cfg.out_overlay = opt_path(dec_overlay);
      cfg.out_report = fs::path("-");
      run_segment(cfg);
    } else if (*segment_cmd) {
      RunConfig cfg;
      cfg.decompose = seg.params();
      cfg.cluster = cluster;
      if (!seg_input_dir.empty()) {
        cfg.input = "<batch>";
        cfg.out_report = fs::path("-");
        validate(cfg);
        return run_batch(seg_input_dir, seg_out_dir, cfg, seg_batch_overlays);
      }
      if (seg.input.empty() || seg_labels.empty()) {
        throw ArgumentError("segment needs --input and --out-labels (or --input-dir and --out-dir)");
      }
      cfg.input = seg.input;
      cfg.out_labels = seg_labels;
      cfg.out_overlay = opt_path(seg_overlay);
      cfg.out_report = opt_path(seg_report);
      const SegmentOutput out = run_segment(cfg);
      if (!cfg.out_report) {
        fmt::print("{} surfaces, reduction factor {:.3f}, cost {:.6g}\n", out.report.surface_count,
                   out.report.reduction_factor, out.report.cluster->cost);
      }
    } else if (*bounds_cmd) {
      std::cout << to_json(make_bound_report(features, pixels, bound_epsilon));
    } else if (*curve_cmd) {
      const CurveCoords curve = curve_for_image(curve_h, curve_w);
      std::string csv = "index,row,col\n";
      for (std::size_t i = 0; i < curve.size(); ++i) {
        fmt::format_to(std::back_inserter(csv), "{},{},{}\n", i, curve[i].row, curve[i].col);
      }
      std::cout << csv;
    } else if (*eval_cmd) {
      if (!pred_path.empty()) {
        const LabelMap pred = load_label_map(pred_path);
        const LabelMap truth = load_label_map(truth_path);
        std::cout << to_json(boundary_fscore(boundary_map(pred), boundary_map(truth), tolerance));
      } else if (!pred_dir.empty()) {
        nlohmann::ordered_json images = nlohmann::ordered_json::array();
        double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
        const std::vector<fs::path> files = list_images(pred_dir);
        for (const fs::path& p : files) {
          const LabelMap pred = load_label_map(p);
          const LabelMap truth = load_label_map(fs::path(truth_dir) / p.filename());
          const PRFScore s = boundary_fscore(boundary_map(pred), boundary_map(truth), tolerance);
          nlohmann::ordered_json row = nlohmann::ordered_json::parse(to_json(s));
          row["file"] = p.filename().string();
          images.push_back(row);
          sum_p += s.precision;
          sum_r += s.recall;
          sum_f += s.f_score;
        }
        const double n = files.empty() ? 1.0 : static_cast<double>(files.size());
        nlohmann::ordered_json doc;
        doc["images"] = images;
        doc["aggregation"] = "arithmetic mean over images";
        doc["mean_precision"] = sum_p / n;
        doc["mean_recall"] = sum_r / n;
        doc["mean_f_score"] = sum_f / n;
        std::cout << doc.dump(2) << "\n";
      } else {
        throw ArgumentError("eval needs --pred/--truth or --pred-dir/--truth-dir");
      }
    } else if (*synth_cmd) {
      const SyntheticImage img = make_synthetic(parse_synthetic_kind(kind), size, synth_seed);
      write_image_png(img.image, synth_out);
      write_label_map(img.truth, synth_truth);
    }
  } catch (const ArgumentError& e) {
    spdlog::error("{}", e.what());
    return kExitArgument;
  } catch (const DomainError& e) {
    spdlog::error("{}", e.what());
    return kExitArgument;
  } catch (const CapacityError& e) {
    spdlog::error("{}", e.what());
    return kExitArgument;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInvariant;
  }
  return 0;
}
