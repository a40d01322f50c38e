#include "chebsurf/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>
#include <png.h>

#include "chebsurf/errors.hpp"
#include "chebsurf/hilbert_curve.hpp"

namespace chebsurf {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return bytes.size() >= 8 && std::equal(std::begin(kSig), std::end(kSig), bytes.begin());
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 gray, 3 rgb (alpha already removed)
  std::vector<std::uint8_t> pixels;
};

DecodedPng decode_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError("PNG decode failed for '" + path.string() + "': " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  const int file_channels = (color ? 3 : 1) + (alpha ? 1 : 0);
  image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB) : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);

  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG decode failed for '" + path.string() + "': " + msg);
  }

  DecodedPng out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  out.pixels.resize(count * static_cast<std::size_t>(out.channels));
  for (std::size_t i = 0; i < count; ++i) {
    for (int c = 0; c < out.channels; ++c) {
      out.pixels[i * static_cast<std::size_t>(out.channels) + static_cast<std::size_t>(c)] =
          raw[i * static_cast<std::size_t>(file_channels) + static_cast<std::size_t>(c)];
    }
  }
  return out;
}

// Binary PGM (P5) / PPM (P6) with maxval <= 255.
DecodedPng decode_pnm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  const std::string fmt_name = bytes.size() >= 2 && bytes[1] == '5' ? "PGM" : "PPM";
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) {
        ++pos;
      }
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') {
          ++pos;
        }
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw IoError(fmt_name + " header malformed in '" + path.string() + "'");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > (1L << 30)) {
        throw IoError(fmt_name + " header value too large in '" + path.string() + "'");
      }
      ++pos;
    }
    return value;
  };

  DecodedPng out;
  out.channels = bytes[1] == '5' ? 1 : 3;
  out.width = static_cast<int>(next_token());
  out.height = static_cast<int>(next_token());
  const long maxval = next_token();
  if (out.width < 1 || out.height < 1) {
    throw IoError(fmt_name + " has zero dimension in '" + path.string() + "'");
  }
  if (maxval < 1 || maxval > 255) {
    throw IoError(fmt_name + " maxval " + std::to_string(maxval) + " unsupported in '" + path.string() +
                  "' (8-bit only)");
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw IoError(fmt_name + " header malformed in '" + path.string() + "'");
  }
  ++pos;
  const std::size_t need = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height) *
                           static_cast<std::size_t>(out.channels);
  if (bytes.size() - pos < need) {
    throw IoError(fmt_name + " truncated: '" + path.string() + "' has " + std::to_string(bytes.size() - pos) +
                  " of " + std::to_string(need) + " pixel bytes");
  }
  out.pixels.assign(bytes.begin() + static_cast<long>(pos), bytes.begin() + static_cast<long>(pos + need));
  return out;
}

DecodedPng decode_any(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (is_png(bytes)) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes, path);
  }
  throw IoError("unsupported image format in '" + path.string() + "' (expected PNG, PGM P5 or PPM P6)");
}

void write_png_buffer(const fs::path& path, int width, int height, png_uint_32 format,
                      const std::vector<std::uint8_t>& buffer, const void* colormap, int colormap_entries) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  image.colormap_entries = static_cast<png_uint_32>(colormap_entries);

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, buffer.data(), 0, colormap)) {
    throw IoError("PNG encode failed for '" + path.string() + "': " + image.message);
  }
  std::string bytes(size, '\0');
  if (!png_image_write_to_memory(&image, bytes.data(), &size, 0, buffer.data(), 0, colormap)) {
    throw IoError("PNG encode failed for '" + path.string() + "': " + image.message);
  }
  bytes.resize(size);
  write_file(path, bytes);
}

constexpr int kOverlayColors = 64;

Rgb overlay_color(int slot) {
  // splitmix64 of the slot index; keep channels away from black.
  std::uint64_t z = static_cast<std::uint64_t>(slot) + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return {static_cast<std::uint8_t>(48 + (z & 0xFF) % 208), static_cast<std::uint8_t>(48 + ((z >> 8) & 0xFF) % 208),
          static_cast<std::uint8_t>(48 + ((z >> 16) & 0xFF) % 208)};
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

ImageTensor load_image(const fs::path& path) {
  const DecodedPng png = decode_any(path);
  ImageTensor out(png.height, png.width, png.channels);
  std::size_t i = 0;
  for (int r = 0; r < png.height; ++r) {
    for (int c = 0; c < png.width; ++c) {
      for (int ch = 0; ch < png.channels; ++ch) {
        out.at(r, c, ch) = static_cast<double>(png.pixels[i++]);
      }
    }
  }
  return out;
}

void write_image_png(const ImageTensor& image, const fs::path& path) {
  if (image.n_features() != 1 && image.n_features() != 3) {
    throw ArgumentError("PNG output needs 1 or 3 channels, image has " + std::to_string(image.n_features()));
  }
  if (image.empty()) {
    throw ArgumentError("cannot write an empty image");
  }
  std::vector<std::uint8_t> buffer(image.data().size());
  std::transform(image.data().begin(), image.data().end(), buffer.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  });
  write_png_buffer(path, image.width(), image.height(),
                   image.n_features() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB, buffer, nullptr, 0);
}

Rgb label_palette_color(int index) {
  if (index < 0 || index > 255) {
    throw ArgumentError("palette index " + std::to_string(index) + " outside [0, 256)");
  }
  const auto i = static_cast<unsigned>(index);
  return {static_cast<std::uint8_t>((97 * i + 31) & 0xFF), static_cast<std::uint8_t>((57 * i + 101) & 0xFF),
          static_cast<std::uint8_t>((23 * i + 199) & 0xFF)};
}

void write_label_map(const LabelMap& labels, const fs::path& path) {
  if (labels.height() < 1 || labels.width() < 1) {
    throw ArgumentError("cannot write an empty label map");
  }
  for (int v : labels.labels()) {
    if (v < 0 || v > 255) {
      throw ArgumentError("label " + std::to_string(v) + " does not fit the 256-entry palette");
    }
  }
  std::vector<std::uint8_t> colormap(256 * 3);
  for (int i = 0; i < 256; ++i) {
    const Rgb c = label_palette_color(i);
    std::copy(c.begin(), c.end(), colormap.begin() + 3 * i);
  }
  std::vector<std::uint8_t> indices(labels.labels().size());
  std::transform(labels.labels().begin(), labels.labels().end(), indices.begin(),
                 [](int v) { return static_cast<std::uint8_t>(v); });
  write_png_buffer(path, labels.width(), labels.height(), PNG_FORMAT_RGB_COLORMAP, indices, colormap.data(), 256);
}

LabelMap load_label_map(const fs::path& path) {
  const DecodedPng png = decode_any(path);
  LabelMap out(png.height, png.width);
  if (png.channels == 1) {
    for (int r = 0; r < png.height; ++r) {
      for (int c = 0; c < png.width; ++c) {
        out.at(r, c) = png.pixels[static_cast<std::size_t>(r) * static_cast<std::size_t>(png.width) +
                                  static_cast<std::size_t>(c)];
      }
    }
    return out;
  }
  std::map<Rgb, int> lookup;
  for (int i = 0; i < 256; ++i) {
    lookup.emplace(label_palette_color(i), i);
  }
  int next_label = 256;
  std::size_t i = 0;
  for (int r = 0; r < png.height; ++r) {
    for (int c = 0; c < png.width; ++c, i += 3) {
      const Rgb color = {png.pixels[i], png.pixels[i + 1], png.pixels[i + 2]};
      auto [it, inserted] = lookup.emplace(color, next_label);
      if (inserted) {
        ++next_label;
      }
      out.at(r, c) = it->second;
    }
  }
  return out;
}

ImageTensor render_surface_overlay(const Decomposition& d) {
  std::vector<int> owner(d.pixel_count(), -1);
  const auto flat = [&](int r, int c) {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(d.width) + static_cast<std::size_t>(c);
  };
  for (const Surface& s : d.surfaces) {
    for (const PixelLoc& p : s.pixel_locs) {
      owner[flat(p.row, p.col)] = s.id;
    }
  }

  std::vector<int> slot(d.surfaces.size(), -1);
  std::vector<char> taken(kOverlayColors);
  static constexpr int kDr[4] = {-1, 1, 0, 0};
  static constexpr int kDc[4] = {0, 0, -1, 1};
  for (const Surface& s : d.surfaces) {
    std::fill(taken.begin(), taken.end(), 0);
    for (const PixelLoc& p : s.pixel_locs) {
      for (int k = 0; k < 4; ++k) {
        const int r = p.row + kDr[k];
        const int c = p.col + kDc[k];
        if (r < 0 || r >= d.height || c < 0 || c >= d.width) {
          continue;
        }
        const int other = owner[flat(r, c)];
        if (other >= 0 && other != s.id && slot[static_cast<std::size_t>(other)] >= 0) {
          taken[static_cast<std::size_t>(slot[static_cast<std::size_t>(other)])] = 1;
        }
      }
    }
    int chosen = s.id % kOverlayColors;
    for (int t = 0; t < kOverlayColors; ++t) {
      const int candidate = (s.id + t) % kOverlayColors;
      if (!taken[static_cast<std::size_t>(candidate)]) {
        chosen = candidate;
        break;
      }
    }
    slot[static_cast<std::size_t>(s.id)] = chosen;
  }

  ImageTensor out(d.height, d.width, 3);
  for (const Surface& s : d.surfaces) {
    const Rgb color = overlay_color(slot[static_cast<std::size_t>(s.id)]);
    for (const PixelLoc& p : s.pixel_locs) {
      for (int ch = 0; ch < 3; ++ch) {
        out.at(p.row, p.col, ch) = color[static_cast<std::size_t>(ch)];
      }
    }
  }
  return out;
}

void write_surface_overlay(const Decomposition& d, const fs::path& path) {
  write_image_png(render_surface_overlay(d), path);
}

std::string decomposition_to_json(const Decomposition& d) {
  std::string out;
  out.reserve(64 + d.pixel_count() * 12);
  auto it = std::back_inserter(out);
  fmt::format_to(it, "{{\"height\":{},\"width\":{},\"n_features\":{},\"epsilon\":{},\"npar\":{},\"formulation\":\"{}\",",
                 d.height, d.width, d.n_features, format_double(d.params.epsilon), format_double(d.params.npar),
                 to_string(d.params.formulation));
  out += "\"surfaces\":[";
  for (std::size_t i = 0; i < d.surfaces.size(); ++i) {
    const Surface& s = d.surfaces[i];
    if (i > 0) {
      out += ',';
    }
    fmt::format_to(it, "\n{{\"id\":{},\"pixel_count\":{},\"pixels\":[", s.id, s.pixel_locs.size());
    for (std::size_t j = 0; j < s.pixel_locs.size(); ++j) {
      fmt::format_to(it, "{}[{},{}]", j > 0 ? "," : "", s.pixel_locs[j].row, s.pixel_locs[j].col);
    }
    out += "],\"mean\":[";
    for (Eigen::Index j = 0; j < s.mean_feature.size(); ++j) {
      fmt::format_to(it, "{}{}", j > 0 ? "," : "", format_double(s.mean_feature(j)));
    }
    out += "]}";
  }
  out += "\n]}\n";
  return out;
}

void export_decomposition(const Decomposition& d, const fs::path& path) {
  write_file(path, decomposition_to_json(d));
}

Decomposition decomposition_from_json(const std::string& text, const ImageTensor* image) {
  Decomposition d;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    d.height = doc.at("height").get<int>();
    d.width = doc.at("width").get<int>();
    d.n_features = doc.at("n_features").get<int>();
    d.params.epsilon = doc.at("epsilon").get<double>();
    d.params.npar = doc.at("npar").get<double>();
    d.params.formulation = parse_formulation(doc.at("formulation").get<std::string>());
    for (const auto& rec : doc.at("surfaces")) {
      Surface s;
      s.id = rec.at("id").get<int>();
      const auto count = rec.at("pixel_count").get<std::size_t>();
      for (const auto& p : rec.at("pixels")) {
        if (p.size() != 2) {
          throw ValidationError("pixel entries must be [row, col] pairs");
        }
        s.pixel_locs.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
      }
      if (count != s.pixel_locs.size()) {
        throw ValidationError("surface " + std::to_string(s.id) + ": pixel_count " + std::to_string(count) +
                              " disagrees with " + std::to_string(s.pixel_locs.size()) + " listed pixels");
      }
      const auto mean = rec.at("mean").get<std::vector<double>>();
      s.mean_feature = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      d.surfaces.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed decomposition JSON: ") + e.what());
  }
  validate(d.params);
  validate(d);

  if (image != nullptr) {
    if (image->height() != d.height || image->width() != d.width || image->n_features() != d.n_features) {
      throw ValidationError("image shape does not match the decomposition");
    }
    for (Surface& s : d.surfaces) {
      s.features.resize(d.n_features, static_cast<Eigen::Index>(s.pixel_locs.size()));
      for (std::size_t j = 0; j < s.pixel_locs.size(); ++j) {
        s.features.col(static_cast<Eigen::Index>(j)) = image->pixel(s.pixel_locs[j]);
      }
    }
    validate(d);
  }
  return d;
}

Decomposition import_decomposition(const fs::path& path, const ImageTensor* image) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return decomposition_from_json(std::string(bytes.begin(), bytes.end()), image);
}

}  // namespace chebsurf
