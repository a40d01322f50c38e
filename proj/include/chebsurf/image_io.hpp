#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "chebsurf/image.hpp"
#include "chebsurf/surface_decomposer.hpp"

namespace chebsurf {

using Rgb = std::array<std::uint8_t, 3>;

/// Loads 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette) or binary PGM/PPM
/// (P5/P6, maxval <= 255). Alpha is dropped; gray gives N = 1, colour N = 3.
ImageTensor load_image(const std::filesystem::path& path);

/// Writes an 8-bit gray (N = 1) or RGB (N = 3) PNG. Values are rounded and
/// clamped to [0, 255].
void write_image_png(const ImageTensor& image, const std::filesystem::path& path);

/// Entry i of the fixed label palette:
///   r = (97 i + 31) mod 256, g = (57 i + 101) mod 256, b = (23 i + 199) mod 256.
/// The red channel alone is a bijection, so all 256 entries are distinct.
Rgb label_palette_color(int index);

/// Indexed-colour PNG using the label palette. Labels must lie in [0, 256).
void write_label_map(const LabelMap& labels, const std::filesystem::path& path);

/// Reads a label image. Gray PNGs give the gray value as the label; colour
/// and palette PNGs map palette colours back to their palette index, and any
/// other colour gets a fresh label (256, 257, ...) in raster order of first
/// appearance.
LabelMap load_label_map(const std::filesystem::path& path);

/// RGB rendering where every surface gets a colour from a fixed 64-entry
/// table, chosen so that 4-adjacent surfaces differ.
ImageTensor render_surface_overlay(const Decomposition& d);
void write_surface_overlay(const Decomposition& d, const std::filesystem::path& path);

/// JSON document {"height","width","n_features","epsilon","npar",
/// "formulation","surfaces":[{"id","pixel_count","pixels","mean"}...]}, with
/// floats printed to 17 significant digits.
std::string decomposition_to_json(const Decomposition& d);
void export_decomposition(const Decomposition& d, const std::filesystem::path& path);

/// Parses and validates a decomposition document. Surface features are not
/// part of the format; pass the source image to re-attach them.
Decomposition decomposition_from_json(const std::string& text, const ImageTensor* image = nullptr);
Decomposition import_decomposition(const std::filesystem::path& path, const ImageTensor* image = nullptr);

}  // namespace chebsurf
