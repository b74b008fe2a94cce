// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/engine.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace volray {

/// Single-channel image with raw integer levels (8- or 16-bit sources).
struct GrayImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    std::vector<std::uint16_t> levels;  // width * height, row-major
};

std::vector<std::uint8_t> encode_png(const FrameImage& image);
/// Decodes any PNG into 8-bit RGBA. Throws CorruptData on malformed input.
FrameImage decode_png(std::span<const std::uint8_t> bytes);

/// Binary PPM (P6, maxval 255); alpha is dropped.
std::vector<std::uint8_t> encode_ppm(const FrameImage& image);

/// Grayscale PNG (8/16-bit, alpha ignored) or binary PGM (P5). Color images
/// raise UnsupportedFormat.
GrayImage read_gray_image(const std::filesystem::path& path);
void write_gray_png(const GrayImage& image, const std::filesystem::path& path);

/// Writes PPM for `.ppm` and PNG for `.png`; any other extension raises
/// UnsupportedFormat. I/O failures raise Error.
void save_image(const FrameImage& image, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace volray
