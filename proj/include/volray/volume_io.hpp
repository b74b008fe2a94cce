// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/volume.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace volray {

enum class ElementType { uint8, uint16, float32 };
enum class ByteOrder { little, big };

std::size_t element_size(ElementType type);

/// Text key-value subset of MetaImage (.mhd). Recognized keys: NDims (must be
/// 3), DimSize, ElementSpacing, ElementType (MET_UCHAR | MET_USHORT |
/// MET_FLOAT), ElementByteOrderMSB, ElementDataFile, Offset and Window.
struct VolumeHeader {
    Dims dims;
    Vec3 spacing{1.0, 1.0, 1.0};
    Vec3 origin;
    ElementType element_type = ElementType::uint8;
    ByteOrder byte_order = ByteOrder::little;
    std::string data_file;
    std::optional<ValueRange> window;
    std::vector<std::string> ignored_keys;
};

/// Throws InvalidHeader for malformed or out-of-range entries and
/// UnsupportedFormat for element types or data layouts outside the subset.
VolumeHeader parse_volume_header(std::string_view text);
std::string format_volume_header(const VolumeHeader& header);

/// Decodes `count` elements from a raw payload into doubles.
std::vector<double> decode_elements(std::span<const std::uint8_t> bytes, ElementType type,
                                    ByteOrder order);

/// Reads the header, then exactly dims.x * dims.y * dims.z elements from the
/// data file (resolved relative to the header). A payload of any other size
/// raises CorruptData naming the expected and actual byte counts. Unknown
/// header keys are reported on stderr and otherwise ignored.
ScalarVolume load_volume(const std::filesystem::path& header_path);

/// Writes `header_path` plus a sibling `.raw` payload. Samples are quantized
/// to the full range of the element type and the header carries a matching
/// Window, so uint8 volumes whose samples are k/255 reload exactly.
void save_volume(const ScalarVolume& volume, const std::filesystem::path& header_path,
                 ElementType type = ElementType::uint8, ByteOrder order = ByteOrder::little);

enum class SliceOrder {
    lexicographic,  // plain filename comparison: "s10" sorts before "s2"
    numeric,        // digit runs compared by value: "s2" before "s10"
};

/// Stacks every .png/.pgm file in `directory` (slice k at z index k) and
/// normalizes over the global min/max of all slices. Throws InvalidArgument
/// for fewer than two slices and InconsistentStack when a slice's size
/// differs from the first one.
ScalarVolume load_slice_stack(const std::filesystem::path& directory, Vec3 spacing,
                              SliceOrder order = SliceOrder::lexicographic);

/// Writes one 8-bit grayscale PNG per z slice (slice_0000.png, ...).
void save_slice_stack(const ScalarVolume& volume, const std::filesystem::path& directory);

/// Slice file names in stacking order.
std::vector<std::filesystem::path> list_slice_files(const std::filesystem::path& directory,
                                                    SliceOrder order);

}  // namespace volray
