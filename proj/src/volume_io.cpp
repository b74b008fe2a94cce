// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/volume_io.hpp>

#include <volray/error.hpp>
#include <volray/image_io.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace volray {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value,
                                  std::size_t expected) {
    std::istringstream in(value);
    std::vector<double> out;
    double v = 0.0;
    while (in >> v) {
        out.push_back(v);
    }
    if (!in.eof() || out.size() != expected) {
        throw InvalidHeader(key + " needs " + std::to_string(expected) + " numbers, got '" + value +
                            "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw InvalidHeader(key + " must be True or False, got '" + value + "'");
}

std::string element_type_name(ElementType type) {
    switch (type) {
        case ElementType::uint8: return "MET_UCHAR";
        case ElementType::uint16: return "MET_USHORT";
        case ElementType::float32: return "MET_FLOAT";
    }
    return "MET_UCHAR";
}

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

/// Natural ordering: runs of digits compare by numeric value.
bool numeric_less(const std::string& a, const std::string& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            std::string_view ra(a.data() + i, ie - i);
            std::string_view rb(b.data() + j, je - j);
            while (ra.size() > 1 && ra.front() == '0') ra.remove_prefix(1);
            while (rb.size() > 1 && rb.front() == '0') rb.remove_prefix(1);
            if (ra.size() != rb.size()) return ra.size() < rb.size();
            if (ra != rb) return ra < rb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
    return a < b;
}

}  // namespace

std::size_t element_size(ElementType type) {
    switch (type) {
        case ElementType::uint8: return 1;
        case ElementType::uint16: return 2;
        case ElementType::float32: return 4;
    }
    return 1;
}

VolumeHeader parse_volume_header(std::string_view text) {
    VolumeHeader header;
    bool have_ndims = false;
    bool have_dims = false;
    bool have_type = false;

    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw InvalidHeader("expected 'Key = value', got '" + stripped + "'");
        }
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));

        if (key == "NDims") {
            if (parse_numbers(key, value, 1)[0] != 3.0) {
                throw InvalidHeader("NDims must be 3, got " + value);
            }
            have_ndims = true;
        } else if (key == "DimSize") {
            const auto n = parse_numbers(key, value, 3);
            for (const double d : n) {
                if (d != std::floor(d) || d < 2.0 || d > 1e6) {
                    throw InvalidHeader("DimSize entries must be integers >= 2, got '" + value + "'");
                }
            }
            header.dims = {static_cast<int>(n[0]), static_cast<int>(n[1]), static_cast<int>(n[2])};
            have_dims = true;
        } else if (key == "ElementSpacing") {
            const auto n = parse_numbers(key, value, 3);
            if (!(n[0] > 0.0 && n[1] > 0.0 && n[2] > 0.0)) {
                throw InvalidHeader("ElementSpacing must be positive, got '" + value + "'");
            }
            header.spacing = {n[0], n[1], n[2]};
        } else if (key == "Offset") {
            const auto n = parse_numbers(key, value, 3);
            header.origin = {n[0], n[1], n[2]};
        } else if (key == "ElementType") {
            if (value == "MET_UCHAR") {
                header.element_type = ElementType::uint8;
            } else if (value == "MET_USHORT") {
                header.element_type = ElementType::uint16;
            } else if (value == "MET_FLOAT") {
                header.element_type = ElementType::float32;
            } else {
                throw UnsupportedFormat("unsupported ElementType '" + value +
                                        "' (expected MET_UCHAR, MET_USHORT or MET_FLOAT)");
            }
            have_type = true;
        } else if (key == "ElementByteOrderMSB") {
            header.byte_order = parse_bool(key, value) ? ByteOrder::big : ByteOrder::little;
        } else if (key == "ElementDataFile") {
            if (value == "LOCAL") {
                throw UnsupportedFormat("inline (LOCAL) payloads are not supported");
            }
            header.data_file = value;
        } else if (key == "Window") {
            const auto n = parse_numbers(key, value, 2);
            if (!(n[0] < n[1])) {
                throw InvalidHeader("Window requires lo < hi, got '" + value + "'");
            }
            header.window = ValueRange{n[0], n[1]};
        } else {
            header.ignored_keys.push_back(key);
        }
    }

    if (!have_ndims) throw InvalidHeader("missing NDims");
    if (!have_dims) throw InvalidHeader("missing DimSize");
    if (!have_type) throw InvalidHeader("missing ElementType");
    if (header.data_file.empty()) throw InvalidHeader("missing ElementDataFile");
    return header;
}

std::string format_volume_header(const VolumeHeader& header) {
    std::ostringstream out;
    out << "NDims = 3\n";
    out << "DimSize = " << header.dims.nx << ' ' << header.dims.ny << ' ' << header.dims.nz << '\n';
    out << "ElementSpacing = " << format_number(header.spacing.x) << ' '
        << format_number(header.spacing.y) << ' ' << format_number(header.spacing.z) << '\n';
    out << "Offset = " << format_number(header.origin.x) << ' ' << format_number(header.origin.y)
        << ' ' << format_number(header.origin.z) << '\n';
    out << "ElementType = " << element_type_name(header.element_type) << '\n';
    out << "ElementByteOrderMSB = " << (header.byte_order == ByteOrder::big ? "True" : "False")
        << '\n';
    if (header.window) {
        out << "Window = " << format_number(header.window->lo) << ' '
            << format_number(header.window->hi) << '\n';
    }
    out << "ElementDataFile = " << header.data_file << '\n';
    return out.str();
}

std::vector<double> decode_elements(std::span<const std::uint8_t> bytes, ElementType type,
                                    ByteOrder order) {
    const std::size_t size = element_size(type);
    const std::size_t count = bytes.size() / size;
    std::vector<double> out(count);
    const bool swap = (order == ByteOrder::big) != (std::endian::native == std::endian::big);
    for (std::size_t n = 0; n < count; ++n) {
        std::uint8_t b[4];
        std::memcpy(b, bytes.data() + n * size, size);
        if (swap) {
            std::reverse(b, b + size);
        }
        switch (type) {
            case ElementType::uint8: out[n] = b[0]; break;
            case ElementType::uint16: {
                std::uint16_t v;
                std::memcpy(&v, b, 2);
                out[n] = v;
                break;
            }
            case ElementType::float32: {
                float v;
                std::memcpy(&v, b, 4);
                if (!std::isfinite(v)) {
                    throw CorruptData("non-finite float element at index " + std::to_string(n));
                }
                out[n] = v;
                break;
            }
        }
    }
    return out;
}

ScalarVolume load_volume(const std::filesystem::path& header_path) {
    std::ifstream in(header_path);
    if (!in) {
        throw Error("cannot open volume header " + header_path.string());
    }
    std::stringstream text;
    text << in.rdbuf();
    const VolumeHeader header = parse_volume_header(text.str());
    for (const std::string& key : header.ignored_keys) {
        std::cerr << "warning: " << header_path.string() << ": ignoring unknown key '" << key
                  << "'\n";
    }

    std::filesystem::path data_path = header.data_file;
    if (data_path.is_relative()) {
        data_path = header_path.parent_path() / data_path;
    }
    const std::size_t expected = header.dims.voxel_count() * element_size(header.element_type);
    std::error_code ec;
    const auto actual = std::filesystem::file_size(data_path, ec);
    if (ec) {
        throw CorruptData("data file " + data_path.string() + " is missing (expected " +
                          std::to_string(expected) + " bytes)");
    }
    if (actual != expected) {
        throw CorruptData("data file " + data_path.string() + " has " + std::to_string(actual) +
                          " bytes, expected " + std::to_string(expected));
    }
    const std::vector<std::uint8_t> bytes = read_file_bytes(data_path);
    if (bytes.size() != expected) {
        throw CorruptData("data file " + data_path.string() + " has " +
                          std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(expected));
    }
    const std::vector<double> raw = decode_elements(bytes, header.element_type, header.byte_order);
    NormalizedScalars normalized = normalize_scalars(raw, header.window);
    return ScalarVolume(header.dims, header.spacing, header.origin, std::move(normalized.samples),
                        normalized.source_range);
}

void save_volume(const ScalarVolume& volume, const std::filesystem::path& header_path,
                 ElementType type, ByteOrder order) {
    VolumeHeader header;
    header.dims = volume.dims();
    header.spacing = volume.spacing();
    header.origin = volume.origin();
    header.element_type = type;
    header.byte_order = order;
    std::filesystem::path data_path = header_path;
    data_path.replace_extension(".raw");
    header.data_file = data_path.filename().string();

    const double full_scale = type == ElementType::uint8    ? 255.0
                              : type == ElementType::uint16 ? 65535.0
                                                            : 1.0;
    header.window = ValueRange{0.0, full_scale};

    const std::size_t size = element_size(type);
    const bool swap = (order == ByteOrder::big) != (std::endian::native == std::endian::big);
    std::vector<std::uint8_t> payload(volume.samples().size() * size);
    std::size_t n = 0;
    for (const double s : volume.samples()) {
        std::uint8_t b[4];
        if (type == ElementType::float32) {
            const float v = static_cast<float>(s);
            std::memcpy(b, &v, 4);
        } else if (type == ElementType::uint16) {
            const auto v = static_cast<std::uint16_t>(std::lround(s * full_scale));
            std::memcpy(b, &v, 2);
        } else {
            b[0] = static_cast<std::uint8_t>(std::lround(s * full_scale));
        }
        if (swap) {
            std::reverse(b, b + size);
        }
        std::memcpy(payload.data() + n * size, b, size);
        ++n;
    }
    write_file_bytes(data_path, payload);

    const std::string text = format_volume_header(header);
    write_file_bytes(header_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                            text.size()));
}

std::vector<std::filesystem::path> list_slice_files(const std::filesystem::path& directory,
                                                    SliceOrder order) {
    if (!std::filesystem::is_directory(directory)) {
        throw InvalidArgument("slice directory " + directory.string() + " does not exist");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".pgm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [order](const auto& a, const auto& b) {
        const std::string fa = a.filename().string();
        const std::string fb = b.filename().string();
        return order == SliceOrder::numeric ? numeric_less(fa, fb) : fa < fb;
    });
    return files;
}

ScalarVolume load_slice_stack(const std::filesystem::path& directory, Vec3 spacing,
                              SliceOrder order) {
    const auto files = list_slice_files(directory, order);
    if (files.size() < 2) {
        throw InvalidArgument("a slice stack needs at least 2 images, found " +
                              std::to_string(files.size()) + " in " + directory.string());
    }
    std::vector<double> raw;
    Dims dims;
    for (std::size_t k = 0; k < files.size(); ++k) {
        const GrayImage slice = read_gray_image(files[k]);
        if (k == 0) {
            dims = {slice.width, slice.height, static_cast<int>(files.size())};
            raw.reserve(dims.voxel_count());
        } else if (slice.width != dims.nx || slice.height != dims.ny) {
            throw InconsistentStack("slice " + files[k].filename().string() + " is " +
                                    std::to_string(slice.width) + "x" +
                                    std::to_string(slice.height) + ", expected " +
                                    std::to_string(dims.nx) + "x" + std::to_string(dims.ny));
        }
        raw.insert(raw.end(), slice.levels.begin(), slice.levels.end());
    }
    NormalizedScalars normalized = normalize_scalars(raw);
    return ScalarVolume(dims, spacing, Vec3{}, std::move(normalized.samples),
                        normalized.source_range);
}

void save_slice_stack(const ScalarVolume& volume, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    const Dims& d = volume.dims();
    for (int k = 0; k < d.nz; ++k) {
        GrayImage slice{d.nx, d.ny, 8, {}};
        slice.levels.reserve(static_cast<std::size_t>(d.nx) * d.ny);
        for (int j = 0; j < d.ny; ++j) {
            for (int i = 0; i < d.nx; ++i) {
                slice.levels.push_back(static_cast<std::uint16_t>(std::lround(volume.at(i, j, k) * 255.0)));
            }
        }
        char name[32];
        std::snprintf(name, sizeof(name), "slice_%04d.png", k);
        write_gray_png(slice, directory / name);
    }
}

}  // namespace volray
